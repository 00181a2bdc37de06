"""Velocity-space and spatial discretizations.

Velocity integrals use a midpoint tensor rule on the box [-L, L]^n.  For
Gaussian-like integrands that are negligible at the box edge this rule
converges much faster than its nominal second order, which is what lets the
quadrature reproduce closed-form Maxwellian integrals to ~1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class VelocityGrid:
    n: int
    extent: float
    points_per_axis: int
    nodes: np.ndarray = field(repr=False, compare=False)
    weights: np.ndarray = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    @property
    def spacing(self) -> float:
        return 2.0 * self.extent / self.points_per_axis

    @property
    def axis(self) -> np.ndarray:
        """Node coordinates along a single axis."""
        m = self.points_per_axis
        return (np.arange(m) + 0.5 - m / 2) * self.spacing

    @property
    def speed_sq(self) -> np.ndarray:
        return np.sum(self.nodes**2, axis=1)

    def reshape(self, values: np.ndarray) -> np.ndarray:
        """View per-node values as an (m,)*n array (C order, first axis slowest)."""
        return np.asarray(values).reshape((self.points_per_axis,) * self.n)

    def reflect(self, values: np.ndarray) -> np.ndarray:
        """Values of zeta -> values(-zeta), per node."""
        arr = self.reshape(values)
        return arr[(slice(None, None, -1),) * self.n].reshape(-1)


@dataclass(frozen=True)
class SpatialDomain:
    n_x: int
    cell_volumes: np.ndarray = field(compare=False)

    @property
    def total_volume(self) -> float:
        return float(np.sum(self.cell_volumes))

    @property
    def cells(self) -> int:
        return len(self.cell_volumes)


@dataclass(frozen=True)
class SphereRule:
    n: int
    directions: np.ndarray = field(repr=False, compare=False)
    weights: np.ndarray = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.directions.shape[0]


def make_velocity_grid(n: int, L: float, m: int) -> VelocityGrid:
    if n not in (1, 2, 3):
        raise ValueError(f"velocity dimension must be 1, 2 or 3, got {n}")
    if not L > 0:
        raise ValueError(f"half-width L must be positive, got {L}")
    if m < 2:
        raise ValueError(f"need at least 2 points per axis, got {m}")
    h = 2.0 * L / m
    # offsets k + 1/2 - m/2 are exact, so node k is bitwise the negative of node m-1-k
    axis = (np.arange(m) + 0.5 - m / 2) * h
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    nodes = np.stack([g.reshape(-1) for g in mesh], axis=1)
    weights = np.full(nodes.shape[0], h**n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return VelocityGrid(n=n, extent=float(L), points_per_axis=int(m), nodes=nodes, weights=weights)


def make_domain(cells: int = 1, V_omega: float = 1.0, n_x: int = 1) -> SpatialDomain:
    """Box split into ``cells`` equal slabs of total volume ``V_omega``."""
    if cells < 1:
        raise ValueError(f"need at least one cell, got {cells}")
    if not V_omega > 0:
        raise ValueError(f"domain volume must be positive, got {V_omega}")
    vols = np.full(cells, V_omega / cells)
    vols.setflags(write=False)
    return SpatialDomain(n_x=n_x, cell_volumes=vols)


def integrate(grid: VelocityGrid, values) -> float:
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.size,):
        raise ValueError(f"expected {grid.size} node values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("integrand contains non-finite values")
    # pairing each node with its mirror image makes odd integrands cancel exactly
    return 0.5 * float(np.dot(grid.weights, values + grid.reflect(values)))


def make_sphere_rule(n: int, k: int) -> SphereRule:
    if n not in (2, 3):
        raise ValueError(f"sphere rules exist for n=2 or n=3 only, got n={n}")
    if k < 4:
        raise ValueError(f"need at least 4 directions, got {k}")
    if n == 2:
        theta = 2.0 * np.pi * np.arange(k) / k
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        w = np.full(k, 2.0 * np.pi / k)
    else:
        # Fibonacci spiral: equal-area points on S^2
        i = np.arange(k) + 0.5
        z = 1.0 - 2.0 * i / k
        r = np.sqrt(1.0 - z**2)
        phi = i * math.pi * (3.0 - math.sqrt(5.0))
        dirs = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
        w = np.full(k, 4.0 * np.pi / k)
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    dirs.setflags(write=False)
    w.setflags(write=False)
    return SphereRule(n=n, directions=dirs, weights=w)
