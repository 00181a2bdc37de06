"""Collision physics at desk scale.

``q_evaluate`` is a brute-force discrete-velocity quadrature of the binary
collision operator with a constant kernel (Maxwell pseudo-molecules).
``bgk_step``/``relax`` implement the BGK relaxation model, which shares the
equilibria and the entropy inequality with the full operator and is what the
time-dependent checks run on.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.ndimage import map_coordinates, spline_filter

from .dist import DistributionField, MaxwellianParams, cell_moments, entropy, local_maxwellian
from .functionals import distance, functional_F
from .grid import SphereRule, VelocityGrid

# nodes^2 * directions above which q_evaluate refuses to run
DEFAULT_COST_LIMIT = 5e7


@dataclass(frozen=True)
class CollisionPair:
    zeta: np.ndarray
    zeta_star: np.ndarray
    sigma: np.ndarray
    zeta_prime: np.ndarray
    zeta_star_prime: np.ndarray


def sigma_transform(zeta, zeta_star, sigma) -> CollisionPair:
    zeta = np.asarray(zeta, dtype=float)
    zeta_star = np.asarray(zeta_star, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if not (zeta.shape == zeta_star.shape == sigma.shape):
        raise ValueError("zeta, zeta_star and sigma must have the same dimension")
    if abs(np.linalg.norm(sigma) - 1.0) > 1e-12:
        raise ValueError(f"sigma must be a unit vector, |sigma| = {np.linalg.norm(sigma)!r}")
    center = 0.5 * (zeta + zeta_star)
    half = 0.5 * np.linalg.norm(zeta_star - zeta) * sigma
    return CollisionPair(zeta, zeta_star, sigma, center + half, center - half)


# zero ghost nodes added around the lattice before spline prefiltering
_SPLINE_PAD = 12


def _spline_evaluator(grid: VelocityGrid, values: np.ndarray, order: int):
    pad = _SPLINE_PAD if order > 1 else 1
    coef = np.pad(grid.reshape(values), pad)
    if order > 1:
        coef = spline_filter(coef, order=order, mode="grid-constant")

    def at(points: np.ndarray) -> np.ndarray:
        t = (points + grid.extent) / grid.spacing - 0.5 + pad
        coords = [t[..., k].ravel() for k in range(grid.n)]
        vals = map_coordinates(coef, coords, order=order, mode="grid-constant", cval=0.0, prefilter=False)
        inside = np.all(np.abs(points) <= grid.extent, axis=-1).ravel()
        return np.where(inside, vals, 0.0).reshape(points.shape[:-1])

    return at


def interpolate(grid: VelocityGrid, values: np.ndarray, points: np.ndarray, order: int = 3) -> np.ndarray:
    """B-spline interpolation of node values at arbitrary points.

    ``order=1`` is plain multilinear interpolation.  The lattice is continued
    by zero ghost nodes, and requests outside the box [-L, L]^n return 0.
    """
    return _spline_evaluator(grid, np.asarray(values, dtype=float), order)(np.asarray(points, dtype=float))


def q_evaluate(
    f,
    grid: VelocityGrid,
    sphere: SphereRule,
    order: int = 3,
    cost_limit: float = DEFAULT_COST_LIMIT,
) -> np.ndarray:
    """Gain minus loss of the constant-kernel collision operator at every node.

    Post-collision values f(zeta'), f(zeta'_*) come from spline interpolation
    of ``order``; the loss term f(zeta) rho |S^{n-1}| is exact on the grid.
    """
    if grid.n == 1:
        raise ValueError("collision operator needs n >= 2 (no sigma-sphere in one dimension)")
    if sphere.n != grid.n:
        raise ValueError(f"sphere rule is for n={sphere.n}, grid has n={grid.n}")
    cost = float(grid.size) ** 2 * sphere.size
    if cost > cost_limit:
        raise ValueError(f"q_evaluate cost {cost:.3g} exceeds the limit {cost_limit:.3g}")
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.size,):
        raise ValueError(f"expected {grid.size} node values, got shape {f.shape}")
    nodes, w = grid.nodes, grid.weights
    at = _spline_evaluator(grid, f, order)
    center = 0.5 * (nodes[:, None, :] + nodes[None, :, :])
    radius = 0.5 * np.linalg.norm(nodes[None, :, :] - nodes[:, None, :], axis=-1)
    gain = np.zeros(grid.size)
    for sigma, ws in zip(sphere.directions, sphere.weights):
        shift = radius[..., None] * sigma
        gain += ws * ((at(center + shift) * at(center - shift)) @ w)
    loss = f * float(w @ f) * float(np.sum(sphere.weights))
    return gain - loss


def invariant_residuals(Q: np.ndarray, grid: VelocityGrid) -> np.ndarray:
    """Integrals of Q against 1, zeta_1..zeta_n and |zeta|^2."""
    phis = np.column_stack([np.ones(grid.size), grid.nodes, grid.speed_sq])
    return (grid.weights * Q) @ phis


@dataclass
class RelaxationTrace:
    times: list = field(default_factory=list)
    S_values: list = field(default_factory=list)
    F_values: list = field(default_factory=list)
    dist_values: list = field(default_factory=list)
    rho_values: list = field(default_factory=list)
    E_values: list = field(default_factory=list)

    def record(self, t: float, f: DistributionField, M: MaxwellianParams) -> None:
        rho, _, energy = cell_moments(f.values, f.grid)
        vols = f.domain.cell_volumes
        self.times.append(t)
        self.S_values.append(entropy(f))
        self.F_values.append(functional_F(f, M.T))
        self.dist_values.append(distance(M, f).dist)
        self.rho_values.append(float(vols @ rho))
        self.E_values.append(float(vols @ energy))

    def rows(self):
        return zip(self.times, self.S_values, self.F_values, self.dist_values, self.rho_values, self.E_values)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            self.write_to(fh)

    def write_to(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "S", "F", "dist", "rho", "E"])
        for row in self.rows():
            writer.writerow([f"{v:.12g}" for v in row])


def _matched_local_maxwellian(row: np.ndarray, grid: VelocityGrid) -> np.ndarray:
    rho, mom, energy = (x[0] for x in cell_moments(row, grid))
    u = mom / rho
    T = (2.0 * energy / rho - float(u @ u)) / grid.n
    m_loc = local_maxwellian(rho, u, T, grid)
    # pin the discrete density exactly; momentum and energy then agree to quadrature accuracy
    return m_loc * (rho / float(grid.weights @ m_loc))


def bgk_step(f: DistributionField, tau: float, dt: float) -> DistributionField:
    """One explicit Euler step of df/dt = (M_loc - f)/tau, cell by cell."""
    if not tau > 0:
        raise ValueError(f"relaxation time must be positive, got {tau}")
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    if dt > tau:
        raise ValueError(f"dt={dt} exceeds tau={tau}; the update would not stay non-negative")
    alpha = dt / tau
    new = np.array(f.values)
    rho = f.values @ f.grid.weights
    for c in range(f.domain.cells):
        if not rho[c] > 0:
            continue
        m_loc = _matched_local_maxwellian(f.values[c], f.grid)
        new[c] = (1.0 - alpha) * f.values[c] + alpha * m_loc
    return f.with_values(new)


def relax(f0: DistributionField, M: MaxwellianParams, tau: float, dt: float, steps: int) -> RelaxationTrace:
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    trace = RelaxationTrace()
    f = f0
    trace.record(0.0, f, M)
    for k in range(1, steps + 1):
        f = bgk_step(f, tau, dt)
        trace.record(k * dt, f, M)
    return trace
