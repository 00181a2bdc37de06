"""Seeded random distribution fields with a prescribed total density."""

from __future__ import annotations

import math

import numpy as np

from .dist import DistributionField, MaxwellianParams, local_maxwellian, maxwellian_eval
from .grid import VelocityGrid, make_domain

FAMILIES = ("mixture", "tilted", "cellwise", "near")


def _random_maxwellian(rng, grid: VelocityGrid, T: float) -> np.ndarray:
    Tk = T * rng.uniform(0.5, 1.5)
    u = rng.uniform(-1.2, 1.2, grid.n) * math.sqrt(T)
    return local_maxwellian(rng.uniform(0.2, 1.0), u, Tk, grid)


def _bounded_wiggle(rng, grid: VelocityGrid, T: float) -> np.ndarray:
    """Smooth perturbation with values in (-1, 1), localized where M lives."""
    s = grid.nodes / math.sqrt(T)
    k = rng.normal(0.0, 1.2, (3, grid.n))
    phase = rng.uniform(0, 2 * np.pi, 3)
    wave = sum(np.cos(s @ k[j] + phase[j]) for j in range(3)) / 3.0
    return wave * np.exp(-0.125 * np.sum(s**2, axis=1))


def random_matched_field(
    M: MaxwellianParams, grid: VelocityGrid, rng: np.random.Generator, family: str | None = None, cells: int | None = None
) -> DistributionField:
    """A random non-negative field whose grid total density equals ``M.rho``.

    Families: ``mixture`` (sum of drifting Maxwellians), ``tilted``
    (M times a smooth positive factor), ``cellwise`` (a different Maxwellian in
    every spatial cell) and ``near`` (M plus a perturbation of random size
    down to 1e-4 relative).
    """
    family = family or FAMILIES[rng.integers(len(FAMILIES))]
    cells = cells if cells is not None else int(rng.integers(1, 4))
    domain = make_domain(cells, M.V_omega)
    base = maxwellian_eval(M, grid, domain).values[0]
    T = M.T
    if family == "mixture":
        parts = int(rng.integers(2, 4))
        row = sum(_random_maxwellian(rng, grid, T) for _ in range(parts))
        vals = np.broadcast_to(row, (cells, grid.size))
    elif family == "tilted":
        vals = np.stack([base * np.exp(rng.uniform(0.2, 1.5) * _bounded_wiggle(rng, grid, T)) for _ in range(cells)])
    elif family == "cellwise":
        vals = np.stack([_random_maxwellian(rng, grid, T) for _ in range(cells)])
    elif family == "near":
        eps = 10 ** rng.uniform(-4, -0.5)
        vals = np.stack([base * (1 + eps * _bounded_wiggle(rng, grid, T)) for _ in range(cells)])
    else:
        raise ValueError(f"unknown family {family!r}")
    vals = np.array(vals, dtype=float)
    total = float(domain.cell_volumes @ (vals @ grid.weights))
    return DistributionField(grid, domain, vals * (M.rho / total))
