"""Distribution fields, the Maxwellian family and velocity moments."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import SpatialDomain, VelocityGrid, make_domain, make_velocity_grid

# values at or below this are treated as exact zeros inside f log f
ENTROPY_FLOOR = 1e-300


@dataclass(frozen=True)
class DistributionField:
    """Phase-space density sampled as values[cell, velocity node]."""

    grid: VelocityGrid
    domain: SpatialDomain
    values: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = np.broadcast_to(values, (self.domain.cells, values.size)).copy()
        expected = (self.domain.cells, self.grid.size)
        if values.shape != expected:
            raise ValueError(f"field shape {values.shape} does not match (cells, nodes) = {expected}")
        bad = ~np.isfinite(values)
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            raise ValueError(f"non-finite field value at (cell, node) = {idx}")
        neg = values < 0
        if neg.any():
            idx = tuple(int(i) for i in np.argwhere(neg)[0])
            raise ValueError(f"negative field value {values[idx]:.6g} at (cell, node) = {idx}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def with_values(self, values) -> "DistributionField":
        return DistributionField(self.grid, self.domain, values)


@dataclass(frozen=True)
class MaxwellianParams:
    """Global Maxwellian rho / (V (2 pi T)^(n/2)) exp(-|zeta - u|^2 / 2T)."""

    rho: float
    u: tuple
    T: float
    V_omega: float = 1.0

    def __post_init__(self):
        u = tuple(float(c) for c in np.atleast_1d(self.u))
        object.__setattr__(self, "u", u)
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.T > 0:
            raise ValueError(f"temperature must be positive, got {self.T}")
        if not self.V_omega > 0:
            raise ValueError(f"domain volume must be positive, got {self.V_omega}")
        if len(u) not in (1, 2, 3):
            raise ValueError(f"drift must have 1-3 components, got {len(u)}")

    @property
    def n(self) -> int:
        return len(self.u)

    @classmethod
    def at_rest(cls, rho: float, T: float, n: int, V_omega: float = 1.0) -> "MaxwellianParams":
        return cls(rho=rho, u=(0.0,) * n, T=T, V_omega=V_omega)


@dataclass(frozen=True)
class MomentSummary:
    rho_total: float
    U: np.ndarray
    E_total: float
    S: float
    mean_u_per_cell: np.ndarray

    def as_record(self) -> dict:
        rec = {"rho_total": self.rho_total}
        for k, uk in enumerate(self.U):
            rec[f"U{k + 1}"] = float(uk)
        rec["E_total"] = self.E_total
        rec["S"] = self.S
        for c, row in enumerate(self.mean_u_per_cell):
            for k, uk in enumerate(row):
                rec[f"u_cell{c}_{k + 1}"] = float(uk)
        return rec


def local_maxwellian(rho_x: float, u_x, T_x: float, grid: VelocityGrid) -> np.ndarray:
    """Per-node rho_x (2 pi T_x)^(-n/2) exp(-|zeta - u_x|^2 / 2 T_x)."""
    if not T_x > 0:
        raise ValueError(f"local temperature must be positive, got {T_x}")
    if rho_x < 0:
        raise ValueError(f"local density must be non-negative, got {rho_x}")
    u_x = np.broadcast_to(np.asarray(u_x, dtype=float), (grid.n,))
    if rho_x == 0:
        return np.zeros(grid.size)
    d2 = np.sum((grid.nodes - u_x) ** 2, axis=1)
    return rho_x * (2.0 * np.pi * T_x) ** (-grid.n / 2) * np.exp(-d2 / (2.0 * T_x))


def maxwellian_eval(
    p: MaxwellianParams, grid: VelocityGrid, domain: SpatialDomain | None = None
) -> DistributionField:
    if domain is None:
        domain = make_domain(1, p.V_omega)
    if p.n != grid.n:
        raise ValueError(f"drift has {p.n} components but the grid is {grid.n}-dimensional")
    if not np.isclose(domain.total_volume, p.V_omega, rtol=1e-12):
        raise ValueError(f"domain volume {domain.total_volume} differs from V_omega={p.V_omega}")
    row = local_maxwellian(p.rho / p.V_omega, p.u, p.T, grid)
    return DistributionField(grid, domain, row)


def cell_moments(values: np.ndarray, grid: VelocityGrid):
    """Per-cell (rho, momentum density, energy density) by velocity quadrature."""
    values = np.atleast_2d(values)
    w = grid.weights
    rho = values @ w
    mom = (values * w) @ grid.nodes
    energy = (values * w) @ (0.5 * grid.speed_sq)
    return rho, mom, energy


def entropy(f: DistributionField) -> float:
    v = f.values
    pos = v > ENTROPY_FLOOR
    integrand = np.zeros_like(v)
    integrand[pos] = -v[pos] * np.log(v[pos])
    return float(f.domain.cell_volumes @ (integrand @ f.grid.weights))


def moments(f: DistributionField) -> MomentSummary:
    rho, mom, energy = cell_moments(f.values, f.grid)
    vols = f.domain.cell_volumes
    mean_u = np.zeros_like(mom)
    occupied = rho > 0
    # empty cells report zero drift
    mean_u[occupied] = mom[occupied] / rho[occupied, None]
    return MomentSummary(
        rho_total=float(vols @ rho),
        U=vols @ mom,
        E_total=float(vols @ energy),
        S=entropy(f),
        mean_u_per_cell=mean_u,
    )


def write_field(f: DistributionField, path) -> None:
    """Header ``n n_x m L cells`` then values, one cell per line, at 17 digits."""
    g = f.grid
    lines = [f"{g.n} {f.domain.n_x} {g.points_per_axis} {g.extent!r} {f.domain.cells}"]
    for row in f.values:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_field(path, V_omega: float = 1.0) -> DistributionField:
    tokens = Path(path).read_text().split()
    if len(tokens) < 5:
        raise ValueError(f"{path}: truncated field header")
    try:
        n, n_x, m = (int(t) for t in tokens[:3])
        L = float(tokens[3])
        cells = int(tokens[4])
        values = np.array([float(t) for t in tokens[5:]])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed field file ({exc})") from None
    grid = make_velocity_grid(n, L, m)
    if values.size != cells * grid.size:
        raise ValueError(f"{path}: expected {cells * grid.size} values, found {values.size}")
    domain = make_domain(cells, V_omega, n_x=n_x)
    return DistributionField(grid, domain, values.reshape(cells, grid.size))
