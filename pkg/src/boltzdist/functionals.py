"""The functional F = -E/T + S and the distance dist{M, f} = F(M) - F(f).

The reference state M is always a Maxwellian at rest with temperature T, and
the multiplier in front of the energy is tied to it (lambda = -1/T); it is
never passed separately.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .dist import ENTROPY_FLOOR, DistributionField, MaxwellianParams, entropy, maxwellian_eval, moments

DENSITY_RTOL = 1e-6


@dataclass(frozen=True)
class DistanceReport:
    F_M: float
    F_f: float
    dist: float
    rho_M: float
    rho_f: float
    method: str

    def as_record(self) -> dict:
        return asdict(self)


def _check_T(T: float) -> None:
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")


def functional_F(f: DistributionField, T: float) -> float:
    """F(f) = -E(f)/T + S(f)."""
    _check_T(T)
    m = moments(f)
    return -m.E_total / T + m.S


def functional_F_pointwise(f: DistributionField, T: float) -> float:
    """F(f) = -int int (|zeta|^2 / 2T + log f) f, with 0 log 0 = 0."""
    _check_T(T)
    v = f.values
    logv = np.zeros_like(v)
    pos = v > ENTROPY_FLOOR
    logv[pos] = np.log(v[pos])
    integrand = -(f.grid.speed_sq / (2.0 * T) + logv) * v
    return float(f.domain.cell_volumes @ (integrand @ f.grid.weights))


def F_maxwellian_closed(p: MaxwellianParams, T_ref: float) -> float:
    """Exact F (with lambda = -1/T_ref) of the Maxwellian p.

    For a drifted Maxwellian the energy is rho (n T + |u|^2) / 2 and the
    entropy rho (n/2 + log(V (2 pi T)^(n/2) / rho)), because the entropy is
    shift invariant while completing the square in |zeta|^2 adds the bulk
    kinetic energy.  Hence

        F = -rho (log(rho / (V (2 pi T)^(n/2))) - n (1 - T/T_ref) / 2)
            - rho |u|^2 / (2 T_ref),

    which reduces to -rho log(rho / (V (2 pi T)^(n/2))) when T = T_ref, u = 0.
    """
    _check_T(T_ref)
    n = p.n
    peak = p.rho / (p.V_omega * (2.0 * math.pi * p.T) ** (n / 2))
    u2 = float(np.dot(p.u, p.u))
    return -p.rho * (math.log(peak) - n * (1.0 - p.T / T_ref) / 2.0) - p.rho * u2 / (2.0 * T_ref)


def _check_pair(M: MaxwellianParams, f: DistributionField, rel_tol: float) -> float:
    if any(c != 0.0 for c in M.u):
        raise ValueError("reference Maxwellian must be at rest (u = 0)")
    if M.n != f.grid.n:
        raise ValueError(f"reference is {M.n}-dimensional but the field is {f.grid.n}-dimensional")
    if not math.isclose(f.domain.total_volume, M.V_omega, rel_tol=1e-12):
        raise ValueError(f"domain volume {f.domain.total_volume} differs from V_omega={M.V_omega}")
    rho_f = moments(f).rho_total
    if abs(rho_f - M.rho) > rel_tol * M.rho:
        raise ValueError(f"density mismatch: rho_f={rho_f:.12g}, rho_M={M.rho:.12g}")
    return rho_f


def distance(
    M: MaxwellianParams, f: DistributionField, T: float | None = None, rel_tol: float = DENSITY_RTOL
) -> DistanceReport:
    """dist{M, f} as the difference of the closed-form F(M) and quadrature F(f)."""
    if T is not None and not math.isclose(T, M.T, rel_tol=1e-14):
        raise ValueError(f"temperature {T} does not match the reference T={M.T}")
    rho_f = _check_pair(M, f, rel_tol)
    F_M = F_maxwellian_closed(M, M.T)
    F_f = functional_F(f, M.T)
    return DistanceReport(F_M=F_M, F_f=F_f, dist=F_M - F_f, rho_M=M.rho, rho_f=rho_f, method="difference")


def bregman_integrand(M_values: np.ndarray, f_values: np.ndarray) -> np.ndarray:
    """Pointwise M (1 - x + x log x) with x = f/M, written as f log(f/M) - f + M."""
    ratio = np.maximum(f_values / M_values, ENTROPY_FLOOR)
    xlogx = np.where(f_values > 0, f_values * np.log(ratio), 0.0)
    return xlogx - f_values + M_values


def distance_bregman(M: MaxwellianParams, f: DistributionField, rel_tol: float = DENSITY_RTOL) -> DistanceReport:
    """dist{M, f} as the integral of a pointwise non-negative integrand."""
    rho_f = _check_pair(M, f, rel_tol)
    M_field = maxwellian_eval(M, f.grid, f.domain)
    integrand = bregman_integrand(M_field.values, f.values)
    d = float(f.domain.cell_volumes @ (integrand @ f.grid.weights))
    F_M = F_maxwellian_closed(M, M.T)
    return DistanceReport(F_M=F_M, F_f=F_M - d, dist=d, rho_M=M.rho, rho_f=rho_f, method="bregman")


def dist_maxwellians_closed(T: float, T1: float, rho: float, n: int) -> float:
    """dist{M, M1} for two Maxwellians at rest with equal density."""
    if not (T > 0 and T1 > 0 and rho > 0):
        raise ValueError(f"T, T1, rho must be positive, got {T}, {T1}, {rho}")
    r = T1 / T
    # log(r) - r + 1 loses digits near r = 1; log1p keeps the small-gap limit exact
    return -rho * n * (math.log1p(r - 1.0) - (r - 1.0)) / 2.0


def drift_lower_bound(T: float, T1: float, rho: float, U, n: int) -> tuple[float, float]:
    """Lower bound for dist{M, f} over the class with drift, in two variants.

    Returns the pair with the bulk-motion term taken as |U|^2 / (2 rho T1)
    and as |U|^2 / (2 rho T).  The second is what a direct evaluation of
    dist{M, M1} for the drifted minimizer produces.
    """
    base = dist_maxwellians_closed(T, T1, rho, n)
    U2 = float(np.dot(U, U))
    return base + U2 / (2.0 * rho * T1), base + U2 / (2.0 * rho * T)
