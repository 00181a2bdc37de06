"""Nearest Maxwellian to a reference state within a moment class.

Minimizing dist{M, f} over non-negative f with prescribed total density,
energy and momentum is a maximum-entropy problem; its solution is the
Maxwellian with drift U/rho and temperature

    T1 = 2 E1 / (n rho) - |U|^2 / (n rho^2).

``project`` returns that closed form.  ``project_oracle`` solves the
discretized problem from scratch by Newton iteration on the Lagrange
multipliers, so the two can be compared node by node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.hermite_e import hermeval

from .dist import DistributionField, MaxwellianParams, maxwellian_eval
from .functionals import F_maxwellian_closed, distance
from .grid import VelocityGrid


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class MomentClass:
    rho: float
    E1: float
    U: tuple
    V_omega: float = 1.0

    def __post_init__(self):
        U = tuple(float(c) for c in np.atleast_1d(self.U))
        object.__setattr__(self, "U", U)
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.E1 > 0:
            raise ValueError(f"E1 must be positive, got {self.E1}")
        if not self.V_omega > 0:
            raise ValueError(f"domain volume must be positive, got {self.V_omega}")
        if len(U) not in (1, 2, 3):
            raise ValueError(f"U must have 1-3 components, got {len(U)}")
        if not self.T1 > 0:
            raise ValueError(f"infeasible: T1<=0 (T1={self.T1:.6g}; energy does not exceed the bulk-motion minimum)")

    @property
    def n(self) -> int:
        return len(self.U)

    @property
    def T1(self) -> float:
        U2 = sum(c * c for c in self.U)
        return 2.0 * self.E1 / (self.n * self.rho) - U2 / (self.n * self.rho**2)

    @classmethod
    def of(cls, p: MaxwellianParams) -> "MomentClass":
        """The class whose minimizer is exactly the Maxwellian p."""
        u2 = float(np.dot(p.u, p.u))
        return cls(rho=p.rho, E1=p.rho * (p.n * p.T + u2) / 2.0, U=tuple(p.rho * c for c in p.u), V_omega=p.V_omega)


@dataclass(frozen=True)
class Multipliers:
    """Exponent multipliers of f = exp((lam + nu)|zeta|^2/2 + gamma.zeta + mu - 1)."""

    mu: float
    nu: float
    gamma: tuple
    lam: float

    @property
    def lam_plus_nu(self) -> float:
        return self.lam + self.nu


@dataclass(frozen=True)
class ProjectionResult:
    minimizer: MaxwellianParams
    T1: float
    dist_min: float
    multipliers: Multipliers

    def as_record(self) -> dict:
        rec = {"T1": self.T1, "rho": self.minimizer.rho}
        for k, c in enumerate(self.minimizer.u):
            rec[f"u{k + 1}"] = c
        rec["dist_min"] = self.dist_min
        rec["mu"] = self.multipliers.mu
        rec["nu"] = self.multipliers.nu
        for k, g in enumerate(self.multipliers.gamma):
            rec[f"gamma{k + 1}"] = g
        return rec


@dataclass(frozen=True)
class OracleResult:
    values: np.ndarray = field(repr=False)
    multipliers: Multipliers
    iterations: int
    residual: float


def _reference(cls: MomentClass, T_ref: float) -> MaxwellianParams:
    return MaxwellianParams.at_rest(cls.rho, T_ref, cls.n, cls.V_omega)


def project(cls: MomentClass, T_ref: float) -> ProjectionResult:
    if not T_ref > 0:
        raise ValueError(f"T_ref must be positive, got {T_ref}")
    T1 = cls.T1
    u = tuple(c / cls.rho for c in cls.U)
    M1 = MaxwellianParams(rho=cls.rho, u=u, T=T1, V_omega=cls.V_omega)
    dist_min = F_maxwellian_closed(_reference(cls, T_ref), T_ref) - F_maxwellian_closed(M1, T_ref)

    lam = -1.0 / T_ref
    lpn = -1.0 / T1
    gamma = tuple(-c * lpn / cls.rho for c in cls.U)
    # C = exp(mu - 1) absorbs the peak value and the cross term of the completed square
    u2 = sum(c * c for c in u)
    peak = cls.rho / (cls.V_omega * (2.0 * math.pi * T1) ** (cls.n / 2))
    mu = 1.0 + math.log(peak) - u2 / (2.0 * T1)
    mult = Multipliers(mu=mu, nu=lpn - lam, gamma=gamma, lam=lam)
    return ProjectionResult(minimizer=M1, T1=T1, dist_min=dist_min, multipliers=mult)


def _features(grid: VelocityGrid) -> np.ndarray:
    # columns: 1, zeta_1..zeta_n, |zeta|^2 / 2  (the order of theta below)
    return np.column_stack([np.ones(grid.size), grid.nodes, 0.5 * grid.speed_sq])


def project_oracle(
    cls: MomentClass, T_ref: float, grid: VelocityGrid, tol: float = 1e-10, max_iter: int = 200
) -> OracleResult:
    """Maximize F over grid fields with the class moments, via damped dual Newton.

    The unknowns are theta = (mu, gamma, nu); the field is
    exp(phi . theta + lam |zeta|^2/2 - 1) with phi = (1, zeta, |zeta|^2/2).
    The dual sum(w f) - theta . c is strictly convex, so Newton steps with
    Armijo backtracking converge from the cold start nu = gamma = 0.
    """
    if not T_ref > 0:
        raise ValueError(f"T_ref must be positive, got {T_ref}")
    if grid.n != cls.n:
        raise ValueError(f"class is {cls.n}-dimensional but the grid is {grid.n}-dimensional")
    lam = -1.0 / T_ref
    phi = _features(grid)
    w = grid.weights
    base = lam * 0.5 * grid.speed_sq - 1.0
    target = np.concatenate([[cls.rho], cls.U, [cls.E1]]) / cls.V_omega
    scale = np.maximum(np.abs(target), 1.0)

    def field_of(theta):
        with np.errstate(over="ignore"):
            return np.exp(base + phi @ theta)

    def dual(f, theta):
        return float(w @ f - theta @ target)

    theta = np.zeros(cls.n + 2)
    theta[0] = math.log(target[0] / (w @ np.exp(base)))
    f = field_of(theta)
    obj = dual(f, theta)
    for it in range(max_iter + 1):
        grad = (w * f) @ phi - target
        resid = float(np.max(np.abs(grad) / scale))
        if resid < tol:
            mult = Multipliers(mu=theta[0], nu=theta[-1], gamma=tuple(theta[1:-1]), lam=lam)
            return OracleResult(values=f, multipliers=mult, iterations=it, residual=resid)
        if it == max_iter:
            break
        hess = (phi * (w * f)[:, None]).T @ phi
        try:
            step = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            raise ConvergenceError("singular dual Hessian: the grid cannot resolve this class") from None
        t = 1.0
        while t > 1e-12:
            trial = theta + t * step
            f_trial = field_of(trial)
            obj_trial = dual(f_trial, trial)
            if np.isfinite(obj_trial) and obj_trial <= obj + 1e-4 * t * float(grad @ step):
                break
            # near the optimum the objective change drowns in round-off; judge by the residual
            if t == 1.0 and np.all(np.isfinite(f_trial)):
                trial_resid = np.max(np.abs((w * f_trial) @ phi - target) / scale)
                if trial_resid < resid:
                    break
            t *= 0.5
        else:
            break
        theta, f, obj = trial, f_trial, obj_trial
    raise ConvergenceError(f"dual Newton did not converge in {max_iter} iterations (residual {resid:.3g})")


def dist_lower_bound_over_class(cls: MomentClass, T_ref: float, grid: VelocityGrid | None = None) -> float:
    """Infimum of dist{M, f} over the class, attained at the nearest Maxwellian.

    With a grid the value is the quadrature distance to the sampled minimizer;
    without one it is the closed form.
    """
    res = project(cls, T_ref)
    if grid is None:
        return res.dist_min
    M = _reference(cls, T_ref)
    return distance(M, maxwellian_eval(res.minimizer, grid)).dist


def _hermite_basis(grid: VelocityGrid, center, T: float, degree: int) -> np.ndarray:
    """Bounded shape functions He_a(s) exp(-|s|^2/4), s = (zeta - center)/sqrt(T)."""
    s = (grid.nodes - np.asarray(center)) / math.sqrt(T)
    env = np.exp(-0.25 * np.sum(s**2, axis=1))
    per_axis = []
    for k in range(grid.n):
        cols = []
        for d in range(degree + 1):
            coef = np.zeros(d + 1)
            coef[d] = 1.0
            cols.append(hermeval(s[:, k], coef))
        per_axis.append(cols)
    out = []
    for alpha in np.ndindex(*((degree + 1,) * grid.n)):
        if sum(alpha) > degree:
            continue
        col = env.copy()
        for k, d in enumerate(alpha):
            col *= per_axis[k][d]
        out.append(col)
    return np.column_stack(out)


def sample_class_member(
    res: ProjectionResult, grid: VelocityGrid, rng: np.random.Generator, amplitude: float | None = None
) -> DistributionField:
    """A random non-Maxwellian field with exactly the minimizer's grid moments.

    The field is M1 (1 + p) where p is a random combination of bounded
    shape functions whose M1-weighted integrals against 1, zeta_k and
    |zeta|^2 all vanish, scaled so that max|p| = amplitude < 1.
    """
    M1 = maxwellian_eval(res.minimizer, grid)
    m1 = M1.values[0]
    degree = {1: 6, 2: 4, 3: 4}[grid.n]
    psi = _hermite_basis(grid, res.minimizer.u, res.T1, degree)
    constraints = _features(grid).T @ (psi * (grid.weights * m1)[:, None])
    _, sv, vt = np.linalg.svd(constraints)
    null = vt[np.sum(sv > 1e-12 * sv[0]):]
    c = rng.standard_normal(null.shape[0]) @ null
    p = psi @ c
    if amplitude is None:
        amplitude = rng.uniform(0.05, 0.8)
    if not 0 < amplitude < 1:
        raise ValueError(f"amplitude must lie in (0, 1), got {amplitude}")
    p *= amplitude / np.max(np.abs(p))
    return M1.with_values(m1 * (1.0 + p))
