"""Scenario configuration: a flat text file of ``section.key = value`` lines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dist import DistributionField, MaxwellianParams, local_maxwellian, maxwellian_eval, read_field
from .grid import SpatialDomain, VelocityGrid, make_domain, make_velocity_grid
from .projection import MomentClass


def _vector(text: str) -> tuple:
    return tuple(float(t) for t in text.replace(" ", "").split(",") if t)


@dataclass
class GridConfig:
    n: int = 1
    L: float | None = None  # default: 8 sqrt(largest temperature in the scenario)
    m: int = 128


@dataclass
class DomainConfig:
    n_x: int = 1
    cells: int = 1
    V_omega: float = 1.0


@dataclass
class FieldConfig:
    """Where the field f comes from: a file, or an analytic Maxwellian/mixture."""

    path: Path | None = None
    kind: str = "maxwellian"
    rho: float | None = None
    u: tuple | None = None
    T: float | None = None
    shift: tuple | None = None
    # mixture only: second component (defaults mirror the first) and its share
    shift2: tuple | None = None
    T2: float | None = None
    weight: float = 0.5


@dataclass
class ClassConfig:
    rho: float = 1.0
    E1: float = 0.5
    U: tuple = (0.0,)
    n: int | None = None
    V: float | None = None
    T_ref: float | None = None


@dataclass
class RelaxConfig:
    tau: float = 1.0
    dt: float = 0.25
    steps: int = 80


@dataclass
class CollideConfig:
    L: float = 6.0
    m: int = 16
    k: int = 32
    m_fine: int = 24
    k_fine: int = 48
    refine: bool = False
    tolerance: float = 5e-3
    order: int = 3


@dataclass
class ScenarioConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    domain: DomainConfig = field(default_factory=DomainConfig)
    reference: MaxwellianParams | None = None
    source: FieldConfig = field(default_factory=FieldConfig)
    moment_class: ClassConfig | None = None
    relax: RelaxConfig = field(default_factory=RelaxConfig)
    collide: CollideConfig = field(default_factory=CollideConfig)
    density_rtol: float = 1e-6
    seed: int = 0

    # -- derived objects -------------------------------------------------

    def reference_params(self) -> MaxwellianParams:
        if self.reference is not None:
            return self.reference
        return MaxwellianParams.at_rest(1.0, 1.0, self.grid.n, self.domain.V_omega)

    def field_temperature(self) -> float:
        return self.source.T if self.source.T is not None else self.reference_params().T

    def velocity_grid(self) -> VelocityGrid:
        L = self.grid.L
        if L is None:
            temps = [self.reference_params().T, self.field_temperature(), self.source.T2 or 0.0]
            if self.moment_class is not None:
                temps.append(self.class_spec().T1)
            L = 8.0 * math.sqrt(max(temps))
        return make_velocity_grid(self.grid.n, L, self.grid.m)

    def spatial_domain(self) -> SpatialDomain:
        return make_domain(self.domain.cells, self.domain.V_omega, n_x=self.domain.n_x)

    def build_field(self, grid: VelocityGrid | None = None) -> DistributionField:
        fc = self.source
        if fc.path is not None:
            return read_field(fc.path, V_omega=self.domain.V_omega)
        grid = grid or self.velocity_grid()
        domain = self.spatial_domain()
        ref = self.reference_params()
        rho = fc.rho if fc.rho is not None else ref.rho
        T = self.field_temperature()
        if fc.kind == "maxwellian":
            u = fc.u if fc.u is not None else (0.0,) * grid.n
            return maxwellian_eval(MaxwellianParams(rho, u, T, domain.total_volume), grid, domain)
        if fc.kind == "mixture":
            # weight * M(shift, T) + (1 - weight) * M(shift2, T2); by default shift2 = -shift, T2 = T
            shift = np.asarray(fc.shift if fc.shift is not None else (1.0,) + (0.0,) * (grid.n - 1))
            shift2 = np.asarray(fc.shift2) if fc.shift2 is not None else -shift
            for name, vec in (("shift", shift), ("shift2", shift2)):
                if vec.size != grid.n:
                    raise ValueError(f"field.{name} needs {grid.n} components, got {vec.size}")
            if not 0 < fc.weight < 1:
                raise ValueError(f"field.weight must lie in (0, 1), got {fc.weight}")
            T2 = fc.T2 if fc.T2 is not None else T
            dens = rho / domain.total_volume
            row = fc.weight * local_maxwellian(dens, shift, T, grid) + (1 - fc.weight) * local_maxwellian(
                dens, shift2, T2, grid
            )
            return DistributionField(grid, domain, row)
        raise ValueError(f"unknown field.kind {fc.kind!r} (expected maxwellian or mixture)")

    def class_spec(self) -> MomentClass:
        c = self.moment_class
        if c is None:
            raise ValueError("config has no class.* section")
        n = c.n if c.n is not None else len(c.U)
        U = tuple(c.U)
        if len(U) == 1 and n > 1 and U[0] == 0.0:
            U = (0.0,) * n
        if len(U) != n:
            raise ValueError(f"class.U has {len(U)} components but class.n = {n}")
        V = c.V if c.V is not None else self.domain.V_omega
        return MomentClass(rho=c.rho, E1=c.E1, U=U, V_omega=V)

    def class_T_ref(self) -> float:
        c = self.moment_class
        if c is not None and c.T_ref is not None:
            return c.T_ref
        return self.reference_params().T


_SECTIONS = {
    "grid": GridConfig,
    "domain": DomainConfig,
    "field": FieldConfig,
    "class": ClassConfig,
    "relax": RelaxConfig,
    "collide": CollideConfig,
}

_VECTOR_KEYS = {("field", "u"), ("field", "shift"), ("field", "shift2"), ("class", "U"), ("reference", "u")}


def _convert(section: str, key: str, raw: str, default):
    if (section, key) in _VECTOR_KEYS:
        return _vector(raw)
    if key == "path":
        return Path(raw)
    if isinstance(default, bool):
        if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(f"{section}.{key}: expected a boolean, got {raw!r}")
        return raw.lower() in ("true", "1", "yes")
    if isinstance(default, int) or key in ("n", "m", "k", "cells", "n_x", "steps", "m_fine", "k_fine", "order"):
        return int(raw)
    if key == "kind":
        return raw
    return float(raw)


def parse_config(text: str, base_dir: Path | None = None) -> ScenarioConfig:
    """Parse ``section.key = value`` lines; ``#`` starts a comment."""
    cfg = ScenarioConfig()
    sections: dict = {}
    reference: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if "." not in key:
            if key == "seed":
                cfg.seed = int(raw)
            elif key == "density_rtol":
                cfg.density_rtol = float(raw)
            else:
                raise ValueError(f"config line {lineno}: unknown top-level key {key!r}")
            continue
        section, name = key.split(".", 1)
        try:
            if section == "reference":
                if name not in ("rho", "u", "T", "V_omega"):
                    raise ValueError(f"unknown key {key!r}")
                reference[name] = _convert(section, name, raw, 0.0)
                continue
            if section not in _SECTIONS:
                raise ValueError(f"unknown section {section!r}")
            cls = _SECTIONS[section]
            obj = sections.setdefault(section, cls())
            if name not in cls.__dataclass_fields__:
                raise ValueError(f"unknown key {key!r}")
            setattr(obj, name, _convert(section, name, raw, getattr(obj, name)))
        except ValueError as exc:
            raise ValueError(f"config line {lineno}: {exc}") from None

    for name, obj in sections.items():
        if name == "class":
            cfg.moment_class = obj
        elif name == "field":
            cfg.source = obj
        else:
            setattr(cfg, name, obj)
    if cfg.source.path is not None and base_dir is not None and not cfg.source.path.is_absolute():
        cfg.source.path = base_dir / cfg.source.path
    if reference:
        n = cfg.grid.n
        u = reference.get("u", (0.0,) * n)
        V = reference.get("V_omega", cfg.domain.V_omega)
        cfg.reference = MaxwellianParams(reference.get("rho", 1.0), u, reference.get("T", 1.0), V)
    validate(cfg)
    return cfg


def validate(cfg: ScenarioConfig) -> None:
    """Fail before any computation: missing files raise OSError, bad values ValueError."""
    if cfg.source.path is not None and not cfg.source.path.is_file():
        raise FileNotFoundError(f"field file not found: {cfg.source.path}")
    ref = cfg.reference_params()
    if ref.n != cfg.grid.n:
        raise ValueError(f"reference.u has {ref.n} components but grid.n = {cfg.grid.n}")
    if cfg.source.path is None:
        cfg.velocity_grid()
    cfg.spatial_domain()
    if cfg.moment_class is not None:
        cfg.class_spec()
        if not cfg.class_T_ref() > 0:
            raise ValueError("class.T_ref must be positive")
    r = cfg.relax
    if not (r.tau > 0 and r.dt > 0 and r.steps >= 0):
        raise ValueError("relax.tau and relax.dt must be positive and relax.steps non-negative")
    if r.dt > r.tau:
        raise ValueError(f"relax.dt={r.dt} exceeds relax.tau={r.tau}")


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)


def oracle_grid(cfg: ScenarioConfig) -> VelocityGrid:
    """Grid for the projection oracle: the class dimension, L >= 8 sqrt(T1)."""
    cls = cfg.class_spec()
    L = cfg.grid.L if cfg.grid.L is not None else 8.0 * math.sqrt(max(cls.T1, cfg.class_T_ref()))
    m = cfg.grid.m if cls.n == 1 else min(cfg.grid.m, {2: 96, 3: 64}[cls.n])
    return make_velocity_grid(cls.n, L, m)
