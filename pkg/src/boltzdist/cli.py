"""Command-line front end.

Every subcommand prints ``key=value`` lines (or one JSON object with
``--json``).  Exit codes: 0 success, 1 I/O failure, 2 domain or precondition
violation.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from .collision import invariant_residuals, q_evaluate, relax
from .config import ScenarioConfig, load_config, oracle_grid, parse_config
from .dist import MaxwellianParams, local_maxwellian, maxwellian_eval, moments, write_field
from .functionals import distance, distance_bregman, drift_lower_bound
from .grid import make_sphere_rule, make_velocity_grid
from .projection import ConvergenceError, project, project_oracle

EXIT_OK, EXIT_IO, EXIT_DOMAIN = 0, 1, 2
ROUNDOFF = 1e-12


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def render(record: dict, as_json: bool) -> str:
    if as_json:
        clean = {k: (v if isinstance(v, (str, bool, int)) else float(v)) for k, v in record.items()}
        return json.dumps(clean, indent=2) + "\n"
    return "".join(f"{k}={fmt(v)}\n" for k, v in record.items())


def cmd_moments(cfg: ScenarioConfig, args) -> dict:
    return moments(cfg.build_field()).as_record()


def cmd_dist(cfg: ScenarioConfig, args) -> dict:
    f = cfg.build_field()
    M = cfg.reference_params()
    if args.method == "bregman":
        report = distance_bregman(M, f, rel_tol=cfg.density_rtol)
    else:
        report = distance(M, f, rel_tol=cfg.density_rtol)
    return report.as_record()


def cmd_project(cfg: ScenarioConfig, args) -> dict:
    cls = cfg.class_spec()
    T_ref = cfg.class_T_ref()
    res = project(cls, T_ref)
    rec = res.as_record()
    t1_form, tref_form = drift_lower_bound(T_ref, res.T1, cls.rho, cls.U, cls.n)
    rec["bound_T1_variant"] = t1_form
    rec["bound_Tref_variant"] = tref_form
    if args.oracle or args.field_out:
        grid = oracle_grid(cfg)
        closed = maxwellian_eval(res.minimizer, grid)
        if args.oracle:
            orc = project_oracle(cls, T_ref, grid)
            rec["oracle_gap"] = float(np.max(np.abs(orc.values - closed.values[0])))
            rec["oracle_iterations"] = orc.iterations
        if args.field_out:
            write_field(closed, args.field_out)
    return rec


def cmd_relax(cfg: ScenarioConfig, args) -> str:
    f0 = cfg.build_field()
    r = cfg.relax
    trace = relax(f0, cfg.reference_params(), r.tau, r.dt, r.steps)
    buf = io.StringIO()
    trace.write_to(buf)
    return buf.getvalue()


def _collide_once(cfg: ScenarioConfig, m: int, k: int):
    c = cfg.collide
    grid = make_velocity_grid(cfg.grid.n, c.L, m)
    sphere = make_sphere_rule(cfg.grid.n, k)
    ref = cfg.reference_params()
    maxw = local_maxwellian(ref.rho / ref.V_omega, ref.u, ref.T, grid)
    q_m = q_evaluate(maxw, grid, sphere, order=c.order)
    f = cfg.build_field(grid).values[0]
    q_f = q_evaluate(f, grid, sphere, order=c.order)
    res = np.abs(invariant_residuals(q_f, grid))
    q1 = float(grid.weights @ np.abs(q_f))
    return float(np.max(np.abs(q_m))), q1, res


def cmd_collide(cfg: ScenarioConfig, args) -> dict:
    c = cfg.collide
    if cfg.grid.n == 1:
        raise ValueError("collide needs grid.n >= 2")
    if cfg.source.path is not None:
        raise ValueError("collide builds its own grids; give the field analytically (field.kind)")
    qmax, q1, res = _collide_once(cfg, c.m, c.k)
    names = ["phi0"] + [f"phi{k + 1}" for k in range(cfg.grid.n)] + [f"phi{cfg.grid.n + 1}"]
    rec = {"q_maxnorm": qmax, "q_tolerance": c.tolerance, "stationary": qmax < c.tolerance, "q_l1": q1}
    for name, r in zip(names, res):
        rec[f"rel_residual_{name}"] = r / q1
    if c.refine:
        qmax_f, _, res_f = _collide_once(cfg, c.m_fine, c.k_fine)
        rec["q_maxnorm_fine"] = qmax_f
        rec["q_ratio"] = qmax / qmax_f
        for name, r, rf in zip(names, res, res_f):
            # symmetric fields give round-off residuals, whose ratio means nothing
            below_floor = max(r, rf) < ROUNDOFF * q1
            rec[f"residual_ratio_{name}"] = "roundoff" if below_floor else r / rf
    return rec


COMMANDS = {
    "moments": cmd_moments,
    "dist": cmd_dist,
    "project": cmd_project,
    "relax": cmd_relax,
    "collide": cmd_collide,
}


def _common_options(default) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=default, help="flat 'section.key = value' scenario file")
    common.add_argument("--json", action="store_true", default=default, help="emit one JSON object instead of key=value lines")
    common.add_argument("--out", type=Path, default=default, help="write output here instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    # Global flags are accepted before or after the subcommand.  The copies on
    # the subparsers suppress their defaults so they cannot clobber a value
    # already parsed at the top level.
    parser = argparse.ArgumentParser(
        prog="boltzdist", description=__doc__.splitlines()[0], parents=[_common_options(None)]
    )
    parser.set_defaults(json=False)
    common = _common_options(argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("moments", parents=[common], help="density, momentum, energy, entropy of a field")
    p = sub.add_parser("dist", parents=[common], help="distance from the reference Maxwellian")
    p.add_argument("--method", choices=["difference", "bregman"], default="difference")
    p = sub.add_parser("project", parents=[common], help="nearest Maxwellian within a moment class")
    p.add_argument("--oracle", action="store_true", help="also solve numerically and report the gap")
    p.add_argument("--field-out", type=Path, help="write the minimizer field to this file")
    sub.add_parser("relax", parents=[common], help="BGK relaxation trace as CSV")
    sub.add_parser("collide", parents=[common], help="collision-operator residuals")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else parse_config("")
        result = COMMANDS[args.command](cfg, args)
        text = result if isinstance(result, str) else render(result, args.json)
        if args.out:
            args.out.write_text(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
