import json
import math
import subprocess
import sys

import numpy as np
import pytest
from pytest import approx

from boltzdist.cli import main
from boltzdist.config import parse_config
from boltzdist.dist import DistributionField, MaxwellianParams, maxwellian_eval, read_field, write_field
from boltzdist.grid import make_domain, make_velocity_grid


def run(capsys, tmp_path, text, *args):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text(text)
    code = main([*args, "--config", str(cfg)])
    out, err = capsys.readouterr()
    return code, out, err


def record(out):
    return {k: v for k, v in (line.split("=", 1) for line in out.splitlines())}


def test_moments_maxwellian(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, "grid.n = 1\nreference.rho = 1\nreference.T = 1\n", "moments")
    assert code == 0
    rec = record(out)
    assert float(rec["rho_total"]) == approx(1.0, abs=1e-6)
    assert set(rec) >= {"rho_total", "U1", "E_total", "S", "u_cell0_1"}


def test_moments_energy_3d(capsys, tmp_path):
    text = "grid.n = 3\ngrid.m = 48\nreference.T = 2\n"
    code, out, _ = run(capsys, tmp_path, text, "moments")
    assert code == 0 and float(record(out)["E_total"]) == approx(3.0, abs=1e-5)


def test_moments_negative_entry(capsys, tmp_path):
    field = tmp_path / "f.txt"
    field.write_text("1 1 4 1.0 1\n0.1 0.2 -0.3 0.4\n")
    code, _, err = run(capsys, tmp_path, f"field.path = {field.name}\n", "moments")
    assert code == 2
    assert "(0, 2)" in err


def test_missing_file_is_io_error(capsys, tmp_path):
    code, _, err = run(capsys, tmp_path, "field.path = nowhere.txt\n", "moments")
    assert code == 1 and "not found" in err
    assert main(["moments", "--config", str(tmp_path / "absent.cfg")]) == 1


def test_bad_config_is_domain_error(capsys, tmp_path):
    assert run(capsys, tmp_path, "grid.n = 5\n", "moments")[0] == 2
    assert run(capsys, tmp_path, "grid.bogus = 1\n", "moments")[0] == 2
    assert run(capsys, tmp_path, "relax.dt = 2\nrelax.tau = 1\n", "relax")[0] == 2


DIST_CFG = "grid.n = 2\ngrid.m = 64\nreference.rho = 1\nreference.T = 1\nfield.kind = mixture\nfield.shift = 0.8,0\nfield.T = 0.68\n"


def test_dist_methods_agree(capsys, tmp_path):
    code, out_d, _ = run(capsys, tmp_path, DIST_CFG, "dist")
    assert code == 0
    code, out_b, _ = run(capsys, tmp_path, DIST_CFG, "dist", "--method", "bregman")
    assert code == 0
    d, b = record(out_d), record(out_b)
    assert float(d["dist"]) == approx(float(b["dist"]), abs=1e-6)
    assert d["method"] == "difference" and b["method"] == "bregman"
    assert float(d["dist"]) > 0


def test_dist_self(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, "grid.n = 2\ngrid.m = 64\n", "dist")
    assert code == 0 and abs(float(record(out)["dist"])) < 1e-6


def test_dist_density_mismatch(capsys, tmp_path):
    code, _, err = run(capsys, tmp_path, "grid.n = 1\nfield.rho = 1.5\n", "dist")
    assert code == 2 and "density mismatch" in err


def test_dist_json(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, DIST_CFG, "dist", "--json")
    data = json.loads(out)
    assert code == 0 and set(data) == {"F_M", "F_f", "dist", "rho_M", "rho_f", "method"}


PROJECT_CFG = "class.rho = 2\nclass.E1 = 6\nclass.U = 2,0,0\nclass.n = 3\nclass.V = 1\nclass.T_ref = 1\n"


def test_project(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, PROJECT_CFG, "project")
    rec = record(out)
    assert code == 0
    assert float(rec["T1"]) == approx(5 / 3, rel=1e-11)
    assert float(rec["u1"]) == 1.0
    assert float(rec["dist_min"]) == approx(float(rec["bound_Tref_variant"]), rel=1e-11)


def test_project_oracle_and_field(capsys, tmp_path):
    out_field = tmp_path / "m1.txt"
    code, out, _ = run(capsys, tmp_path, PROJECT_CFG, "project", "--oracle", "--field-out", str(out_field))
    rec = record(out)
    assert code == 0
    assert float(rec["oracle_gap"]) < 1e-6
    f = read_field(out_field)
    assert f.grid.n == 3


def test_project_infeasible(capsys, tmp_path):
    code, _, err = run(capsys, tmp_path, "class.rho = 2\nclass.E1 = 0.5\nclass.U = 2,0,0\n", "project")
    assert code == 2 and "infeasible: T1<=0" in err


RELAX_CFG = "grid.n = 2\ngrid.m = 48\nfield.kind = mixture\nfield.shift = 1,0\nfield.T = 0.5\nrelax.steps = 12\n"


def test_relax_trace(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, RELAX_CFG, "relax")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,S,F,dist,rho,E"
    assert len(lines) == 1 + 12 + 1
    d = [float(l.split(",")[3]) for l in lines[1:]]
    assert d[-1] < d[0]


def test_relax_stationary(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, "grid.n = 2\ngrid.m = 48\nrelax.steps = 5\n", "relax")
    assert code == 0
    assert all(abs(float(l.split(",")[3])) < 1e-8 for l in out.splitlines()[1:])


def test_relax_out_file(capsys, tmp_path):
    target = tmp_path / "trace.csv"
    code, out, _ = run(capsys, tmp_path, RELAX_CFG, "relax", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("t,S,F,dist,rho,E\n")


def test_relax_from_field_file(capsys, tmp_path):
    g = make_velocity_grid(1, 8.0, 64)
    M = MaxwellianParams.at_rest(1.0, 1.0, 1)
    path = tmp_path / "m.txt"
    write_field(maxwellian_eval(M, g), path)
    code, out, _ = run(capsys, tmp_path, f"field.path = {path}\nrelax.steps = 2\n", "relax")
    assert code == 0 and len(out.splitlines()) == 4


def test_collide_quick(capsys, tmp_path):
    text = "grid.n = 2\ncollide.L = 6\ncollide.m = 10\ncollide.k = 12\ncollide.tolerance = 0.05\nfield.kind = mixture\n"
    code, out, _ = run(capsys, tmp_path, text, "collide")
    rec = record(out)
    assert code == 0
    assert rec["stationary"] == "true"
    assert {"rel_residual_phi0", "rel_residual_phi1", "rel_residual_phi2", "rel_residual_phi3"} <= set(rec)


def test_collide_rejects_1d(capsys, tmp_path):
    assert run(capsys, tmp_path, "grid.n = 1\n", "collide")[0] == 2


def test_config_parser():
    cfg = parse_config("# comment\nseed = 4\ngrid.n = 2\ngrid.L = 5.5\nreference.u = 0, 0\ncollide.refine = true\n")
    assert cfg.seed == 4 and cfg.grid.L == 5.5 and cfg.collide.refine is True
    assert cfg.reference_params().u == (0.0, 0.0)
    with pytest.raises(ValueError):
        parse_config("grid.n 2\n")
    with pytest.raises(ValueError):
        parse_config("collide.refine = maybe\n")


def test_default_L_tracks_hottest_temperature():
    cfg = parse_config("grid.n = 1\nreference.T = 1\nfield.T = 4\n")
    assert cfg.velocity_grid().extent == approx(16.0)


def test_cli_module_deterministic(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(RELAX_CFG)
    outs = [
        subprocess.run([sys.executable, "-m", "boltzdist", "relax", "--config", str(cfg)], capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1] and outs[0]


def test_collide_refine_flags_roundoff(capsys, tmp_path):
    base = "grid.n = 2\ncollide.L = 6\ncollide.m = 8\ncollide.k = 8\ncollide.m_fine = 10\ncollide.k_fine = 10\ncollide.refine = true\n"
    code, out, _ = run(capsys, tmp_path, base + "field.kind = mixture\n", "collide")
    rec = record(out)
    assert code == 0
    assert rec["residual_ratio_phi1"] == "roundoff"
    assert float(rec["residual_ratio_phi0"]) > 0

    asym = "field.kind = mixture\nfield.shift = 1.0, 0.2\nfield.shift2 = -0.4, -0.5\nfield.T2 = 1.0\nfield.weight = 0.4\n"
    code, out, _ = run(capsys, tmp_path, base + asym, "collide")
    rec = record(out)
    assert code == 0 and rec["residual_ratio_phi1"] != "roundoff"


def test_mixture_field_options():
    cfg = parse_config("grid.n = 2\ngrid.m = 64\nfield.kind = mixture\nfield.shift = 1,0\nfield.shift2 = 0,-1\nfield.T2 = 2\nfield.weight = 0.25\n")
    from boltzdist.dist import moments

    m = moments(cfg.build_field())
    assert m.rho_total == approx(1.0, abs=1e-10)
    assert m.U == approx([0.25, -0.75], abs=1e-10)
    # E = sum_i w_i (n T_i + |u_i|^2) / 2
    assert m.E_total == approx(0.25 * (2 + 1) / 2 + 0.75 * (4 + 1) / 2, abs=1e-9)
    with pytest.raises(ValueError):
        parse_config("grid.n = 2\nfield.kind = mixture\nfield.weight = 1.5\n").build_field()


@pytest.mark.parametrize("before", [True, False])
def test_global_flags_either_side_of_command(capsys, tmp_path, before):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("grid.n = 3\ngrid.m = 40\nreference.T = 2\n")
    flags = ["--json", "--config", str(cfg)]
    argv = flags + ["moments"] if before else ["moments"] + flags
    assert main(argv) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["E_total"] == approx(3.0, rel=1e-9)
