import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pytest import approx

from boltzdist.dist import (
    DistributionField,
    MaxwellianParams,
    entropy,
    local_maxwellian,
    maxwellian_eval,
    moments,
    read_field,
    write_field,
)
from boltzdist.grid import integrate, make_domain, make_velocity_grid

UNIT_S = 0.5 + 0.5 * math.log(2 * math.pi)


def unit_maxwellian(m=256, L=8.0, rho=1.0, u=(0.0,), T=1.0):
    g = make_velocity_grid(len(u), L, m)
    return maxwellian_eval(MaxwellianParams(rho, u, T, 1.0), g)


def test_peak_value():
    f = unit_maxwellian(m=257)
    g = f.grid
    center = int(np.flatnonzero(g.nodes[:, 0] == 0.0)[0])
    assert f.values[0, center] == approx(1 / math.sqrt(2 * math.pi), rel=1e-14)


def test_maxwellian_density():
    assert moments(unit_maxwellian()).rho_total == approx(1.0, abs=1e-8)


def test_maxwellian_mean_velocity_2d():
    g = make_velocity_grid(2, 10.0, 80)
    f = maxwellian_eval(MaxwellianParams(1.0, (2.0, 0.0), 1.0), g)
    assert np.allclose(moments(f).mean_u_per_cell[0], [2.0, 0.0], atol=1e-8)


def test_maxwellian_dimension_mismatch():
    g = make_velocity_grid(2, 4.0, 8)
    with pytest.raises(ValueError):
        maxwellian_eval(MaxwellianParams(1.0, (0.0,), 1.0), g)


def test_local_maxwellian():
    g1 = make_velocity_grid(1, 8.0, 128)
    assert np.all(local_maxwellian(0.0, 0.0, 1.0, g1) == 0.0)
    assert integrate(g1, local_maxwellian(1.0, 0.0, 1.0, g1)) == approx(1.0, abs=1e-8)

    g3 = make_velocity_grid(3, 8 * math.sqrt(2), 48)
    energy = integrate(g3, 0.5 * g3.speed_sq * local_maxwellian(1.0, np.zeros(3), 2.0, g3))
    assert energy == approx(3.0, abs=1e-6)
    with pytest.raises(ValueError):
        local_maxwellian(1.0, 0.0, 0.0, g1)


def test_moments_examples():
    m = moments(unit_maxwellian(rho=2.0))
    assert (m.rho_total, m.U[0], m.E_total) == approx((2.0, 0.0, 1.0), abs=1e-6)

    m = moments(unit_maxwellian(L=10.0, m=320, u=(1.0,)))
    assert (m.U[0], m.E_total) == approx((1.0, 1.0), abs=1e-6)


def test_empty_field():
    g = make_velocity_grid(2, 3.0, 6)
    f = DistributionField(g, make_domain(3), np.zeros((3, g.size)))
    m = moments(f)
    assert (m.rho_total, m.E_total, m.S) == (0.0, 0.0, 0.0)
    assert np.all(m.U == 0) and np.all(m.mean_u_per_cell == 0)


def test_empty_cell_reports_zero_drift():
    g = make_velocity_grid(1, 12.0, 96)
    row = local_maxwellian(1.0, 1.5, 1.0, g)
    f = DistributionField(g, make_domain(2), np.stack([row, np.zeros_like(row)]))
    m = moments(f)
    assert m.mean_u_per_cell[0, 0] == approx(1.5, abs=1e-10)
    assert m.mean_u_per_cell[1, 0] == 0.0


def test_entropy_examples():
    g = make_velocity_grid(1, 0.5, 4)
    assert entropy(DistributionField(g, make_domain(1, 1.0), np.ones(g.size))) == 0.0

    f = unit_maxwellian()
    assert entropy(f) == approx(UNIT_S, abs=1e-6)
    assert entropy(f.with_values(2 * f.values)) == approx(2 * UNIT_S - 2 * math.log(2), abs=1e-6)


def test_entropy_closed_form_with_volume():
    # S(M) = rho (n/2 + log(V (2 pi T)^(n/2) / rho))
    rho, T, V = 1.7, 0.6, 2.5
    g = make_velocity_grid(2, 8 * math.sqrt(T), 96)
    f = maxwellian_eval(MaxwellianParams(rho, (0.0, 0.0), T, V), g, make_domain(4, V))
    assert entropy(f) == approx(rho * (1 + math.log(V * 2 * math.pi * T / rho)), abs=1e-9)


def test_negative_value_named():
    g = make_velocity_grid(1, 1.0, 4)
    with pytest.raises(ValueError, match=r"\(0, 2\)"):
        DistributionField(g, make_domain(), [1.0, 1.0, -0.5, 1.0])


@settings(max_examples=25, deadline=None)
@given(
    rho=st.floats(0.2, 5.0),
    T=st.floats(0.3, 3.0),
    u=st.tuples(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5)),
)
def test_maxwellian_moments_reproduce_parameters(rho, T, u):
    L = 8 * math.sqrt(T) + 1.5
    g = make_velocity_grid(2, L, 64)
    f = maxwellian_eval(MaxwellianParams(rho, u, T), g)
    m = moments(f)
    E = rho * (2 * T + u[0] ** 2 + u[1] ** 2) / 2
    assert m.rho_total == approx(rho, rel=1e-9)
    assert np.allclose(m.U, rho * np.array(u), atol=1e-9 * rho)
    assert m.E_total == approx(E, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(a=st.floats(0.0, 3.0), b=st.floats(0.0, 3.0), seed=st.integers(0, 2**32 - 1))
def test_linear_moments(a, b, seed):
    g = make_velocity_grid(2, 3.0, 8)
    rng = np.random.default_rng(seed)
    u, v = rng.random((2, 2, g.size))
    dom = make_domain(2)
    mu, mv = moments(DistributionField(g, dom, u)), moments(DistributionField(g, dom, v))
    mw = moments(DistributionField(g, dom, a * u + b * v))
    assert mw.rho_total == approx(a * mu.rho_total + b * mv.rho_total, rel=1e-12, abs=1e-14)
    assert np.allclose(mw.U, a * mu.U + b * mv.U, rtol=1e-12, atol=1e-13)
    assert mw.E_total == approx(a * mu.E_total + b * mv.E_total, rel=1e-12, abs=1e-14)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_entropy_reflection_invariant(seed):
    g = make_velocity_grid(3, 2.0, 5)
    rng = np.random.default_rng(seed)
    vals = rng.random((2, g.size)) * 3
    f = DistributionField(g, make_domain(2), vals)
    flipped = f.with_values(np.stack([g.reflect(row) for row in vals]))
    assert entropy(flipped) == approx(entropy(f), rel=1e-12)


def test_moments_are_invariant_integrals():
    g = make_velocity_grid(2, 4.0, 12)
    rng = np.random.default_rng(3)
    f = DistributionField(g, make_domain(1), rng.random(g.size))
    m = moments(f)
    row = f.values[0]
    assert m.rho_total == approx(integrate(g, row), rel=1e-13)
    assert m.U == approx([integrate(g, g.nodes[:, k] * row) for k in range(2)], rel=1e-12, abs=1e-14)
    assert m.E_total == approx(integrate(g, 0.5 * g.speed_sq * row), rel=1e-13)


def test_field_file_round_trip(tmp_path):
    g = make_velocity_grid(2, 3.3, 6)
    rng = np.random.default_rng(0)
    f = DistributionField(g, make_domain(3, 2.0), rng.random((3, g.size)) * np.pi)
    path = tmp_path / "f.txt"
    write_field(f, path)
    back = read_field(path, V_omega=2.0)
    assert path.read_text().splitlines()[0] == "2 1 6 3.3 3"
    assert np.array_equal(back.values, f.values)
    assert back.grid.extent == g.extent and back.domain.cells == 3


def test_field_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 1 4 1.0 1\n0.1 0.2 0.3\n")
    with pytest.raises(ValueError):
        read_field(path)
    path.write_text("1 1 4 1.0 1\n0.1 -0.2 0.3 0.4\n")
    with pytest.raises(ValueError, match="negative"):
        read_field(path)
