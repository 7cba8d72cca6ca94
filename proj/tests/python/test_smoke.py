"""End-to-end smoke of the Python bindings against known values."""

import math

import pynecklab as nl


def test_closed_forms():
    assert abs(nl.gamma_star(3) - (math.sqrt(2) - 1)) < 1e-14
    assert abs(nl.gamma_star(6) - (math.sqrt(41) - 5) / 2) < 1e-14
    assert abs(nl.blow_up_exponent(3) + (2 - math.sqrt(2)) / 2) < 1e-14
    assert abs(nl.rho(3, nl.gamma_star(3))) < 1e-14


def test_certificate_values():
    g = nl.gamma_star(3)
    assert abs(nl.M_value(3, g, 0.02, 0.0) - 0.24463724169609008) < 1e-12
    pc = nl.phi_crit(3, g, 0.0)
    assert 0.02 < pc < 0.2

    aux = nl.AuxParams.defaults(3)
    aux.validate()
    assert nl.aux_F(aux, 0.05, 0.0) > 0.0
    assert nl.boundary_expr(aux, 0.05) < 0.0


def test_geometry_and_solve():
    geom = nl.NeckGeometry()
    geom.validate()
    assert abs(geom.gap(0.1) - (geom.eps + 0.1**2)) < 1e-15

    out = nl.solve_field(geom, n=3, k=0, Nr=64, Ns=8, outer_value=1.0)
    assert out["residual"] <= 1e-10
    worst = max(abs(v - 1.0) for row in out["v"] for v in row)
    assert worst <= 1e-10


def test_fit_and_sweep():
    samples = [(10.0 ** (-2 - 0.5 * i), 3.0 * 10.0 ** (0.3 * (2 + 0.5 * i))) for i in range(5)]
    fit = nl.fit_exponent(samples)
    assert abs(fit.slope + 0.3) < 1e-9

    geom = nl.NeckGeometry()
    eps_list = [10.0 ** (-4 + 2 * i / 3) for i in range(4)]
    sweep = nl.run_sweep(geom, 3, 1, eps_list, 96, 12, 0.5, jobs=2)
    assert all(p.ok for p in sweep.points)
    assert sweep.fit.slope < -0.2
    assert sweep.fit.r_squared > 0.98
