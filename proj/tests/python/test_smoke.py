"""End-to-end smoke of the python bindings: one touch per exposed family,
checked against independently known values (closed forms and small hand
counts).  Accuracy itself is the C++ test suite's job."""

import json
import math

import pytest

import friable


@pytest.fixture(scope="module")
def rt():
    return friable.build_rho_table(30.0)


@pytest.fixture(scope="module")
def ft():
    return friable.build_tables(5000)


@pytest.fixture(scope="module")
def ctx():
    return friable.build_saddle_context(100_000)


def test_rho_family(rt):
    assert friable.rho(rt, 0.5) == 1.0
    assert friable.rho(rt, 2.0) == pytest.approx(1.0 - math.log(2.0), rel=1e-12)
    assert friable.rho(rt, 3.0) == pytest.approx(0.0486083883, rel=1e-9)
    assert friable.log_rho(rt, 3.0) == pytest.approx(math.log(0.0486083883), rel=1e-9)
    # delay equation at an interior point
    v = 2.5
    assert friable.rho_prime(rt, v) == pytest.approx(
        -friable.rho(rt, v - 1.0) / v, rel=1e-12
    )
    assert friable.dickman_r(rt, 20.0) > 0.0
    assert friable.rho_integral(rt) == pytest.approx(math.exp(0.57721566490153286), rel=1e-9)
    assert rt.covers(30.0) and not rt.covers(31.0)


def test_xi_and_zeta():
    v, x = 10.0, friable.xi(10.0)
    assert math.exp(x) == pytest.approx(1.0 + v * x, rel=1e-12)
    assert friable.xi_prime(1.0) == pytest.approx(2.0, rel=1e-6)
    assert friable.zeta_real(2.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-12)
    assert friable.big_z(2.0) == pytest.approx(math.pi**2 / 12.0, rel=1e-12)
    assert friable.big_z(1.0) == 1.0


def test_exact_counters(ft):
    assert ft.limit == 5000
    assert friable.psi_exact(ft, 100, 5) == 34
    assert friable.n_exact(ft, 20, 3) == 7
    assert friable.s_exact(ft, 100, 0.5) == 17
    assert friable.d_exact(ft, 100, 1.0) == 100
    assert friable.psi_mult(12) == 12
    assert friable.psi_mult(8) == 3
    # the step-function integral identity is pure rounding noise
    assert friable.integral_identity_check(ft, 5000) < 1e-8
    assert friable.dickman_sum_exact(ft, 100) > 0.0


def test_saddle_machinery(ctx):
    s = friable.sigma_solve(ctx, 3.0)
    assert 0.0 < s < 1.0
    assert abs(friable.g_prime(ctx, s) + 3.0) <= 1e-8 * 3.0
    assert abs(friable.g_value(ctx, 1.0)) < 1e-12
    assert friable.sigma_asymptotic(1e4, order=2) == pytest.approx(
        friable.sigma_solve(ctx, 1e4), rel=0.05
    )
    f1 = friable.kernel_f(ctx, 1.0)
    assert 1.0 < f1.value < 3.0 and not f1.reduced_accuracy
    fh = friable.kernel_f_saturating(ctx, 15.0)
    assert 0.999 < fh.value < 1.0


def test_estimates(rt, ctx):
    r = friable.d_estimate(rt, 1e6, 2.5)
    assert r.value == pytest.approx(r.main_term + r.correction_term, rel=1e-12)
    assert not r.multiplicative
    parsed = json.loads(r.json())
    assert parsed["value"] == pytest.approx(r.value, rel=1e-15)
    ps = friable.psi_saddle(rt, 1e6, 1e3)
    assert ps.value == ps.main_term > 0.0
    assert "saddle" in ps.notes
    df = friable.d_estimate(rt, 1e6, 2.5, form=friable.DForm.saddle_factor)
    assert df.multiplicative
    assert df.value == pytest.approx(
        df.main_term * (1.0 + df.correction_term), rel=1e-12
    )
    ne = friable.n_estimate(ctx, 1e6, 1e3)
    assert ne.value > 0.0 and ne.error_scale > 0.0
    se = friable.s_estimate(ctx, 1e6, 0.5)
    assert se.value > 0.0
    # the (b=1.7, c=10) window is empty until x is enormous: the upper arm
    # x/(log x)^c only clears the lower arm e^{(log log x)^b} around 1e30
    assert friable.hrange_contains(1e30, 1e6)
    assert not friable.hrange_contains(1e30, 2.0)
    assert not friable.hrange_contains(1e8, 1e4)


def test_sandwich_brackets_exact_count(ft):
    x, u = 5000.0, 2.5
    res = friable.sandwich_d(ft, x, u)
    exact = friable.d_exact(ft, x, u)
    assert res.lower <= exact <= res.upper
    sched = friable.default_schedule_friable(x, u)
    assert sched.K >= 1
    assert sched.x_at(0) == pytest.approx(x)
    res_s = friable.sandwich_s(ft, 3000.0, 0.5, 0.0)
    exact_s = friable.s_exact(ft, 3000.0, 0.5)
    assert res_s.lower <= exact_s <= res_s.upper


def test_error_mapping(rt, ft):
    with pytest.raises(ValueError):
        friable.xi(0.0)
    with pytest.raises(ValueError):
        friable.rho(rt, -1.0)
    with pytest.raises(ValueError):
        friable.rho(rt, 1000.0)  # past the table
    with pytest.raises(friable.ResourceError):
        friable.build_tables(200_000_000)
    # u < 1 is a legal degenerate query: the threshold n^(1/u) >= n
    assert friable.d_exact(ft, 100.0, 0.5) == 100
