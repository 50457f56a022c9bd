import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from profquad.rule import (
    EPS0,
    GK21,
    Interval,
    NonFiniteSampleError,
    combine_estimates,
    gauss_kronrod_21,
    local_estimate,
    map_knots,
    qdp_estimate,
    quad_sums,
    roundoff_floor,
)


def exact_monomial(k, a, b):
    a, b = Fraction(a), Fraction(b)
    return float((b ** (k + 1) - a ** (k + 1)) / (k + 1))


def test_weight_sums_are_two():
    assert math.fsum(GK21.fine_weights) == pytest.approx(2.0, abs=2 * EPS0)
    assert math.fsum(GK21.coarse_weights) == pytest.approx(2.0, abs=2 * EPS0)


def test_rule_layout():
    r = GK21
    assert r.n == 10 and r.gamma == 1
    assert r.reduced_knots.shape == (21,)
    assert r.d_av == pytest.approx(2 / 23)
    assert np.all(np.diff(r.reduced_knots) > 0)
    assert r.reduced_knots[10] == 0.0
    np.testing.assert_array_equal(r.reduced_knots, -r.reduced_knots[::-1])
    np.testing.assert_array_equal(r.coarse_labels, [-9, -7, -5, -3, -1, 1, 3, 5, 7, 9])
    # coarse weights vanish outside the Gauss subset
    mask = np.zeros(21, dtype=bool)
    mask[r.coarse_labels + 10] = True
    assert np.all(r.coarse_weights[~mask] == 0.0)
    assert np.all(r.coarse_weights[mask] > 0.0)
    assert r.profile_labels[0] == -11 and r.profile_labels[-1] == 11


def test_tables_are_read_only():
    with pytest.raises(ValueError):
        GK21.fine_weights[0] = 1.0
    fresh = gauss_kronrod_21()
    np.testing.assert_array_equal(fresh.fine_weights, GK21.fine_weights)
    np.testing.assert_array_equal(fresh.reduced_knots, GK21.reduced_knots)


@pytest.mark.parametrize("k", range(0, 32))
def test_fine_sum_exact_on_reference_interval(k):
    iv = Interval(-1.0, 1.0)
    x = map_knots(GK21, iv)
    q2n, _ = quad_sums(GK21, x[1:-1] ** k, iv)
    assert q2n == pytest.approx(exact_monomial(k, -1, 1), abs=1e-14)


@pytest.mark.parametrize("k", range(0, 20))
def test_coarse_sum_exact_to_degree_19(k):
    iv = Interval(0.5, 1.75)
    x = map_knots(GK21, iv)
    _, qn = quad_sums(GK21, x[1:-1] ** k, iv)
    exact = exact_monomial(k, 0.5, 1.75)
    assert abs(qn - exact) <= 1e-13 * abs(exact)


def test_coarse_sum_not_exact_at_degree_20():
    iv = Interval(-1.0, 1.0)
    x = map_knots(GK21, iv)
    q2n, qn = quad_sums(GK21, x[1:-1] ** 20, iv)
    assert abs(q2n - 2 / 21) < 1e-15
    assert abs(qn - 2 / 21) / (2 / 21) > 1e-10


def test_trapezoid_oracle_on_smooth_integrand():
    iv = Interval(0.3, 2.9)
    f = lambda x: np.exp(-x) * np.cos(3 * x)  # noqa: E731
    x = map_knots(GK21, iv)
    q2n, _ = quad_sums(GK21, f(x[1:-1]), iv)
    t = np.linspace(iv.a, iv.b, 400001)
    trap = np.trapezoid(f(t), t)
    assert q2n == pytest.approx(trap, abs=1e-9)


def test_map_knots_symmetry_and_endpoints():
    iv = Interval(-3.0, 7.5)
    x = map_knots(GK21, iv)
    assert x[0] == iv.a and x[-1] == iv.b and x[11] == iv.c
    assert np.all(np.diff(x) > 0)
    np.testing.assert_allclose((x - iv.c) + (x[::-1] - iv.c), 0.0, atol=4 * EPS0 * 7.5)


def test_interval_validation_and_split():
    with pytest.raises(ValueError):
        Interval(1.0, 1.0)
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)
    with pytest.raises(ValueError):
        Interval(0.0, math.inf)
    left, right = Interval(0.0, 3.0).split()
    assert left.b == right.a == 1.5
    assert left.a == 0.0 and right.b == 3.0
    assert Interval(1, 2).length == 1.0 and Interval(1, 2).h == 0.5


def test_qdp_estimate_edges():
    assert qdp_estimate(1.0, 0.0) == 0.0
    assert qdp_estimate(1.0, 2.0) == 2.0  # saturates at delta
    assert qdp_estimate(1e-6, 1.0) == pytest.approx((2e-4) ** 1.5)


def test_estimator_formulas_against_straight_line_oracle():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        e_ggk = float(10.0 ** rng.uniform(-18, 1))
        delta = float(10.0 ** rng.uniform(-6, 2)) if rng.random() > 0.05 else 0.0
        abs_sum = float(10.0 ** rng.uniform(-3, 3))
        if delta == 0.0:
            qdp = 0.0
        else:
            qdp = delta * min((200.0 * e_ggk / delta) ** 1.5, 1.0)
        roff = 50.0 * EPS0 * abs_sum
        e2n = max(roff, min(e_ggk, qdp))
        assert qdp_estimate(e_ggk, delta) == qdp
        assert roundoff_floor(abs_sum) == roff
        assert combine_estimates(e_ggk, qdp_estimate(e_ggk, delta), roundoff_floor(abs_sum)) == e2n


def test_local_estimate_fields():
    iv = Interval(0.0, 2.0)
    x = map_knots(GK21, iv)
    f = np.sin(3 * x) + 1.5
    est = local_estimate(GK21, f[1:-1], iv)
    q2n, qn = quad_sums(GK21, f[1:-1], iv)
    assert est.q2n == q2n and est.qn == qn
    assert est.e_ggk == abs(q2n - qn)
    assert est.f_bar == est.q2n / iv.length
    assert est.e_qdp == qdp_estimate(est.e_ggk, est.delta)
    assert est.e_roff == roundoff_floor(est.abs_sum)
    assert est.e2n == combine_estimates(est.e_ggk, est.e_qdp, est.e_roff)
    assert est.rho_2n == abs(est.e2n / est.q2n)
    exact = 3.0 + (1 - math.cos(6.0)) / 3
    assert est.q2n == pytest.approx(exact, rel=1e-13)


def test_zero_integrand_has_zero_estimates():
    iv = Interval(0.0, 1.0)
    est = local_estimate(GK21, np.zeros(21), iv)
    assert est.q2n == 0.0 and est.e2n == 0.0 and est.rho_2n == math.inf


def test_non_finite_sample_reports_knot():
    v = np.ones(21)
    v[4] = np.nan
    with pytest.raises(NonFiniteSampleError) as exc:
        local_estimate(GK21, v, Interval(0.0, 1.0))
    assert exc.value.index == -6


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(-50, 50),
    length=st.floats(1e-3, 100),
    scale=st.floats(1e-3, 1e3),
)
def test_estimates_scale_with_integrand(a, length, scale):
    iv = Interval(a, a + length)
    x = map_knots(GK21, iv)
    f = np.cos(x) + 2.0
    e1 = local_estimate(GK21, f[1:-1], iv)
    e2 = local_estimate(GK21, scale * f[1:-1], iv)
    assert e2.q2n == pytest.approx(scale * e1.q2n, rel=1e-12)
    assert e2.abs_sum == pytest.approx(scale * e1.abs_sum, rel=1e-12)
    assert e1.e2n >= e1.e_roff
