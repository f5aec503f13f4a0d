import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srgrand.ldp import (
    ExponentCurve, LengthLaw, NoiseDistribution, NonConvexError,
    abandonment_exponent, abandonment_exponent_terms, approx_bler, approx_queries_per_bit,
    brute_force_computations_per_bit, capacity_hard, capacity_sr, complexity_exponent,
    complexity_exponent_ab, critical_rate, error_exponent, error_exponent_conditional,
    error_exponent_from_conditional, g_star, g_star_from_rate, golden_section_max, h2,
    legendre_transform, min_entropy, rate_length, rate_length_kl, rate_noise,
    rate_subordinated, renyi_entropy, scgf_length, scgf_noise, scgf_subordinated,
    shannon_entropy,
)
import oracles

B = NoiseDistribution.bernoulli


def direct_renyi(p, a):
    return math.log2(p**a + (1 - p) ** a) / (1 - a)


def test_entropies():
    assert h2(0.05) == pytest.approx(0.286397, abs=1e-6)
    assert shannon_entropy(B(0.11)) == pytest.approx(oracles.h2(0.11), abs=1e-15)
    assert min_entropy(B(0.05)) == pytest.approx(-math.log2(0.95))
    assert renyi_entropy(B(0.05), 0.5) == pytest.approx(direct_renyi(0.05, 0.5), abs=1e-12)
    assert renyi_entropy(B(0.05), 0.5) == pytest.approx(0.521945, abs=1e-6)
    assert renyi_entropy(B(0.2), 1.0) == pytest.approx(h2(0.2))
    assert renyi_entropy(B(0.2), math.inf) == pytest.approx(min_entropy(B(0.2)))
    assert renyi_entropy(B(0.2), 0.0) == pytest.approx(1.0)
    assert renyi_entropy(NoiseDistribution((0.5, 0.25, 0.25)), 2.0) == pytest.approx(math.log(1 / 0.375, 3))


@given(st.floats(0.001, 0.999), st.floats(0.1, 5.0))
def test_renyi_matches_direct_formula(p, a):
    if abs(a - 1) < 1e-3:
        return
    assert renyi_entropy(B(p), a) == pytest.approx(direct_renyi(p, a), rel=1e-9, abs=1e-12)


def test_scgf_values():
    d = B(0.05)
    assert scgf_noise(1.0, d) == pytest.approx(renyi_entropy(d, 0.5))
    assert scgf_noise(-3.0, d) == pytest.approx(-min_entropy(d))
    assert scgf_noise(0.0, d) == 0.0
    assert scgf_length(1.0, 0.4) == pytest.approx(0.485427, abs=1e-6)
    assert scgf_length(5.0, 1.0) == 5.0 and scgf_length(5.0, 0.0) == 0.0
    assert scgf_length(2000.0, 0.3) == pytest.approx(2000 + math.log2(0.3))
    lam = scgf_subordinated(1.0, d, 0.4)
    assert lam == pytest.approx(math.log2(0.6 + 0.4 * 2 ** renyi_entropy(d, 0.5)), abs=1e-12)
    assert lam == pytest.approx(0.231870, abs=1e-6)


@given(st.floats(-0.99, 30.0), st.floats(0.01, 0.99))
def test_scgf_noise_direct(alpha, p):
    t = 1 / (1 + alpha)
    direct = (1 + alpha) * math.log2(p**t + (1 - p) ** t) if t < 500 else None
    if direct is not None and math.isfinite(direct):
        assert scgf_noise(alpha, B(p)) == pytest.approx(direct, rel=1e-9, abs=1e-9)


def test_scgf_noise_near_minus_one_is_continuous():
    d = B(0.2)
    assert scgf_noise(-1 + 1e-9, d) == pytest.approx(-min_entropy(d), abs=1e-6)


def test_golden_section():
    arg, val = golden_section_max(lambda x: -(x - 1.3) ** 2 + 2, -5, 5, 1e-10)
    assert arg == pytest.approx(1.3, abs=1e-6) and val == pytest.approx(2.0)


def test_legendre_transform_quadratic_and_nonconvex():
    assert legendre_transform(lambda a: a * a / 2, 3.0) == pytest.approx(4.5, abs=1e-8)
    assert legendre_transform(lambda a: a * a / 2, 60.0) == pytest.approx(1800.0, rel=1e-6)
    with pytest.raises(NonConvexError):
        legendre_transform(lambda a: -a * a, 0.0)


@pytest.mark.parametrize("p", [0.05, 0.1, 0.3])
@pytest.mark.parametrize("x", [0.0, 0.1, 0.4, 0.8])
def test_rate_noise_against_grid_oracle(p, x):
    d = B(p)
    want = oracles.legendre_grid(lambda a: scgf_noise(a, d), x)
    assert rate_noise(x, d) == pytest.approx(want, abs=1e-5)


def test_rate_noise_identities():
    d = B(0.05)
    assert rate_noise(h2(0.05), d) == pytest.approx(0.0, abs=1e-9)
    assert rate_noise(0.0, d) == pytest.approx(min_entropy(d), abs=1e-9)
    assert rate_noise(-0.1, d) == math.inf and rate_noise(1.1, d) == math.inf


@given(st.floats(0.0, 1.0), st.floats(0.01, 0.99))
def test_rate_length_forms_agree(l, q):
    assert rate_length(l, q) == pytest.approx(rate_length_kl(l, q), abs=1e-6)


def test_rate_length_zero_at_mean():
    assert rate_length_kl(0.4, LengthLaw(0.4)) == 0.0
    assert rate_length_kl(1.2, 0.4) == math.inf
    assert rate_length_kl(0.5, 0.0) == math.inf


@settings(max_examples=15)
@given(st.floats(0.05, 0.95), st.floats(0.02, 0.45), st.floats(0.0, 1.0))
def test_rate_subordinated_is_transform_of_composed_scgf(q, p, frac):
    d = B(p)
    g = frac * 0.99
    direct = legendre_transform(lambda a: scgf_subordinated(a, d, q), g, check=False)
    assert rate_subordinated(g, d, q) == pytest.approx(direct, abs=2e-5)


def test_rate_subordinated_special_cases():
    d = B(0.1)
    assert rate_subordinated(0.3, d, 1.0) == rate_noise(0.3, d)
    assert rate_subordinated(0.0, d, 0.0) == 0.0
    assert rate_subordinated(0.2, d, 0.0) == math.inf
    assert rate_subordinated(0.4 * h2(0.1), d, 0.4) == pytest.approx(0.0, abs=1e-9)


def test_capacities():
    assert capacity_sr(0.1, 0.1) == pytest.approx(1 - 0.1 * oracles.h2(0.1), abs=1e-12)
    assert capacity_hard(0.1, 0.1) == pytest.approx(1 - oracles.h2(0.01), abs=1e-12)
    assert capacity_sr(0.1, 0.1) == pytest.approx(0.95310, abs=1e-5)
    assert capacity_hard(0.1, 0.1) == pytest.approx(0.91921, abs=1e-5)


def test_g_star_two_routes():
    d = B(0.05)
    a, b = g_star(d), g_star_from_rate(d)
    assert a == pytest.approx(b, abs=1e-6)
    assert a == pytest.approx(0.694316, abs=1e-5)
    assert rate_noise(a, d) == pytest.approx(a - renyi_entropy(d, 0.5), abs=1e-8)
    with pytest.raises(ValueError):
        g_star(B(0.5))


def test_critical_rate_boundaries():
    # both agree at q = 1 and differ strictly inside
    assert critical_rate(1.0, 0.1) == pytest.approx(critical_rate(1.0, 0.1, "mean"))
    assert critical_rate(0.4, 0.05) < critical_rate(0.4, 0.05, "mean")
    with pytest.raises(ValueError):
        critical_rate(0.4, 0.05, "other")


@pytest.mark.parametrize("q,p", [(0.4, 0.05), (1.0, 0.05), (0.25, 0.2), (0.8, 0.3)])
def test_error_exponent_continuous_at_critical_rate(q, p):
    Rc = critical_rate(q, p)
    lo, hi = error_exponent(Rc - 1e-9, q, p), error_exponent(Rc + 1e-9, q, p)
    assert lo == pytest.approx(hi, abs=1e-6)


@pytest.mark.parametrize("q,p", [(0.4, 0.05), (0.4, 0.1), (1.0, 0.05), (0.1, 0.5), (0.6, 0.0)])
@pytest.mark.parametrize("R", [0.1, 0.5, 0.7, 0.9])
def test_error_exponent_is_inf_over_unreliable_fraction(q, p, R):
    assert error_exponent(R, q, p) == pytest.approx(error_exponent_from_conditional(R, q, p), abs=1e-6)


def test_error_exponent_value_and_zero_region():
    assert error_exponent(0.5, 0.4, 0.1) == pytest.approx(0.18966, abs=1e-5)
    C = capacity_sr(0.4, 0.1)
    assert error_exponent(C, 0.4, 0.1) == 0.0
    assert error_exponent(C - 1e-3, 0.4, 0.1) > 0.0


def test_conditional_exponent_branches():
    with pytest.raises(ValueError):
        error_exponent_conditional(0.5, 0.0, 0.4, 0.1)
    # the reliable-fraction cost vanishes at l = q
    assert error_exponent_conditional(0.99, 0.4, 0.4, 0.1) == 0.0


def test_abandonment_terms():
    e, a = abandonment_exponent_terms(0.5, 0.4, 0.1, 0.05)
    assert e == error_exponent(0.5, 0.4, 0.1)
    assert a == pytest.approx(rate_subordinated(0.4 * h2(0.1) + 0.05, B(0.1), 0.4))
    _, lit = abandonment_exponent_terms(0.5, 0.4, 0.1, 0.05, literal=True)
    assert lit >= a
    assert abandonment_exponent(0.5, 0.4, 0.1, 0.05) == min(e, a)
    with pytest.raises(ValueError):
        abandonment_exponent_terms(0.5, 0.4, 0.1, 0.0)


def test_complexity_exponents():
    q, p = 0.4, 0.1
    lam = scgf_length(renyi_entropy(B(p), 0.5), q)
    assert complexity_exponent(0.2, q, p) == pytest.approx(lam)
    assert complexity_exponent(0.95, q, p) == pytest.approx(0.05)
    assert complexity_exponent_ab(0.2, q, p, 0.01) == pytest.approx(min(lam, q * h2(p) + 0.01))


def test_approximations():
    b100 = approx_bler(100, 0.5, 0.4, 0.1)
    assert approx_bler(200, 0.5, 0.4, 0.1) == pytest.approx(b100**2, rel=1e-9)
    with pytest.warns(RuntimeWarning):
        assert approx_bler(100, 0.99, 0.4, 0.1) == 1.0
    assert approx_queries_per_bit(100, 0.2, 1.0, 0.1) == pytest.approx(2 ** (100 * renyi_entropy(B(0.1), 0.5)) / 100)
    assert brute_force_computations_per_bit(100, 0.3) == pytest.approx(2**30 / 100)


def test_exponent_curve_checks():
    c = ExponentCurve([0, 1, 2], [1, 0, 1])
    assert c.is_convex()
    assert not ExponentCurve([0, 1, 2], [0, 1, 0]).is_convex()
    with pytest.raises(ValueError):
        ExponentCurve([1, 0], [0, 0])
    with pytest.raises(ValueError):
        NoiseDistribution((0.5, 0.6))


@pytest.mark.parametrize("q,p", [(0.4, 0.1), (0.4, 0.05), (1.0, 0.1), (0.2, 0.3), (0.7, 0.02)])
@pytest.mark.parametrize("R", [0.2, 0.45, 0.6, 0.8])
def test_error_exponent_matches_gallager_random_coding(q, p, R):
    assert error_exponent(R, q, p) == pytest.approx(oracles.gallager_exponent(R, q, p), abs=1e-6)
