import cmath
import dataclasses
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thetasum.errors import InfeasibleCancellation
from thetasum.summation import (
    DEFAULT_POLICY,
    EvalResult,
    Strategy,
    SummingMethod,
    TruncationPolicy,
    check_summing_conditions,
    eval_bilateral,
    eval_direct,
    gamma_coefficient,
    log_gamma_coefficient,
    method_bound,
    negative_tail,
    order_probe,
    predicted_peak_log,
)

THETA = SummingMethod.THETA


def brute_theta(z, eps, n_terms, start=0, dps=40):
    mpmath.mp.dps = dps
    zz = mpmath.mpc(complex(z).real, complex(z).imag)
    e = mpmath.mpf(eps)
    return complex(mpmath.fsum(mpmath.exp(-e * n * n) * zz ** n for n in range(start, n_terms)))


def test_gamma_coefficient_examples():
    assert gamma_coefficient(THETA, 0, 0.3) == 1.0
    assert gamma_coefficient(SummingMethod.LINDELOF, 1, 0.7) == 1.0
    assert gamma_coefficient(SummingMethod.LINDELOF, 0, 0.7) == 1.0
    # Le Roy reparametrization: at eps = 1 the coefficient is 1/n!
    assert gamma_coefficient(SummingMethod.GAMMA_RATIO, 5, 1.0) == pytest.approx(1 / 120, rel=1e-13)
    assert gamma_coefficient(SummingMethod.GAMMA_RATIO, 5, 1e-9) == pytest.approx(1.0, rel=1e-7)


@pytest.mark.parametrize("method", list(SummingMethod))
def test_gamma_coefficient_positive_and_bounded(method):
    for eps in (1.0, 0.3, 0.05):
        for n in (0, 1, 2, 5, 50, 500):
            lg = float(log_gamma_coefficient(method, n, eps))
            # in log form, so values below the double range still count as positive
            assert math.isfinite(lg) and lg <= math.log(method_bound(method)) + 1e-12
            assert gamma_coefficient(method, n, eps) <= method_bound(method) * (1 + 1e-12)


@settings(max_examples=200)
@given(st.integers(1, 10_000), st.floats(1e-3, 1.0))
def test_theta_root_decay_closed_form(n, eps):
    g = gamma_coefficient(THETA, n, eps)
    if g < 1e-300:  # subnormal or zero: the n-th root is meaningless in double
        return
    assert g ** (1 / n) == pytest.approx(math.exp(-eps * n), rel=1e-14)


def test_summing_conditions_theta():
    rep = check_summing_conditions(THETA, 0.1, 10 ** 4)
    assert rep.bounded and rep.pointwise_limit and rep.root_decay
    assert rep.all_pass


def test_summing_conditions_mittag_leffler():
    # 1/Gamma(1 + eps n) has n-th root ~0.55 at n = 1e4; it drops below 0.5 by 1e5
    rep = check_summing_conditions(SummingMethod.MITTAG_LEFFLER, 0.1, 10 ** 4)
    assert rep.bounded and rep.pointwise_limit
    assert rep.root_decay is False
    assert check_summing_conditions(SummingMethod.MITTAG_LEFFLER, 0.1, 10 ** 5).all_pass


def test_summing_conditions_degenerate_nmax():
    rep = check_summing_conditions(THETA, 0.1, 1)
    assert rep.root_decay is None


def test_eval_direct_examples():
    r = eval_direct(0, 0.4)
    assert r.value == 1 and r.strategy is Strategy.DIRECT_SERIES
    r = eval_direct(0.5, 0.01)
    assert abs(r.value - brute_theta(0.5, 0.01, 400)) <= 1e-12
    # first order in eps: f - 2 ~ -eps * sum n^2 2^-n = -6 eps
    assert abs(r.value - 2) <= 0.06
    assert (r.value.real - 2) / (-6 * 0.01) == pytest.approx(1, abs=0.15)
    with pytest.raises(InfeasibleCancellation) as info:
        eval_direct(-20, 0.01)
    assert info.value.peak_log_term == pytest.approx(math.log(20) ** 2 / 0.04)


def test_eval_direct_extended_precision_matches_oracle():
    policy = dataclasses.replace(DEFAULT_POLICY, extended_precision=True)
    r = eval_direct(-20, 0.05, THETA, policy)
    n = int(2 * math.log(20) / 0.05) * 3 + 50
    assert abs(r.value - brute_theta(-20, 0.05, n, dps=120)) <= max(1e-12, r.abs_error_estimate)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(-math.pi, math.pi), st.floats(0.05, 1.0))
def test_conjugate_symmetry(r, phi, eps):
    z = cmath.rect(r, phi)
    try:
        a = eval_direct(z, eps).value
        b = eval_direct(z.conjugate(), eps).value
    except InfeasibleCancellation:
        return
    assert abs(a - b.conjugate()) <= 1e-13 * max(1.0, abs(a))


def test_peak_log_term_matches_analytic_peak():
    for z, eps in [(3.0, 0.1), (-5 + 1j, 0.2), (1.5j, 0.05)]:
        r = eval_direct(z, eps)
        analytic = math.log(abs(z)) ** 2 / (4 * eps)
        assert abs(r.peak_log_term - analytic) <= max(1.0, eps)
        assert predicted_peak_log(THETA, eps, z) == pytest.approx(analytic)


def test_tail_bound_soundness():
    rng = np.random.default_rng(3)
    for _ in range(40):
        z = cmath.rect(math.exp(rng.uniform(-1, 1.2)), rng.uniform(-math.pi, math.pi))
        eps = rng.uniform(0.05, 1)
        r = eval_direct(z, eps)
        ref = brute_theta(z, eps, r.terms_or_nodes_used + 200, dps=50)
        assert abs(r.value - ref) <= r.abs_error_estimate


def test_bilateral_examples():
    r = eval_bilateral(1, 1)
    mpmath.mp.dps = 30
    ref = 1 + 2 * float(mpmath.nsum(lambda m: mpmath.exp(-m * m), [1, mpmath.inf]))
    assert abs(r.value - ref) <= 1e-14 and r.value.imag == 0
    a = eval_bilateral(2 + 1j, 0.3).value
    b = eval_bilateral(1 / (2 + 1j), 0.3).value
    assert abs(a - b) <= 1e-10
    half = eval_bilateral(0.5, 0.5).value
    assert half == pytest.approx(eval_direct(0.5, 0.5).value + negative_tail(0.5, 0.5).value, abs=1e-15)


def test_bilateral_symmetry_random():
    rng = np.random.default_rng(11)
    for _ in range(100):
        z = cmath.rect(math.exp(rng.uniform(math.log(0.2), math.log(5))), rng.uniform(-math.pi, math.pi))
        eps = rng.uniform(0.05, 1)
        a, b = eval_bilateral(z, eps), eval_bilateral(1 / z, eps)
        assert abs(a.value - b.value) <= a.abs_error_estimate + b.abs_error_estimate


def test_negative_tail_examples():
    vals = [negative_tail(2, eps).value for eps in (0.1, 0.01, 0.001)]
    errs = [abs(v - 1) for v in vals]
    # the tail approaches 1 like 6 eps
    assert errs == sorted(errs, reverse=True) and errs[-1] < 7e-3
    assert abs(negative_tail(-20, 0.001).value - (-1 / 21)) <= 1e-3
    assert abs(negative_tail(-20, 0.001).value - brute_theta(-1 / 20, 0.001, 10 ** 4, start=1)) <= 1e-14
    assert abs(negative_tail(1j, 0.5).value - brute_theta(-1j, 0.5, 60, start=1)) <= 1e-12


def test_order_probe_examples():
    vals = order_probe(0.1, [1e3, 1e6, 1e9, 1e12])
    assert all(b < a for a, b in zip(vals, vals[1:]))
    # peak-term (Laplace) approximation for large ln r
    r = 1e12
    approx = math.log(math.log(r) ** 2 / 0.4) / math.log(r)
    assert vals[-1] == pytest.approx(approx, abs=0.01)
    assert order_probe(0.5, [1e6])[0] < order_probe(0.1, [1e6])[0]


def test_classical_methods_against_oracle():
    mpmath.mp.dps = 60
    z = -1.5
    for method, gamma in [
        (SummingMethod.LINDELOF, lambda n, e: mpmath.exp(-e * n * mpmath.log(n)) if n > 1 else 1),
        (SummingMethod.MITTAG_LEFFLER, lambda n, e: 1 / mpmath.gamma(1 + e * n)),
        (SummingMethod.GAMMA_RATIO, lambda n, e: mpmath.gamma(1 + (1 - e) * n) / mpmath.gamma(1 + n)),
    ]:
        eps = 0.3
        policy = dataclasses.replace(DEFAULT_POLICY, extended_precision=True)
        r = eval_direct(z, eps, method, policy)
        ref = mpmath.fsum(gamma(n, mpmath.mpf(eps)) * mpmath.mpf(z) ** n for n in range(0, 3000))
        assert abs(r.value - complex(ref)) <= 1e-10


def test_policy_and_result_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(tol=0)
    with pytest.raises(ValueError):
        TruncationPolicy(peak_log_budget=-1)
    with pytest.raises(ValueError):
        EvalResult(1.0, math.nan, Strategy.DIRECT_SERIES, 1, 0.0)
    with pytest.raises(ValueError):
        eval_direct(0.5, 0.0)
