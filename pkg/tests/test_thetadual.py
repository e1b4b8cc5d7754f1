import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thetasum.errors import DomainError, EmptyZ1
from thetasum.numerics import PI_EXT
from thetasum.summation import eval_bilateral, negative_tail
from thetasum.thetadual import (
    dual_coordinate,
    eval_dual_f,
    eval_H,
    eval_H_log,
    eval_H_with_error,
    growth_envelope,
    h2_bound,
    index_split,
    log_abs_f_grid,
    re_shift_square,
)

PI = math.pi


def brute_H(zeta, eps, indices, dps=50):
    mpmath.mp.dps = dps
    zz = mpmath.mpc(zeta.real, zeta.imag)
    e = mpmath.mpf(eps)
    s = mpmath.fsum(mpmath.exp(-(zz - n * mpmath.pi) ** 2 / e) for n in indices)
    return complex(mpmath.sqrt(mpmath.pi / e) * s)


def test_dual_coordinate_examples():
    assert dual_coordinate(1).zeta == 0
    assert dual_coordinate(1j).zeta == pytest.approx(PI / 4, abs=1e-16)
    assert dual_coordinate(1.2).zeta == pytest.approx(-1j * math.log(1.2) / 2, abs=1e-16)
    with pytest.raises(DomainError):
        dual_coordinate(0)


@settings(max_examples=200)
@given(st.floats(1e-3, 1e3), st.floats(-math.pi, math.pi))
def test_dual_coordinate_range(r, phi):
    z = cmath.rect(r, phi)
    if z == 0:
        return
    zeta = dual_coordinate(z).zeta
    assert -PI / 2 < zeta.real <= PI / 2
    assert zeta.imag == pytest.approx(-math.log(abs(z)) / 2, abs=1e-14)
    assert abs(cmath.exp(2j * zeta) - z) <= 1e-13 * abs(z)


def test_eval_H_examples():
    for eps in (2.0, 1.0, 0.5):
        v = eval_H(0, eps)
        assert v.imag == 0 and v.real > math.sqrt(PI / eps)
    # below eps ~ 0.3 the other terms are under one ulp of the n = 0 term
    for eps in (0.2, 0.01):
        assert eval_H(0, eps).real >= math.sqrt(PI / eps)
    w = eval_H(dual_coordinate(0.3 + 0.4j), 0.5)
    assert abs(w - eval_bilateral(0.3 + 0.4j, 0.5).value) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(st.floats(-3, 3), st.floats(-2, 2), st.floats(0.05, 2))
def test_H_periodic_and_even(x, y, eps):
    zeta = complex(x, y)
    v, err, _ = eval_H_with_error(zeta, eps)
    scale = max(1.0, abs(v))
    # shift in extended precision so the input itself is not perturbed
    shifted = np.clongdouble(zeta) + PI_EXT
    assert abs(eval_H(shifted, eps) - v) <= 2 * err + 1e-14 * scale
    assert abs(eval_H(-zeta, eps) - v) <= 2 * err + 1e-14 * scale


def test_H_against_brute_force_and_error_estimate():
    rng = np.random.default_rng(5)
    for _ in range(30):
        zeta = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        eps = rng.uniform(0.05, 1)
        v, err, _ = eval_H_with_error(zeta, eps)
        ref = brute_H(zeta, eps, range(-30, 31))
        assert abs(v - ref) <= err + 1e-15 * abs(ref)


def test_H_log_form_survives_overflow():
    # dual of z = 30 at tiny eps: |H| is far beyond the double range
    zeta = dual_coordinate(30).zeta
    lm = eval_H_log(zeta, 1e-4)
    assert lm.log_abs == pytest.approx(math.log(30) ** 2 / 4e-4 + 0.5 * math.log(PI / 1e-4), rel=1e-10)
    with pytest.raises(OverflowError):
        eval_H(zeta, 1e-4)


def test_index_split_examples():
    d = index_split(0)
    assert d.z1 == (0,) and d.lambdas == ((0j, 1),) and d.mu == 0
    assert index_split(PI / 2).z1 == ()
    zeta = complex(PI / 2, PI / 2)
    d = index_split(zeta)
    assert d.z1 == (0, 1)
    assert len(d.lambdas) == 2 and all(m == 1 for _, m in d.lambdas)
    expected = {-(zeta ** 2), -((zeta - PI) ** 2)}
    for lam, _ in d.lambdas:
        assert min(abs(lam - e) for e in expected) < 1e-14
        assert abs(lam.real) < 1e-14
    assert d.mu == pytest.approx(0, abs=1e-14)


@settings(max_examples=200)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_index_split_invariants(x, y):
    zeta = complex(x, y)
    d = index_split(zeta)
    # brute-force Z1 over a generous range
    ns = np.arange(-60, 61)
    brute = tuple(int(n) for n in ns[re_shift_square(zeta, ns) <= 0])
    assert d.z1 == brute
    assert sum(m for _, m in d.lambdas) == len(d.z1)
    assert all(m <= 2 for _, m in d.lambdas)
    if d.z1:
        assert all(l.real >= -1e-12 for l, _ in d.lambdas)
    z2 = ns[re_shift_square(zeta, ns) > 0]
    assert np.all(re_shift_square(zeta, z2) >= d.c_zeta * (z2.astype(float) ** 2 + 1) - 1e-12)
    assert 0 < d.c_zeta <= PI ** 2 / 8


@settings(max_examples=200)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_far_indices_satisfy_quadratic_lower_bound(x, y):
    zeta = complex(x, y)
    n0 = 4 * abs(zeta) / PI
    ns = np.arange(math.floor(n0) + 1, math.floor(n0) + 101)
    for n in (ns, -ns):
        assert np.all(re_shift_square(zeta, n) >= (n * PI) ** 2 / 2)


def test_h2_bound_examples_and_soundness():
    class _D:
        c_zeta = 1.0
    assert h2_bound(_D, 0.1) == pytest.approx(math.sqrt(10 * PI) * math.exp(-10) + PI * math.exp(-10))
    rng = np.random.default_rng(9)
    for _ in range(50):
        zeta = complex(rng.uniform(-3, 3), rng.uniform(-2, 2))
        d = index_split(zeta)
        z2 = [n for n in range(-80, 81) if n not in d.z1]
        for eps in (0.5, 0.1, 0.02):
            assert abs(brute_H(zeta, eps, z2)) <= h2_bound(d, eps) * (1 + 1e-12)


def test_h2_bound_monotone_in_inverse_eps():
    d = index_split(complex(0.7, 0.3))
    eps = [d.c_zeta * 0.9 / 2 ** k for k in range(8)]
    vals = [h2_bound(d, e) for e in eps]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_growth_envelope_examples():
    d = index_split(dual_coordinate(1.2).zeta)
    assert len(d.lambdas) == 1
    lam = d.lambdas[0][0]
    assert lam.real == pytest.approx(math.log(1.2) ** 2 / 4, rel=1e-14)
    for eps in (0.1, 0.01, 1e-3):
        env = growth_envelope(d, eps)
        assert env == pytest.approx(math.sqrt(PI / eps) * math.exp(math.log(1.2) ** 2 / (4 * eps)), rel=1e-12)
        # H = H1 + H2 with |H2| bounded
        h = eval_H(dual_coordinate(1.2), eps)
        assert abs(abs(h) - env) <= h2_bound(d, eps) + 1e-14 * env
    assert growth_envelope(index_split(0), 0.3) == pytest.approx(math.sqrt(PI / 0.3))
    d = index_split(complex(PI / 2, PI / 2))
    samples = [growth_envelope(d, 2.0 ** -k) for k in range(1, 21)]
    assert max(samples) > 0
    with pytest.raises(EmptyZ1):
        growth_envelope(index_split(PI / 2), 0.1)


def test_split_consistency():
    rng = np.random.default_rng(21)
    for _ in range(20):
        zeta = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        eps = rng.uniform(0.1, 1)
        d = index_split(zeta)
        z2 = [n for n in range(-60, 61) if n not in d.z1]
        h1 = brute_H(zeta, eps, d.z1)
        h2 = brute_H(zeta, eps, z2)
        v, err, _ = eval_H_with_error(zeta, eps)
        assert abs(v - (h1 + h2)) <= err + 1e-15 * abs(v)


def test_divergence_criterion():
    schedule = [2.0 ** -k for k in range(1, 21)]
    rng = np.random.default_rng(4)
    for _ in range(15):
        zeta = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        d = index_split(zeta)
        logs = [eval_H_log(zeta, e).log_abs for e in schedule]
        if d.z1:
            assert max(logs) > math.log(1e3)
        else:
            assert logs[-1] < math.log(1e-3) and logs[-1] < logs[0]


def test_eval_dual_f_examples():
    r = eval_dual_f(-20, 1e-3)
    assert abs(r.value - 1 / 21) <= 1e-2
    assert index_split(dual_coordinate(-20).zeta).z1 == ()
    r = eval_dual_f(1.2, 1e-3)
    env = math.sqrt(PI / 1e-3) * math.exp(math.log(1.2) ** 2 / 4e-3)
    assert abs(abs(r.value) / env - 1) <= 0.02
    a = eval_dual_f(2 + 2j, 0.3).value
    b = eval_bilateral(2 + 2j, 0.3).value - negative_tail(2 + 2j, 0.3).value
    assert abs(a - b) <= 1e-10
    with pytest.raises(DomainError):
        eval_dual_f(0.5, 0.1)


def test_envelope_sharpness_trend():
    d = index_split(dual_coordinate(1.2).zeta)
    ratios = [abs(eval_dual_f(1.2, e).value) / growth_envelope(d, e) for e in (0.1, 0.01, 1e-3)]
    assert abs(ratios[-1] - 1) <= 0.02


def test_log_abs_f_grid_matches_pointwise():
    zs = np.array([0.5, 0.9j, -20, 1.2, -2 + 3j, 3 * cmath.exp(2j * PI / 3)])
    for eps in (0.5, 0.05, 0.005):
        grid = log_abs_f_grid(zs, eps)
        for z, g in zip(zs, grid):
            from thetasum.engine import evaluate
            assert g == pytest.approx(math.log(abs(evaluate(z, eps).value)), abs=1e-8)
