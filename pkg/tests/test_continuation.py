import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thetasum.continuation import (
    QuadratureSpec,
    Sign,
    SpiralSpec,
    admissible_theta_min,
    check_uniform_bound,
    eval_contour_f,
    eval_half_contour,
    in_G_theta,
    select_theta,
    spiral_distance,
    spiral_point,
    uniform_bound,
)
from thetasum.errors import DomainError, MarginTooSmall, NonConvergence, NoValidAngle
from thetasum.geometry import RegionLabel, classify_f
from thetasum.summation import eval_direct

PI = math.pi
PLUS, MINUS = Sign.PLUS, Sign.MINUS
QUAD = QuadratureSpec(tol=1e-10)


def dense_distance(spec, z, samples=1_000_000):
    a = math.tan(spec.theta)
    t_max = math.log(2 * abs(z) + 2) / a
    t = np.linspace(0, t_max, samples)
    pts = np.exp(complex(a, -spec.sign.conj) * t)
    return float(np.min(np.abs(z - pts)))


def test_spec_validation():
    with pytest.raises(DomainError):
        SpiralSpec(PLUS, 0.0)
    with pytest.raises(DomainError):
        SpiralSpec(PLUS, 1.0)
    assert SpiralSpec("-", 0.3).sign is MINUS
    with pytest.raises(ValueError):
        QuadratureSpec(tol=0)


def test_spiral_point_examples():
    assert spiral_point(SpiralSpec(PLUS, 0.4), 0) == 1
    s = spiral_point(SpiralSpec(PLUS, PI / 4), 2.5)
    assert abs(s) == pytest.approx(math.exp(2.5))
    assert cmath.phase(s) == pytest.approx(-2.5)
    for t in (0.3, 4.0, 11.0):
        assert spiral_point(SpiralSpec(MINUS, 0.5), t) == spiral_point(SpiralSpec(PLUS, 0.5), t).conjugate()
    with pytest.raises(DomainError):
        spiral_point(SpiralSpec(PLUS, 0.5), -1)


def test_spiral_distance_examples():
    assert spiral_distance(SpiralSpec(PLUS, PI / 6), 1) == 0
    assert spiral_distance(SpiralSpec(PLUS, 0.3), 0) == pytest.approx(1, rel=1e-6)
    d = spiral_distance(SpiralSpec(PLUS, PI / 4), -20)
    assert 0 < d < 3
    assert d == pytest.approx(dense_distance(SpiralSpec(PLUS, PI / 4), -20), rel=1e-5)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, PI / 4), st.floats(0.05, 25), st.floats(-PI, PI), st.sampled_from([PLUS, MINUS]))
def test_spiral_distance_against_dense_oracle(theta, r, phi, sign):
    spec = SpiralSpec(sign, theta)
    z = cmath.rect(r, phi)
    d = spiral_distance(spec, z)
    oracle = dense_distance(spec, z, 400_000)
    # the oracle samples the curve, so it can only overestimate
    assert d <= oracle * (1 + 1e-6) + 1e-12
    assert d >= oracle - 2e-4 * max(1.0, r)


def test_in_G_theta_examples():
    assert in_G_theta(SpiralSpec(PLUS, 0.5), 0, 0.5)
    on = spiral_point(SpiralSpec(PLUS, 0.5), 2)
    assert not in_G_theta(SpiralSpec(PLUS, 0.5), on, 1e-3)
    # the winding through modulus 20 sits at theta ~ 0.7616; 0.76 is still 0.14 away
    assert spiral_distance(SpiralSpec(PLUS, 0.76), -20) == pytest.approx(0.1417, abs=1e-3)
    assert not in_G_theta(SpiralSpec(PLUS, 0.76), -20, 0.2)
    assert not in_G_theta(SpiralSpec(PLUS, 0.7616), -20, 0.1)
    assert in_G_theta(SpiralSpec(PLUS, 0.775), -20, 0.1)


def test_select_theta_examples():
    plus, minus = select_theta(0, 1.0)
    assert plus.sign is PLUS and minus.sign is MINUS and plus.theta == minus.theta
    assert spiral_distance(plus, 0) >= 1 - 1e-12
    plus, minus = select_theta(-20, 0.05)
    assert 0.7616 < plus.theta < PI / 4
    assert min(spiral_distance(plus, -20), spiral_distance(minus, -20)) >= 0.05
    with pytest.raises(NoValidAngle):
        select_theta(1.2, 1e-6)
    assert classify_f(1.2).label is RegionLabel.OUTSIDE
    with pytest.raises(NoValidAngle):
        select_theta(9 * cmath.exp(2j * PI / 3), 1e-6)


def test_admissible_theta_min():
    assert admissible_theta_min(0.5j) == 0
    assert admissible_theta_min(1.5) == math.inf
    assert admissible_theta_min(-20) == pytest.approx(math.atan(math.log(20) / PI))


def test_half_contour_at_origin():
    for theta in (0.2, PI / 6, PI / 4):
        r = eval_half_contour(0, 0.3, SpiralSpec(PLUS, theta))
        assert r.value == 0.5


def test_half_contour_rotated_gaussian_limit():
    # with a tiny z the remainder vanishes and the value is 1/2 to first order in z
    r = eval_half_contour(1e-12, 0.5, SpiralSpec(PLUS, PI / 6), QUAD)
    assert abs(r.value - 0.5) < 1e-11


def test_half_contour_angle_independence_example():
    a = eval_half_contour(0.5, 0.25, SpiralSpec(PLUS, PI / 6), QUAD)
    b = eval_half_contour(0.5, 0.25, SpiralSpec(PLUS, PI / 12), QUAD)
    assert abs(a.value - b.value) <= 2 * QUAD.tol


def test_decomposition_example():
    z = 0.3 + 0.2j
    s = (eval_half_contour(z, 0.5, SpiralSpec(PLUS, PI / 6), QUAD).value
         + eval_half_contour(z, 0.5, SpiralSpec(MINUS, PI / 6), QUAD).value)
    assert abs(s - eval_direct(z, 0.5).value) <= 1e-8


def test_decomposition_random_disc():
    rng = np.random.default_rng(2)
    for eps in (0.1, 0.5):
        for _ in range(15):
            z = cmath.rect(0.9 * math.sqrt(rng.uniform()), rng.uniform(-PI, PI))
            theta = rng.uniform(0.05, PI / 4 - 0.05)
            r = eval_contour_f(z, eps, QUAD, theta=theta)
            assert abs(r.value - eval_direct(z, eps).value) <= 1e-8


def test_error_estimate_covers_refinement():
    # halving tol changes results by less than the reported error estimate
    for z, eps in [(0.5, 0.25), (-2, 0.05), (0.7j, 0.01)]:
        spec = SpiralSpec(PLUS, 0.6)
        coarse = eval_half_contour(z, eps, spec, QuadratureSpec(tol=1e-8))
        fine = eval_half_contour(z, eps, spec, QuadratureSpec(tol=5e-9))
        assert abs(coarse.value - fine.value) <= coarse.abs_error_estimate


def test_convergence_to_half_geometric():
    for z in (0.5, 0.7j, -2):
        plus, _ = select_theta(z, 1e-3)
        target = 1 / (2 * (1 - z))
        vals = [eval_half_contour(z, eps, plus, QUAD).value for eps in (1e-1, 1e-2, 1e-3)]
        errs = [abs(v - target) for v in vals]
        assert errs[0] > errs[1] > errs[2]
        # a single half deviates at first order by i z sqrt(eps) / (sqrt(pi) (1 - z)^2);
        # the two halves cancel it.  At z = 0.5 that is 0.036 at eps = 1e-3.
        lead = 1j * z * math.sqrt(1e-3) / (math.sqrt(PI) * (1 - z) ** 2)
        assert abs(vals[2] - target - lead) <= 0.1 * abs(lead)
        if z != 0.5:
            assert errs[2] <= 1e-2


def test_uniform_bound_examples():
    spec = SpiralSpec(PLUS, PI / 6)
    # 1 + |z|/dist is 1 at the origin
    assert uniform_bound(0, spec) == pytest.approx(1 / math.sqrt(math.cos(PI / 3)))
    assert check_uniform_bound(0, spec, 0.5)
    for eps in (1, 0.3, 0.1, 0.03, 0.01, 0.003):
        v = eval_half_contour(0.9, eps, spec, QUAD).value
        assert check_uniform_bound(0.9, spec, v)
    assert uniform_bound(0.5, SpiralSpec(PLUS, PI / 4)) == math.inf
    assert check_uniform_bound(0.5, SpiralSpec(PLUS, PI / 4), 1e300)


def test_margin_and_panel_errors():
    spec = SpiralSpec(PLUS, 0.5)
    with pytest.raises(MarginTooSmall):
        eval_half_contour(spiral_point(spec, 3.0), 0.1, spec)
    with pytest.raises(NonConvergence):
        eval_half_contour(-3 + 0.5j, 0.01, SpiralSpec(PLUS, 0.7), QuadratureSpec(tol=1e-14, max_panels=2))


def test_minus_half_is_conjugate_mirror():
    z, eps = 0.4 - 0.6j, 0.2
    a = eval_half_contour(z, eps, SpiralSpec(MINUS, 0.5), QUAD).value
    b = eval_half_contour(z.conjugate(), eps, SpiralSpec(PLUS, 0.5), QUAD).value
    assert a == b.conjugate()
