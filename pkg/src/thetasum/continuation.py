"""
Analytic continuation of the theta-regularized series by ray rotation.

For ``|z| < 1`` the Gaussian Fourier representation

    exp(-eps n^2) = 1/(2 sqrt(pi)) * int_R exp(-xi^2/4) exp(i sqrt(eps) n xi) dxi

turns ``f_eps(z)`` into an integral over the real line.  Splitting it at the
origin and rotating each half-line by ``theta`` gives

    f_plus(z) = e^{i theta}/(2 sqrt(pi)) int_0^inf
                exp(-xi^2 e^{2 i theta}/4) / (1 - z exp(i sqrt(eps) xi e^{i theta})) dxi

and ``f_minus(z) = conj(f_plus(conj z))``.  The denominator vanishes only on
the logarithmic spiral ``exp((tan(theta) - i) t)``, ``t >= 0`` (its mirror
for the minus half), so each half is analytic off one spiral and the pair
continues ``f_eps`` into the component of the origin.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec
from scipy.optimize import minimize_scalar
from scipy.special import erfc, erfcinv

from .errors import DomainError, MarginTooSmall, NoValidAngle, NonConvergence
from .summation import EvalResult, Strategy

__all__ = [
    "Sign",
    "SpiralSpec",
    "QuadratureSpec",
    "spiral_point",
    "spiral_distance",
    "in_G_theta",
    "admissible_theta_min",
    "select_theta",
    "uniform_bound",
    "check_uniform_bound",
    "eval_half_contour",
    "eval_contour_f",
]

PI = math.pi
QUARTER_PI = PI / 4
THETA_SEARCH_PAD = 0.01
GOLDEN_ITERATIONS = 40
MIN_CONTOUR_MARGIN = 1e-6
_SNAP_REL = 1e-10  # distances below this (relative to max(1, |z|)) are "on the curve"
_GRID_DT = 0.01
_MACHINE_EPS = float(np.finfo(float).eps)
_INV_2_SQRT_PI = 0.5 / math.sqrt(PI)


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def conj(self) -> int:
        # +1 selects exp((tan - i) t), -1 its conjugate
        return 1 if self is Sign.PLUS else -1


@dataclass(frozen=True)
class SpiralSpec:
    """Rotation angle and half-line sign; fixes the spiral cut.

    ``theta`` lies in (0, pi/4].  ``sign`` accepts ``"+"``/``"-"`` or a
    :class:`Sign`.
    """

    sign: Sign
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "sign", Sign(self.sign))
        theta = float(self.theta)
        if not (0.0 < theta <= QUARTER_PI + 1e-15):
            raise DomainError(f"theta must lie in (0, pi/4], got {theta!r}")
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings for the half-line quadrature.

    ``cutoff=None`` picks the upper limit so that the certified tail bound
    is below ``tol / 4``.
    """

    tol: float = 1e-10
    cutoff: float | None = None
    max_panels: int = 1 << 14

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.cutoff is not None and not self.cutoff > 0:
            raise ValueError("cutoff must be positive")
        if self.max_panels < 1:
            raise ValueError("max_panels must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


def spiral_point(spec: SpiralSpec, t: float) -> complex:
    """``exp((tan(theta) - i) t)`` for the plus sign, its conjugate for minus."""
    if t < 0:
        raise DomainError("spiral parameter must be non-negative")
    a = math.tan(spec.theta)
    return cmath.exp(complex(a, -spec.sign.conj) * t)


def _nearest(spec: SpiralSpec, z: complex):
    """Return ``(distance, t)`` of the spiral point closest to ``z``."""
    a = math.tan(spec.theta)
    w = complex(a, -spec.sign.conj)
    best_d, best_t = abs(z - 1.0), 0.0
    # beyond this the spiral modulus exceeds |z| + |z - 1|
    t_max = math.log(2 * abs(z) + 2) / a
    n = int(math.ceil(t_max / _GRID_DT)) + 1
    t = np.linspace(0.0, t_max, n)
    dt = t[1] - t[0] if n > 1 else t_max
    d = np.abs(z - np.exp(w * t))
    i_min = int(np.argmin(d))
    if d[i_min] < best_d:
        best_d, best_t = float(d[i_min]), float(t[i_min])

    # a grid minimum can sit above the true one by at most speed * dt
    speed = np.exp(a * t) * math.hypot(1.0, a)
    interior = np.flatnonzero((d[1:-1] <= d[:-2]) & (d[1:-1] <= d[2:])) + 1
    cand = interior[d[interior] - speed[interior] * dt <= best_d]

    def dist(s):
        return abs(z - cmath.exp(w * s))

    for i in cand:
        res = minimize_scalar(dist, bounds=(t[i - 1], t[i + 1]), method="bounded",
                              options={"xatol": 1e-13 * max(1.0, t[i])})
        if res.fun < best_d:
            best_d, best_t = float(res.fun), float(res.x)
    if best_d <= _SNAP_REL * max(1.0, abs(z)):
        best_d = 0.0
    return best_d, best_t


def spiral_distance(spec: SpiralSpec, z) -> float:
    """Euclidean distance from ``z`` to the spiral of ``spec``.

    A uniform grid in ``t`` locates one candidate per winding; candidates that
    could beat the best grid value are polished with a bounded Brent search.
    """
    return _nearest(spec, complex(z))[0]


def in_G_theta(spec: SpiralSpec, z, margin: float = 0.0) -> bool:
    """True iff ``z`` is farther than ``margin`` from the spiral."""
    return spiral_distance(spec, z) > margin


def admissible_theta_min(z) -> float:
    """Smallest angle whose two spirals leave ``z`` in the origin component.

    Along the ray through ``z`` the first crossing of either spiral has
    modulus ``exp(tan(theta) |arg z|)``; ``z`` is reachable from the origin
    without crossing a cut iff ``|z|`` is below it.  Returns ``0.0`` for
    ``|z| <= 1`` (except ``z = 1``) and ``inf`` when no angle works.
    """
    z = complex(z)
    r = abs(z)
    if z == 0:
        return 0.0
    phi = abs(cmath.phase(z))
    if r <= 1.0 and not (phi == 0.0 and r == 1.0):
        return 0.0
    if phi == 0.0:
        return math.inf
    return math.atan(math.log(r) / phi)


def select_theta(z, min_margin: float = 1e-3):
    """Pick a rotation angle for both halves of the contour evaluation.

    Maximizes ``min(dist_plus, dist_minus)`` by golden-section search over the
    admissible part of ``[0.01, pi/4 - 0.01]``.

    Returns
    -------
    (SpiralSpec, SpiralSpec)
        Plus and minus specs sharing the chosen angle.

    Raises
    ------
    NoValidAngle
        If ``z`` is outside the heart-shaped domain or no admissible angle
        clears ``min_margin``.
    """
    z = complex(z)
    lo = max(THETA_SEARCH_PAD, admissible_theta_min(z))
    hi = QUARTER_PI - THETA_SEARCH_PAD
    if not lo < hi:
        raise NoValidAngle(f"no rotation angle reaches z = {z}")

    def margin(theta):
        return min(spiral_distance(SpiralSpec(Sign.PLUS, theta), z),
                   spiral_distance(SpiralSpec(Sign.MINUS, theta), z))

    inv_phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = margin(c), margin(d)
    for _ in range(GOLDEN_ITERATIONS):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = margin(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = margin(d)
    best_theta, best = (c, fc) if fc >= fd else (d, fd)
    f_hi = margin(hi)
    if f_hi > best:
        best_theta, best = hi, f_hi
    if not best >= min_margin:
        raise NoValidAngle(
            f"best spiral margin {best:.3g} at theta = {best_theta:.6g} "
            f"is below {min_margin:.3g} for z = {z}")
    return SpiralSpec(Sign.PLUS, best_theta), SpiralSpec(Sign.MINUS, best_theta)


def uniform_bound(z, spec: SpiralSpec) -> float:
    """``sqrt(1/cos(2 theta)) * (1 + |z| / dist(z, spiral))``; ``inf`` on the cut."""
    z = complex(z)
    c2 = math.cos(2 * spec.theta)
    d = spiral_distance(spec, z)
    if c2 <= 1e-15 or d == 0:  # theta = pi/4 leaves cos(2 theta) at one ulp, not zero
        return math.inf
    return math.sqrt(1.0 / c2) * (1.0 + abs(z) / d)


def check_uniform_bound(z, spec: SpiralSpec, value) -> bool:
    """True iff ``|value|`` respects :func:`uniform_bound` at ``z``."""
    return abs(complex(value)) <= uniform_bound(z, spec)


def _tail_bound(xi: float, z_abs: float, ratio: float, c2: float, a: float) -> float:
    # bound on int_xi^inf |integrand of the remainder|; ratio = |z| / dist
    bounds = []
    if c2 > 1e-15:
        bounds.append(ratio * _INV_2_SQRT_PI * math.sqrt(PI / c2)
                      * float(erfc(xi * math.sqrt(c2) / 2)))
    if a > 0 and z_abs * math.exp(-a * xi) <= 0.5:
        # |q/(1-q)| <= 2|z| exp(-a xi) once |q| <= 1/2
        bounds.append(2 * z_abs * _INV_2_SQRT_PI * math.exp(-a * xi) / a)
    return min(bounds) if bounds else math.inf


def _auto_cutoff(target: float, z_abs: float, ratio: float, c2: float, a: float) -> float:
    choices = []
    if c2 > 1e-15:
        y = target / (ratio * _INV_2_SQRT_PI * math.sqrt(PI / c2))
        choices.append(0.0 if y >= 1 else 2 / math.sqrt(c2) * float(erfcinv(y)))
    if a > 0:
        choices.append(max(math.log(2 * z_abs) / a,
                           math.log(2 * z_abs * _INV_2_SQRT_PI / (a * target)) / a))
    return max(1.0, min(choices))


def eval_half_contour(z, eps: float, spec: SpiralSpec,
                      quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EvalResult:
    """One rotated half of the contour representation of ``f_eps(z)``.

    The integrand is written as ``1 + q/(1 - q)`` with
    ``q = z exp(i sqrt(eps) xi e^{i theta})``; the constant part integrates
    to exactly 1/2 and the remainder is integrated adaptively (Gauss-Kronrod
    panels with bisection) on ``[0, cutoff]``.  The reported error is the
    quadrature estimate plus a certified tail bound and a rounding term.

    Raises
    ------
    MarginTooSmall
        If ``z`` is within ``1e-6`` of the spiral.
    NonConvergence
        If the panel budget is exhausted.
    """
    z = complex(z)
    eps = float(eps)
    if not eps > 0:
        raise DomainError("eps must be positive")
    if spec.sign is Sign.MINUS:
        r = eval_half_contour(z.conjugate(), eps, SpiralSpec(Sign.PLUS, spec.theta), quad)
        return EvalResult(r.value.conjugate(), r.abs_error_estimate, r.strategy,
                          r.terms_or_nodes_used, r.peak_log_term)
    dist, t_star = _nearest(spec, z)
    if dist < MIN_CONTOUR_MARGIN:
        raise MarginTooSmall(f"z = {z} is {dist:.3g} from the spiral at theta = {spec.theta}")
    if z == 0:
        return EvalResult(0.5, 0.0, Strategy.CONTOUR, 0, math.log(_INV_2_SQRT_PI))

    theta = spec.theta
    z_abs = abs(z)
    ratio = z_abs / dist
    c2 = math.cos(2 * theta)
    root = math.sqrt(eps)
    a = root * math.sin(theta)
    rot = cmath.exp(1j * theta)
    rot2 = rot * rot
    k = 1j * root * rot
    pref = rot * _INV_2_SQRT_PI

    def g(xi):
        q = z * cmath.exp(k * xi)
        return pref * cmath.exp(-xi * xi * rot2 / 4) * (q / (1 - q))

    xi_max = quad.cutoff if quad.cutoff is not None else _auto_cutoff(quad.tol / 4, z_abs, ratio, c2, a)
    tail = _tail_bound(xi_max, z_abs, ratio, c2, a)
    if not math.isfinite(tail):
        raise NonConvergence(f"no certified tail bound at cutoff {xi_max:.6g}")
    # the closest approach of the denominator to zero, in the xi variable
    xi_star = t_star / (root * math.cos(theta))
    points = [xi_star] if 0 < xi_star < xi_max else None
    with np.errstate(all="ignore"):
        val, err, info = quad_vec(g, 0.0, xi_max, epsabs=quad.tol / 2, epsrel=0.0,
                                  limit=quad.max_panels, points=points, full_output=True)
    if info.status == 1:
        raise NonConvergence(
            f"quadrature used {quad.max_panels} panels without reaching tol {quad.tol:.3g}")
    val = complex(val)
    value = 0.5 + val
    n_panels = len(info.intervals)
    rounding = 4 * _MACHINE_EPS * (0.5 + abs(val) + n_panels * ratio * _INV_2_SQRT_PI)
    total_err = float(err) + tail + rounding
    return EvalResult(value, total_err, Strategy.CONTOUR, int(info.neval),
                      math.log((1 + ratio) * _INV_2_SQRT_PI))


def eval_contour_f(z, eps: float, quad: QuadratureSpec = DEFAULT_QUADRATURE,
                   min_margin: float = 1e-3, theta: float | None = None) -> EvalResult:
    """``f_eps(z)`` as the sum of the two rotated halves.

    The angle comes from :func:`select_theta` unless ``theta`` is given.
    """
    z = complex(z)
    if theta is None:
        plus, minus = select_theta(z, min_margin)
    else:
        if not admissible_theta_min(z) < theta:
            raise NoValidAngle(f"theta = {theta} does not reach z = {z}")
        plus, minus = SpiralSpec(Sign.PLUS, theta), SpiralSpec(Sign.MINUS, theta)
    p = eval_half_contour(z, eps, plus, quad)
    m = eval_half_contour(z, eps, minus, quad)
    return EvalResult(p.value + m.value,
                      p.abs_error_estimate + m.abs_error_estimate
                      + _MACHINE_EPS * abs(p.value + m.value),
                      Strategy.CONTOUR,
                      p.terms_or_nodes_used + m.terms_or_nodes_used,
                      max(p.peak_log_term, m.peak_log_term))
