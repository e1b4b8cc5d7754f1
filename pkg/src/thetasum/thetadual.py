"""
The Poisson dual of the bilateral theta series.

Poisson summation turns

    h_eps(z) = sum_{n in Z} exp(-eps n^2) z^n

into a Gaussian periodization in the variable ``zeta = ln(z) / 2i``:

    h_eps(z) = H_eps(zeta),
    H_eps(zeta) = sqrt(pi/eps) * sum_{n in Z} exp(-(zeta - n pi)^2 / eps).

Every term of ``H_eps`` is a single exponential, so it can be evaluated at
any ``eps > 0`` without cancellation.  Subtracting the negative-index tail
of ``h_eps`` gives a stable evaluator for ``f_eps(z)`` at ``|z| > 1``.

Indices with ``Re (zeta - n pi)^2 <= 0`` (the set ``Z1``) carry terms that
do not decay as ``eps -> 0``; they decide divergence.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyZ1
from .numerics import PI_EXT, LogMagnitude, compensated_sum, principal_log, principal_log_ext
from .summation import (
    DEFAULT_POLICY,
    EvalResult,
    Strategy,
    TruncationPolicy,
    negative_tail,
)

__all__ = [
    "DualPoint",
    "DualDecomposition",
    "dual_coordinate",
    "eval_H",
    "eval_H_log",
    "eval_H_with_error",
    "index_split",
    "h2_bound",
    "growth_envelope",
    "log_growth_envelope",
    "eval_dual_f",
    "re_shift_square",
    "log_abs_f_grid",
]

PI = math.pi
_LD_EPS = float(np.finfo(np.longdouble).eps)
LAMBDA_DEDUP_TOL = 1e-12
_MACHINE_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class DualPoint:
    """``zeta = ln(z) / 2i`` for a source point ``z``.

    ``zeta_ext`` is the same number formed in extended precision; the H
    evaluators use it when given a :class:`DualPoint`.
    """

    zeta: complex
    source_z: complex
    zeta_ext: np.clongdouble = None


@dataclass(frozen=True)
class DualDecomposition:
    """Split of the lattice for one dual point.

    ``z1`` are the indices with ``Re (zeta - n pi)^2 <= 0``; all indices with
    ``|n| > z2_window`` lie in ``Z2``.  ``lambdas`` pairs each distinct
    ``-(zeta - n pi)^2`` over ``z1`` with its multiplicity (1 or 2) and
    ``mu`` is the largest real part among them (``-inf`` when ``z1`` is
    empty).  ``c_zeta`` satisfies ``Re (zeta - n pi)^2 >= c_zeta (n^2 + 1)``
    on all of ``Z2``.
    """

    zeta: complex
    z1: tuple
    z2_window: int
    lambdas: tuple
    mu: float
    c_zeta: float


def dual_coordinate(z) -> DualPoint:
    """``zeta = principal_log(z) / 2i``.

    ``Re zeta = arg(z)/2`` lies in (-pi/2, pi/2] and ``Im zeta = -ln|z|/2``.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("dual coordinate undefined at z = 0")
    w = principal_log(z)
    w_ext = principal_log_ext(z)
    zeta_ext = (w_ext.imag - 1j * w_ext.real) / 2
    return DualPoint(complex(w.imag / 2.0, -w.real / 2.0), z, zeta_ext)


def re_shift_square(zeta: complex, n) -> np.ndarray:
    """``Re (zeta - n pi)^2`` computed as ``(xi - n pi)^2 - eta^2``."""
    d = zeta.real - np.asarray(n, dtype=float) * PI
    return d * d - zeta.imag * zeta.imag


@dataclass(frozen=True)
class _HSum:
    log_value: LogMagnitude
    log_error: float
    terms: int
    value: complex | None  # None when outside the double range


def _as_zeta(zeta):
    if isinstance(zeta, DualPoint):
        return zeta.zeta, (zeta.zeta_ext if zeta.zeta_ext is not None
                           else np.clongdouble(zeta.zeta))
    if isinstance(zeta, np.clongdouble):
        return complex(zeta), zeta
    return complex(zeta), np.clongdouble(complex(zeta))


def _sum_H(zeta, eps: float, tol: float) -> _HSum:
    """Sum ``H_eps(zeta)`` in the log domain with a certified tail.

    Indices grow outward from the lattice point nearest ``Re zeta``.  A side
    stops once it is past ``4|zeta|/pi`` and its next term falls below
    ``tol`` relative to the pre-factor; past the vertex of the Gaussian the
    term ratio is at most ``exp(-pi^2/eps)`` and shrinking, so the remainder
    is bounded by a geometric series.  Exponents are formed in extended
    precision.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    zeta, zeta_ext = _as_zeta(zeta)
    xi = zeta.real
    n_window = int(math.ceil(4 * abs(zeta) / PI))
    n0 = int(round(xi / PI))
    log_pref = 0.5 * math.log(PI / eps)
    log_tol = math.log(tol)

    def side(step):
        idx = []
        n = n0 if step > 0 else n0 - 1
        while True:
            e_re = -float(re_shift_square(zeta, n)) / eps + log_pref
            past_vertex = (n - xi / PI) * step > 0
            if past_vertex and abs(n) > n_window and e_re < log_tol:
                e_next = -float(re_shift_square(zeta, n + step)) / eps + log_pref
                log_ratio = e_next - e_re
                tail = e_next - math.log(-math.expm1(log_ratio))
                return idx, tail
            idx.append(n)
            n += step

    up, tail_up = side(+1)
    down, tail_down = side(-1)
    n = np.array(down[::-1] + up, dtype=np.longdouble)
    d = zeta_ext - n * PI_EXT
    ex = -(d * d) / np.longdouble(eps)
    m_ext = ex.real.max()
    s_ext = np.sum(np.exp(ex - m_ext))
    s = complex(s_ext)
    m = float(m_ext)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.sqrt(PI_EXT / np.longdouble(eps)) * np.exp(m_ext) * s_ext
        direct = complex(direct)
    if not (math.isfinite(direct.real) and math.isfinite(direct.imag)):
        direct = None
    if s == 0:  # pragma: no cover - needs exact cancellation
        log_val = LogMagnitude(-math.inf, 0.0)
    else:
        log_val = LogMagnitude(log_pref + m + math.log(abs(s)), cmath.phase(s))
    # exponent rounding ~ |zeta - n pi|^2/eps * eps_ld per term, then the
    # final rounding of the scaled sum to double
    mags = np.exp((ex.real - np.longdouble(m)).astype(float))
    arg_err = (np.abs(d.astype(complex)) ** 2 / eps + 2.0 + n.size) * 4 * _LD_EPS
    log_round = log_pref + m + math.log(math.fsum(mags * arg_err) + 2 * _MACHINE_EPS * abs(s))
    log_err = np.logaddexp.reduce([tail_up, tail_down, log_round])
    return _HSum(log_val, float(log_err), int(n.size), direct)


def eval_H_log(zeta, eps: float, tol: float = 1e-16) -> LogMagnitude:
    """``H_eps(zeta)`` in log form; never overflows."""
    return _sum_H(zeta, float(eps), tol).log_value


def eval_H_with_error(zeta, eps: float, tol: float = 1e-16):
    """``(H_eps(zeta), absolute error bound, terms used)``.

    Raises ``OverflowError`` when the value is beyond the float range.
    """
    r = _sum_H(zeta, float(eps), tol)
    if r.value is None:
        raise OverflowError(f"|H| = exp({r.log_value.log_abs:.6g}) overflows a double")
    return r.value, math.exp(r.log_error), r.terms


def eval_H(zeta, eps: float, tol: float = 1e-16) -> complex:
    """``H_eps(zeta) = sqrt(pi/eps) sum_n exp(-(zeta - n pi)^2 / eps)``.

    Periodic with period ``pi`` and even in ``zeta``.
    """
    return eval_H_with_error(zeta, eps, tol)[0]


def index_split(zeta) -> DualDecomposition:
    """Partition the lattice into ``Z1`` (non-decaying) and ``Z2`` for ``zeta``.

    Only ``|n| <= ceil(4|zeta|/pi)`` can fall in ``Z1``.  ``c_zeta`` is the
    exact minimum of ``Re (zeta - n pi)^2 / (n^2 + 1)`` over the scanned
    ``Z2`` indices, capped by ``pi^2/8`` which holds for every index beyond
    the window.
    """
    zeta = complex(zeta)
    window = int(math.ceil(4 * abs(zeta) / PI))
    ns = np.arange(-window, window + 1)
    re_sq = re_shift_square(zeta, ns)
    in_z1 = re_sq <= 0
    z1 = tuple(int(n) for n in ns[in_z1])

    lambdas = []
    for n in z1:
        d = zeta - n * PI
        lam = -(d * d)
        for k, (other, mult) in enumerate(lambdas):
            if abs(lam - other) <= LAMBDA_DEDUP_TOL:
                lambdas[k] = (other, mult + 1)
                break
        else:
            lambdas.append((lam, 1))
    if any(mult > 2 for _, mult in lambdas):
        raise AssertionError("a value -(zeta - n pi)^2 repeated more than twice")
    mu = max((lam.real for lam, _ in lambdas), default=-math.inf)

    z2_ns = ns[~in_z1]
    c = PI * PI / 8
    if z2_ns.size:
        c = min(c, float(np.min(re_sq[~in_z1] / (z2_ns.astype(float) ** 2 + 1))))
    return DualDecomposition(zeta, z1, window, tuple(lambdas), mu, c)


def h2_bound(decomp: DualDecomposition, eps: float) -> float:
    """Bound on ``|H2_eps(zeta)|``, the ``Z2`` part of ``H_eps``.

    ``sqrt(pi/eps) exp(-c/eps) + (pi / sqrt(c)) exp(-c/eps)``.
    """
    c = decomp.c_zeta
    decay = math.exp(-c / eps)
    return math.sqrt(PI / eps) * decay + PI / math.sqrt(c) * decay


def log_growth_envelope(decomp: DualDecomposition, eps: float) -> float:
    """Natural log of :func:`growth_envelope` (``-inf`` on exact cancellation)."""
    if not decomp.z1:
        raise EmptyZ1(f"Z1 is empty for zeta = {decomp.zeta}")
    lam = np.array([l for l, _ in decomp.lambdas], dtype=complex)
    mult = np.array([k for _, k in decomp.lambdas], dtype=float)
    m = float(lam.real.max())
    s = abs(compensated_sum(mult * np.exp((lam - m) / eps)))
    if s == 0:
        return -math.inf
    return 0.5 * math.log(PI / eps) + m / eps + math.log(s)


def growth_envelope(decomp: DualDecomposition, eps: float) -> float:
    """``sqrt(pi/eps) |sum_k n_k exp(lambda_k / eps)|``, the exact ``|H1_eps|``.

    Returns ``inf`` if the value overflows a float.
    """
    lg = log_growth_envelope(decomp, eps)
    try:
        return math.exp(lg)
    except OverflowError:
        return math.inf


def eval_dual_f(z, eps: float, tol: float = 1e-16,
                policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """``f_eps(z) = H_eps(ln z / 2i) - sum_{m>=1} exp(-eps m^2) z^-m`` for ``|z| > 1``."""
    z = complex(z)
    if not abs(z) > 1:
        raise DomainError("the dual route needs |z| > 1")
    h, h_err, h_terms = eval_H_with_error(dual_coordinate(z), eps, tol)
    tail = negative_tail(z, eps, policy)
    value = h - tail.value
    if z.imag == 0:
        # real z gives a real sum; drop the rounding residue
        value = complex(value.real, 0.0)
    err = h_err + tail.abs_error_estimate + _MACHINE_EPS * (abs(h) + abs(value))
    log_peak = math.log(abs(h)) if h != 0 else -math.inf
    return EvalResult(value, err, Strategy.DUAL_THETA,
                      h_terms + tail.terms_or_nodes_used, log_peak)


def log_abs_f_grid(z, eps: float) -> np.ndarray:
    """``ln |f_eps(z)|`` over an array, in double precision.

    Meant for maps and heat plots, not for certified values: ``|z| <= 1``
    sums the series directly, ``|z| > 1`` uses the dual form with the
    Gaussian sum shifted by its largest exponent so nothing overflows.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=float)
    n_terms = int(math.ceil(math.sqrt(40.0 / eps))) + 2
    inner = np.abs(z) <= 1
    zi = z[inner]
    acc = np.ones(zi.shape, dtype=complex)
    power = np.ones(zi.shape, dtype=complex)
    for n in range(1, n_terms):
        power = power * zi
        acc += math.exp(-eps * n * n) * power
    with np.errstate(divide="ignore"):
        out[inner] = np.log(np.abs(acc))

    zo = z[~inner]
    if zo.size:
        zeta = np.log(zo) / 2j
        half = int(math.ceil(4 * np.abs(zeta).max() / PI + math.sqrt(40 * eps) / PI)) + 1
        n = np.arange(-half, half + 1)
        d = zeta[:, None] - n * PI
        ex = -(d * d) / eps
        m = ex.real.max(axis=1)
        s = np.exp(ex - m[:, None]).sum(axis=1) * math.sqrt(PI / eps)
        tail = np.zeros(zo.shape, dtype=complex)
        inv = 1 / zo
        power = np.ones(zo.shape, dtype=complex)
        for k in range(1, n_terms):
            power = power * inv
            tail += math.exp(-eps * k * k) * power
        with np.errstate(under="ignore", divide="ignore"):
            low = m <= 0
            res = np.empty(zo.shape, dtype=float)
            res[low] = np.log(np.abs(s[low] * np.exp(m[low]) - tail[low]))
            res[~low] = np.log(np.abs(s[~low] - tail[~low] * np.exp(-m[~low]))) + m[~low]
            out[~inner] = res
    return out
