"""
Low level real/complex helpers: principal logarithm, compensated and
log-domain summation, and a real log-gamma.

Complex values are plain Python ``complex`` throughout the package.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import zeta as _zeta

from .errors import DomainError

__all__ = [
    "LogMagnitude",
    "principal_log",
    "principal_log_ext",
    "compensated_sum",
    "log_sum_exp",
    "log_gamma",
]

TWO_PI = 2.0 * math.pi
PI_EXT = np.longdouble("3.14159265358979323846264338327950288")


def _normalize_phase(phase: float) -> float:
    """Map an angle into (-pi, pi]."""
    phase = math.remainder(phase, TWO_PI)
    if phase <= -math.pi:
        phase += TWO_PI
    return phase


@dataclass(frozen=True)
class LogMagnitude:
    """A complex number ``exp(log_abs) * exp(1j * phase)`` kept in log form.

    ``log_abs`` may be ``-inf`` (the number zero).  ``phase`` is normalized
    to (-pi, pi] on construction.
    """

    log_abs: float
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phase", _normalize_phase(float(self.phase)))

    @classmethod
    def from_complex(cls, w: complex) -> "LogMagnitude":
        w = complex(w)
        if w == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(w)), cmath.phase(w))

    def to_complex(self) -> complex:
        """Exponentiate; raises ``OverflowError`` past the float range."""
        if self.log_abs == -math.inf:
            return 0j
        return cmath.rect(math.exp(self.log_abs), self.phase)

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        return LogMagnitude(self.log_abs + other.log_abs, self.phase + other.phase)


def principal_log(z) -> complex:
    """Principal branch ``ln|z| + i arg z`` with ``arg z`` in (-pi, pi].

    Negative reals carrying a signed-zero imaginary part ``-0.0`` are put on
    the upper side of the cut, so ``principal_log(-x)`` always has phase
    exactly ``pi``.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("logarithm of zero")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    w = cmath.log(z)
    if w.imag <= -math.pi:
        w = complex(w.real, math.pi)
    return w


def principal_log_ext(z) -> np.clongdouble:
    """:func:`principal_log` formed in ``np.longdouble`` precision.

    The input is the same double-precision ``z``; only the logarithm
    itself is computed with the wider mantissa.
    """
    w = principal_log(z)
    w_ext = np.log(np.clongdouble(complex(z)))
    if w.imag == math.pi and w_ext.imag < 0:
        w_ext = np.clongdouble(w_ext.real) + np.clongdouble(1j) * PI_EXT
    return w_ext


def compensated_sum(terms: Iterable) -> complex:
    """Sum complex terms with an error independent of the number of terms.

    Real and imaginary parts are accumulated separately with ``math.fsum``
    (exactly rounded), so the result error is at most one rounding per part.

    >>> compensated_sum([1.0, -1.0, 1e-16])
    (1e-16+0j)
    """
    arr = np.asarray(list(terms) if not isinstance(terms, np.ndarray) else terms,
                     dtype=complex).ravel()
    if arr.size == 0:
        return 0j
    return complex(math.fsum(arr.real), math.fsum(arr.imag))


def log_sum_exp(log_terms) -> float:
    """Return ``ln(sum(exp(t)))`` without overflow.

    An empty input gives ``-inf`` (the log of an empty sum).
    """
    t = np.asarray(log_terms, dtype=float).ravel()
    if t.size == 0:
        return -math.inf
    m = float(t.max())
    if m == -math.inf:
        return -math.inf
    if math.isinf(m):
        return m
    return m + math.log(math.fsum(np.exp(t - m)))


# Lanczos kernel, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(TWO_PI)

# Taylor coefficients of ln Gamma about 1 and 2 (used where ln Gamma ~ 0 and
# an absolute-accuracy kernel would lose relative accuracy).
_SERIES_RADIUS = 0.2
_SERIES_ORDER = 40
_k = np.arange(2, _SERIES_ORDER + 1)
_ZETA_K = _zeta(_k.astype(float), 1.0)
_SIGNS = np.where(_k % 2 == 0, 1.0, -1.0)
_COEF_AT_1 = _SIGNS * _ZETA_K / _k
_COEF_AT_2 = _SIGNS * (_ZETA_K - 1.0) / _k
_EULER_GAMMA = 0.57721566490153286061


def _lgamma_series(h: float, coef: np.ndarray, linear: float) -> float:
    # Horner from the top: sum_k coef[k-2] h^k + linear * h
    acc = 0.0
    for c in coef[::-1]:
        acc = acc * h + c
    return h * (linear + h * acc)


def _lgamma_lanczos(x: float) -> float:
    x -= 1.0
    a = _LANCZOS_COEF[0]
    t = x + _LANCZOS_G + 0.5
    for i in range(1, len(_LANCZOS_COEF)):
        a += _LANCZOS_COEF[i] / (x + i)
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(a)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for real ``x > 0``.

    Uses a fixed-coefficient Lanczos kernel, switching to the Taylor
    expansions about 1 and 2 inside ``|x - 1| < 0.2`` and ``|x - 2| < 0.2``
    so that the relative accuracy holds next to the two zeros.  Arguments
    below 0.5 are lifted with ``ln G(x) = ln G(x + 1) - ln x``.
    """
    x = float(x)
    if not x > 0 or math.isnan(x):
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    if math.isinf(x):
        return math.inf
    if x == 1.0 or x == 2.0:
        return 0.0
    if abs(x - 1.0) < _SERIES_RADIUS:
        return _lgamma_series(x - 1.0, _COEF_AT_1, -_EULER_GAMMA)
    if abs(x - 2.0) < _SERIES_RADIUS:
        return _lgamma_series(x - 2.0, _COEF_AT_2, 1.0 - _EULER_GAMMA)
    if x < 0.5:
        return log_gamma(x + 1.0) - math.log(x)
    return _lgamma_lanczos(x)
