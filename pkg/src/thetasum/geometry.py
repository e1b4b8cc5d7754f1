"""
Region classification for the theta-regularized geometric series.

The family ``f_eps(z)`` converges as ``eps -> 0`` exactly inside the
heart-shaped domain

    G = {r e^{i phi} : r < exp(|phi|)},   phi the principal argument,

bounded by the curve ``exp(|t| + i t)``, ``t in [-pi, pi]``.  The same set is
reached independently through the dual plane: with ``zeta = ln(z)/2i``,
``f_eps`` diverges iff ``z = 1`` or ``|z| > 1`` and some lattice index has
``Re (zeta - n pi)^2 <= 0``.

In the dual (cone) plane ``zeta = xi + i eta`` the non-divergent set is the
intersection of the half-planes ``Q_n = {Re (zeta - n pi)^2 > 0}``, which is
the union of open squares ``T_n`` with vertices ``n pi``, ``(n + 1) pi`` and
``(n + 1/2) pi +- i pi/2``.  The cones ``Gamma_plus`` and ``Gamma_minus``
(``+-eta >= min_n |xi - n pi|``) make up the rest.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .thetadual import dual_coordinate, index_split

__all__ = [
    "RegionLabel",
    "RegionVerdict",
    "ConePlanePoint",
    "ConeVerdict",
    "heart_curve_point",
    "heart_radius",
    "default_band",
    "in_heart",
    "dual_divergent",
    "h_divergent",
    "classify_f",
    "cone_plane_point",
    "cone_plane_classify",
    "classify_grid",
    "dual_divergent_grid",
    "cone_plane_grid",
]

PI = math.pi
HALF_PI = PI / 2
BAND_REL = 1e-9


class RegionLabel(enum.Enum):
    INSIDE = "InsideG"
    OUTSIDE = "OutsideG"
    BAND = "BoundaryBand"


@dataclass(frozen=True)
class RegionVerdict:
    """Classification of one point against the heart-shaped domain.

    ``margin`` is ``exp(|phi|) - r``: positive inside, negative outside.
    ``witness_z1`` holds the divergent lattice indices of the dual point
    when the dual route says the point diverges.
    """

    label: RegionLabel
    margin: float
    witness_z1: tuple | None = None
    dual_divergent: bool = False
    note: str = ""


@dataclass(frozen=True)
class ConePlanePoint:
    """A point ``xi + i eta`` of the dual plane."""

    xi: float
    eta: float

    def __post_init__(self):
        if not (math.isfinite(self.xi) and math.isfinite(self.eta)):
            raise ValueError("cone-plane coordinates must be finite")


@dataclass(frozen=True)
class ConeVerdict:
    in_gamma_plus: bool
    in_gamma_minus: bool
    in_all_Q: bool
    in_some_T: bool


def heart_curve_point(t: float) -> complex:
    """``exp(|t| + i t)`` for ``t`` in ``[-pi, pi]``."""
    if not -PI <= t <= PI:
        raise ValueError("t must lie in [-pi, pi]")
    r = math.exp(abs(t))
    if abs(t) == PI:
        return complex(-r, 0.0)
    return complex(r * math.cos(t), r * math.sin(t))


def heart_radius(phi):
    """Boundary modulus ``exp(|phi|)`` at principal argument ``phi``."""
    return np.exp(np.abs(phi))


def default_band(z) -> float:
    return BAND_REL * max(1.0, abs(complex(z)))


def dual_divergent(z) -> tuple[bool, tuple | None]:
    """Divergence of ``f_eps(z)`` decided on the dual side.

    Returns ``(divergent, Z1)``; ``Z1`` is ``None`` at ``z = 0``.
    """
    z = complex(z)
    if z == 0:
        return False, None
    z1 = index_split(dual_coordinate(z).zeta).z1
    if z == 1:
        return True, z1
    return (abs(z) > 1 and len(z1) > 0), z1


def h_divergent(z) -> bool:
    """Divergence of the bilateral sum ``h_eps(z)``: ``Z1`` is non-empty."""
    return len(index_split(dual_coordinate(z).zeta).z1) > 0


def _verdict(margin: float, band: float) -> RegionLabel:
    if margin > band:
        return RegionLabel.INSIDE
    if margin < -band:
        return RegionLabel.OUTSIDE
    return RegionLabel.BAND


def in_heart(z, band_width: float | None = None) -> RegionVerdict:
    """Closed-form test ``|z| < exp(|arg z|)`` with a boundary band.

    Points outside (or in the band) carry the dual-plane witness.  Curve
    points belong to the divergence set; in the band that is recorded in
    ``note``.
    """
    z = complex(z)
    if z == 0:
        return RegionVerdict(RegionLabel.INSIDE, 1.0)
    band = default_band(z) if band_width is None else float(band_width)
    margin = math.exp(abs(cmath.phase(z))) - abs(z)
    label = _verdict(margin, band)
    if label is RegionLabel.INSIDE:
        return RegionVerdict(label, margin)
    divergent, z1 = dual_divergent(z)
    note = ""
    if label is RegionLabel.BAND:
        note = "within the boundary band; points of the curve itself diverge"
    return RegionVerdict(label, margin, z1, divergent, note)


def classify_f(z, band_width: float | None = None) -> RegionVerdict:
    """Classify ``z`` for the family ``f_eps``.

    Same as :func:`in_heart`, except that ``z = 1`` (the one boundary point
    known exactly in floating point) is reported as divergent outright.
    """
    z = complex(z)
    if z == 1:
        return RegionVerdict(RegionLabel.OUTSIDE, 0.0, dual_divergent(z)[1], True,
                             "z = 1 lies in the divergence set")
    v = in_heart(z, band_width)
    if v.label is RegionLabel.INSIDE:
        divergent, _ = dual_divergent(z)
        return RegionVerdict(v.label, v.margin, None, divergent, v.note)
    return v


def cone_plane_point(z) -> ConePlanePoint:
    """Dual coordinate ``ln(z)/2i`` as a cone-plane point; ``exp(2i zeta) = z``."""
    zeta = dual_coordinate(z).zeta
    return ConePlanePoint(zeta.real, zeta.imag)


def _lattice_distance(xi):
    # distance to the nearest multiple of pi; only floor and ceil can win
    k = np.floor(np.asarray(xi, dtype=float) / PI)
    return np.minimum(np.abs(xi - k * PI), np.abs(xi - (k + 1) * PI))


def cone_plane_classify(p: ConePlanePoint) -> ConeVerdict:
    """Evaluate the cone, half-plane and square predicates at ``p``.

    ``in_all_Q`` uses the two nearest multiples of pi; ``in_some_T`` tests
    the open square of the strip containing ``xi`` directly from its
    vertices.
    """
    m = float(_lattice_distance(p.xi))
    in_plus = p.eta >= m
    in_minus = p.eta <= -m
    in_q = abs(p.eta) < m
    n = math.floor(p.xi / PI)
    in_t = abs(p.xi - n * PI - HALF_PI) + abs(p.eta) < HALF_PI
    return ConeVerdict(bool(in_plus), bool(in_minus), bool(in_q), bool(in_t))


def classify_grid(z: np.ndarray, band_rel: float = BAND_REL):
    """Vectorized closed-form verdicts.

    Returns
    -------
    labels : ndarray of int8
        1 inside, -1 outside, 0 boundary band.
    margin : ndarray of float
        ``exp(|phi|) - r``.
    """
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    margin = np.exp(np.abs(np.angle(z))) - r
    band = band_rel * np.maximum(1.0, r)
    labels = np.zeros(z.shape, dtype=np.int8)
    labels[margin > band] = 1
    labels[margin < -band] = -1
    labels[z == 0] = 1
    labels[z == 1] = -1
    return labels, margin


def dual_divergent_grid(z: np.ndarray) -> np.ndarray:
    """Vectorized dual-route divergence: ``z = 1`` or ``|z| > 1`` with ``Z1`` non-empty.

    ``Z1`` is found by brute force over every lattice index in the window
    ``|n| <= ceil(4 |zeta| / pi)`` of the worst point.
    """
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=bool)
    nz = z != 0
    zeta = np.log(z[nz]) / 2j
    window = int(np.ceil(4 * np.abs(zeta).max() / PI)) if zeta.size else 0
    n = np.arange(-window, window + 1)
    d = zeta.real[..., None] - n * PI
    re_sq = d * d - (zeta.imag ** 2)[..., None]
    has_z1 = (re_sq <= 0).any(axis=-1)
    out[nz] = (np.abs(z[nz]) > 1) & has_z1
    out[z == 1] = True
    return out


def cone_plane_grid(xi: np.ndarray, eta: np.ndarray):
    """Vectorized :func:`cone_plane_classify`.

    Returns
    -------
    in_all_Q, in_some_T : ndarray of bool
    boundary_distance : ndarray of float
        Distance from each point to the boundary of its strip's square.
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    m = _lattice_distance(xi)
    in_q = np.abs(eta) < m
    n = np.floor(xi / PI)
    s = np.abs(xi - n * PI - HALF_PI) + np.abs(eta)
    in_t = s < HALF_PI
    return in_q, in_t, np.abs(HALF_PI - s) / math.sqrt(2)
