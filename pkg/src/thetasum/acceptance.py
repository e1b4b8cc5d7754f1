"""
The acceptance checks, runnable from the test suite and from ``thetasum verify``.

Each check returns a :class:`CriterionResult`; none of them raises on a
failed comparison.  Tolerances are fixed here and never loosened at run
time.
"""
from __future__ import annotations

import cmath
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .continuation import QuadratureSpec, Sign, SpiralSpec, check_uniform_bound, eval_half_contour
from .engine import evaluate
from .geometry import classify_grid, cone_plane_grid, dual_divergent_grid, heart_curve_point
from .scan import GridSpec, pixel_centers, scan_region
from .summation import SummingMethod, eval_bilateral, eval_direct, order_probe
from .thetadual import dual_coordinate, eval_H_with_error, eval_dual_f

__all__ = ["CriterionResult", "CRITERIA", "run_criteria", "format_result"]

PI = math.pi
E_PI_PRINTED = 23.140692632779267
INTERIOR_POINTS = (0.5, 0.7j, -2.0, -20.0, 3 * cmath.exp(2j * PI / 3))
EPS_SCHEDULE = tuple(0.5 * 2.0 ** -k for k in range(10))
CONTOUR_TOL = 1e-10


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _strictly_decreasing(xs) -> bool:
    return all(b < a for a, b in zip(xs, xs[1:]))


def c1_curve_landmarks():
    one = heart_curve_point(0.0)
    tip = heart_curve_point(PI)
    rel = abs(-tip.real - E_PI_PRINTED) / E_PI_PRINTED
    ok = one == 1 and abs(tip.imag) == 0 and rel <= 1e-12 and abs(math.exp(PI) - E_PI_PRINTED) / E_PI_PRINTED <= 1e-12
    return ok, f"C(0) = {one}, C(pi) = {tip}, rel. error vs 23.140692632779267 = {rel:.2e}"


def c2_interior_convergence():
    parts, ok = [], True
    for z in INTERIOR_POINTS:
        target = 1 / (1 - z)
        errs = [abs(evaluate(z, eps).value - target) for eps in EPS_SCHEDULE]
        good = _strictly_decreasing(errs) and errs[-1] <= 1e-2
        ok &= good
        parts.append(f"z={complex(z):.4g}: final {errs[-1]:.2e}{'' if good else ' FAIL'}")
    return ok, "; ".join(parts)


def c3_divergence_envelope():
    z = 1.2
    eps = 1e-3
    val = eval_dual_f(z, eps).value
    envelope = math.sqrt(PI / eps) * math.exp(math.log(z) ** 2 / (4 * eps))
    ratio = abs(val) / envelope
    peak = max(abs(evaluate(z, e).value) for e in EPS_SCHEDULE)
    ok = 0.98 <= ratio <= 1.02 and peak > 1e3
    return ok, f"|f|/envelope at eps=1e-3 = {ratio:.6f}; max |f| over schedule = {peak:.4g}"


def c4_jacobi_identity(samples: int = 100, seed: int = 20240601):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        r = math.exp(rng.uniform(math.log(0.2), math.log(5.0)))
        z = cmath.rect(r, rng.uniform(-PI, PI))
        eps = rng.uniform(0.05, 1.0)
        h = eval_bilateral(z, eps).value
        H, _, _ = eval_H_with_error(dual_coordinate(z), eps)
        worst = max(worst, abs(h - H))
    return worst <= 1e-10, f"max residual over {samples} samples = {worst:.3e} (limit 1e-10)"


def _disc_points(n: int, seed: int):
    rng = np.random.default_rng(seed)
    r = 0.9 * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(-PI, PI, n))


def c5_decomposition(points: int = 50, seed: int = 7):
    quad = QuadratureSpec(tol=CONTOUR_TOL)
    zs = _disc_points(points, seed)
    worst_sum, worst_angle = 0.0, 0.0
    for eps in (0.1, 0.5):
        for z in zs:
            plus = eval_half_contour(z, eps, SpiralSpec(Sign.PLUS, PI / 6), quad)
            minus = eval_half_contour(z, eps, SpiralSpec(Sign.MINUS, PI / 6), quad)
            direct = eval_direct(z, eps).value
            worst_sum = max(worst_sum, abs(plus.value + minus.value - direct))
            other = eval_half_contour(z, eps, SpiralSpec(Sign.PLUS, PI / 12), quad)
            worst_angle = max(worst_angle, abs(other.value - plus.value))
    ok = worst_sum <= 1e-8 and worst_angle <= 2 * CONTOUR_TOL
    return ok, (f"max |f+ + f- - series| = {worst_sum:.2e} (limit 1e-8); "
                f"max |f+(pi/12) - f+(pi/6)| = {worst_angle:.2e} (limit {2 * CONTOUR_TOL:.0e})")


BOUND_POINTS = (0, 0.5, -0.5, 0.9j, -0.9j, 0.6 + 0.6j, -0.8 + 0.3j, -2.0, -3 + 1j, 2.5j)


def c6_uniform_bound():
    quad = QuadratureSpec(tol=CONTOUR_TOL)
    checked, failed = 0, []
    for theta in (PI / 12, PI / 6, PI / 4 - 0.05):
        for sign in (Sign.PLUS, Sign.MINUS):
            spec = SpiralSpec(sign, theta)
            for z in BOUND_POINTS:
                for eps in (1.0, 0.1, 0.01):
                    v = eval_half_contour(z, eps, spec, quad).value
                    checked += 1
                    if not check_uniform_bound(z, spec, v):
                        failed.append((z, theta, sign.value, eps))
    return not failed, f"{checked} (z, theta, sign, eps) samples, {len(failed)} violations {failed[:3]}"


def c7_region_equivalence():
    x = np.linspace(-30, 30, 200)
    z = x[None, :] + 1j * x[:, None]
    labels, margin = classify_grid(z)
    divergent = dual_divergent_grid(z)
    away = np.abs(margin) > 1e-6
    mismatch = int(np.sum(((labels == -1) != divergent) & away))
    band = int(np.sum(away & (labels == 0)))

    xi = np.linspace(-2 * PI, 2 * PI, 400)
    eta = np.linspace(-PI, PI, 400)
    XI, ETA = np.meshgrid(xi, eta)
    n = np.arange(-20, 21)
    d = XI[..., None] - n * PI
    all_q = np.all(d * d - ETA[..., None] ** 2 > 0, axis=-1)
    _, in_t, bdist = cone_plane_grid(XI, ETA)
    clear = bdist > 1e-9
    lattice_mismatch = int(np.sum((all_q != in_t) & clear))
    ok = mismatch == 0 and band == 0 and lattice_mismatch == 0
    return ok, (f"region grid: {mismatch} disagreements over {int(away.sum())} points; "
                f"lattice grid: {lattice_mismatch} disagreements over {int(clear.sum())} points")


def c8_order_zero():
    vals = order_probe(0.1, [1e3, 1e6, 1e9, 1e12])
    ok = _strictly_decreasing(vals) and vals[-1] <= 0.35
    return ok, "ln ln M(r)/ln r = " + ", ".join(f"{v:.4f}" for v in vals)


def c9_classical_methods():
    z = -1.5
    target = 1 / (1 - z)
    parts, ok = [], True
    for method in (SummingMethod.GAMMA_RATIO, SummingMethod.LINDELOF, SummingMethod.MITTAG_LEFFLER):
        errs = [abs(evaluate(z, eps, method).value - target) for eps in (0.5, 0.3, 0.2, 0.1)]
        good = _strictly_decreasing(errs) and errs[-1] <= 0.05
        ok &= good
        parts.append(f"{method.value}: " + ", ".join(f"{e:.4f}" for e in errs))
    return ok, "; ".join(parts)


def c10_figure(workdir=None):
    grid = GridSpec(-30, 30, -30, 30, 400, 400)
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        svg = Path(tmp) / "region.svg"
        res = scan_region(grid, svg_path=svg, summary_path=Path(tmp) / "region.txt")
        text = svg.read_text()
    crossings = res.crossings
    want = [-math.exp(PI), 1.0]
    cross_ok = (len(crossings) == 2
                and all(abs(a - b) <= 1e-12 * abs(b) for a, b in zip(crossings, want)))
    # pixels holding the criterion 2 and 3 points
    dx = (grid.re_max - grid.re_min) / grid.cols
    dy = (grid.im_max - grid.im_min) / grid.rows

    def label_at(z):
        i = int((z.real - grid.re_min) / dx)
        j = int((grid.im_max - z.imag) / dy)
        return int(res.labels[j, i])

    inside_ok = all(label_at(complex(z)) == 1 for z in INTERIOR_POINTS)
    outside_ok = label_at(1.2 + 0j) == -1
    svg_ok = text.count("<polyline") == 1 and '<g id="verdicts">' in text
    centers = pixel_centers(grid)
    ok = cross_ok and inside_ok and outside_ok and svg_ok and centers.shape == (400, 400)
    return ok, (f"curve crossings {crossings}; interior points inside: {inside_ok}; "
                f"z=1.2 outside: {outside_ok}")


CRITERIA = [
    (1, "curve landmarks", c1_curve_landmarks),
    (2, "interior convergence", c2_interior_convergence),
    (3, "divergence envelope", c3_divergence_envelope),
    (4, "Jacobi identity", c4_jacobi_identity),
    (5, "decomposition and angle independence", c5_decomposition),
    (6, "uniform bound", c6_uniform_bound),
    (7, "region predicate equivalence", c7_region_equivalence),
    (8, "order-zero probe", c8_order_zero),
    (9, "classical methods", c9_classical_methods),
    (10, "figure reproduction", c10_figure),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # a crash is a failure, reported as such
                ok, detail = False, f"raised {type(exc).__name__}: {exc}"
            return CriterionResult(num, name, bool(ok), detail, time.perf_counter() - t0)
    raise KeyError(number)


def run_criteria(select=None) -> list[CriterionResult]:
    numbers = [n for n, _, _ in CRITERIA] if not select else list(select)
    return [run_criterion(n) for n in numbers]


def format_result(r: CriterionResult) -> str:
    return f"criterion {r.number:2d} [{'PASS' if r.passed else 'FAIL'}] {r.name} ({r.seconds:.2f}s): {r.detail}"
