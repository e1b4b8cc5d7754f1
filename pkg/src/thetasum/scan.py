"""
Region scans: per-pixel verdicts, the boundary curve and optional heat data,
written as SVG / PGM files plus a plain-text summary.

All files are written to a temporary sibling and moved into place with
``os.replace``, so an interrupted scan never leaves a partial file at the
target path.  Byte layouts are described in ``docs/FORMATS.md``.
"""
from __future__ import annotations

import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import BAND_REL, classify_grid, heart_curve_point
from .thetadual import log_abs_f_grid

__all__ = [
    "GridSpec",
    "ScanResult",
    "VERDICT_COLORS",
    "atomic_write",
    "pixel_centers",
    "curve_polyline",
    "real_axis_crossings",
    "render_svg",
    "render_pgm",
    "scan_region",
    "format_record",
    "scan_summary",
]

VERDICT_COLORS = {1: "#4c9be8", -1: "#e8704c", 0: "#202020"}
CURVE_SAMPLES = 2001  # odd, so t = 0 is a sample
DEFAULT_HEAT_EPS = (0.1, 0.03, 0.01)
DEFAULT_HEAT_CAP = 6.0


@dataclass(frozen=True)
class GridSpec:
    """Rectangle of the complex plane sampled at pixel centers."""

    re_min: float = -30.0
    re_max: float = 30.0
    im_min: float = -30.0
    im_max: float = 30.0
    cols: int = 400
    rows: int = 400

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("grid bounds must satisfy min < max")
        if self.cols < 1 or self.rows < 1:
            raise ValueError("grid needs at least one row and column")
        if self.cols * self.rows > 10 ** 8:
            raise ValueError("grid larger than 1e8 pixels")


@dataclass
class ScanResult:
    grid: GridSpec
    labels: np.ndarray
    heat: np.ndarray | None
    crossings: list
    counts: dict = field(default_factory=dict)
    files: dict = field(default_factory=dict)


def pixel_centers(grid: GridSpec, row_start: int = 0, row_stop: int | None = None) -> np.ndarray:
    """Complex pixel centers; row 0 is the top (``im_max``) edge."""
    row_stop = grid.rows if row_stop is None else row_stop
    dx = (grid.re_max - grid.re_min) / grid.cols
    dy = (grid.im_max - grid.im_min) / grid.rows
    re = grid.re_min + (np.arange(grid.cols) + 0.5) * dx
    im = grid.im_max - (np.arange(row_start, row_stop) + 0.5) * dy
    return re[None, :] + 1j * im[:, None]


def curve_polyline(samples: int = CURVE_SAMPLES) -> np.ndarray:
    """Boundary curve points for ``t`` in ``[-pi, pi]``, ends included."""
    t = np.linspace(-math.pi, math.pi, samples)
    return np.array([heart_curve_point(float(x)) for x in t])


def real_axis_crossings(points: np.ndarray, tol: float = 1e-12) -> list:
    """Real coordinates where a polyline meets the real axis, sorted."""
    out = []
    for a, b in zip(points[:-1], points[1:]):
        if a.imag == 0:
            out.append(float(a.real))
        elif a.imag * b.imag < 0:
            s = a.imag / (a.imag - b.imag)
            out.append(float(a.real + s * (b.real - a.real)))
    if points[-1].imag == 0:
        out.append(float(points[-1].real))
    merged = []
    for x in sorted(out):
        if not merged or abs(x - merged[-1]) > tol * max(1.0, abs(x)):
            merged.append(x)
    return merged


def atomic_write(path, data: bytes) -> None:
    """Write ``data`` to ``path`` through a temp file and ``os.replace``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix="." + path.name + ".", suffix=".tmp",
                               dir=str(path.parent))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        # mkstemp creates 0600; give the file the usual umask-based mode
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _g(x: float) -> str:
    return format(float(x), ".17g")


def render_svg(grid: GridSpec, labels: np.ndarray, curve: np.ndarray) -> bytes:
    """Verdict runs as 1-pixel-high rects, curve as a polyline in data coordinates."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{grid.cols}" height="{grid.rows}" '
        f'viewBox="0 0 {grid.cols} {grid.rows}" shape-rendering="crispEdges">',
        '<g id="verdicts">',
    ]
    for j, row in enumerate(labels):
        # run-length encode the row
        edges = np.flatnonzero(np.diff(row)) + 1
        starts = np.concatenate(([0], edges))
        stops = np.concatenate((edges, [row.size]))
        for s0, s1 in zip(starts, stops):
            lines.append(f'<rect x="{s0}" y="{j}" width="{s1 - s0}" height="1" '
                         f'fill="{VERDICT_COLORS[int(row[s0])]}"/>')
    lines.append("</g>")
    sx = grid.cols / (grid.re_max - grid.re_min)
    sy = grid.rows / (grid.im_max - grid.im_min)
    lines.append(f'<g id="curve" transform="matrix({_g(sx)} 0 0 {_g(-sy)} '
                 f'{_g(-grid.re_min * sx)} {_g(grid.im_max * sy)})">')
    pts = " ".join(f"{_g(p.real)},{_g(p.imag)}" for p in curve)
    lines.append('<polyline fill="none" stroke="#000000" stroke-width="1.5" '
                 f'vector-effect="non-scaling-stroke" points="{pts}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("ascii")


def render_pgm(heat: np.ndarray) -> bytes:
    """Binary 8-bit PGM (P5) of values in [0, 1]."""
    rows, cols = heat.shape
    pix = np.rint(np.clip(heat, 0.0, 1.0) * 255).astype(np.uint8)
    return f"P5\n{cols} {rows}\n255\n".encode("ascii") + pix.tobytes()


def _scan_rows(task):
    grid, r0, r1, band_rel, heat_eps, heat_cap = task
    z = pixel_centers(grid, r0, r1)
    labels, _ = classify_grid(z, band_rel)
    heat = None
    if heat_eps:
        log_max = np.full(z.shape, -np.inf)
        for eps in heat_eps:
            log_max = np.maximum(log_max, log_abs_f_grid(z, eps))
        heat = np.logaddexp(0.0, log_max) / math.log(10) / heat_cap
    return labels, heat


def scan_region(grid: GridSpec, svg_path=None, heat_path=None, summary_path=None,
                heat_eps=DEFAULT_HEAT_EPS, heat_cap: float = DEFAULT_HEAT_CAP,
                band_rel: float = BAND_REL, workers: int = 1,
                block_rows: int = 64) -> ScanResult:
    """Classify every pixel and optionally write the image files.

    Rows are split into blocks; with ``workers > 1`` blocks run in separate
    processes and are merged in row order, so the output does not depend on
    the worker count.  Heat values are ``log10(1 + max_eps |f_eps|)`` scaled
    by ``heat_cap`` and are only computed when ``heat_path`` is given.
    """
    want_heat = tuple(heat_eps) if heat_path is not None else ()
    tasks = [(grid, r0, min(r0 + block_rows, grid.rows), band_rel, want_heat, heat_cap)
             for r0 in range(0, grid.rows, block_rows)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_rows, tasks))
    else:
        parts = [_scan_rows(t) for t in tasks]
    labels = np.concatenate([p[0] for p in parts], axis=0)
    heat = np.concatenate([p[1] for p in parts], axis=0) if want_heat else None

    curve = curve_polyline()
    crossings = real_axis_crossings(curve)
    counts = {"inside": int(np.sum(labels == 1)), "outside": int(np.sum(labels == -1)),
              "band": int(np.sum(labels == 0))}
    result = ScanResult(grid, labels, heat, crossings, counts)
    if svg_path is not None:
        atomic_write(svg_path, render_svg(grid, labels, curve))
        result.files["svg"] = str(svg_path)
    if heat_path is not None:
        atomic_write(heat_path, render_pgm(heat))
        result.files["heat"] = str(heat_path)
    if summary_path is not None:
        result.files["summary"] = str(summary_path)
        atomic_write(summary_path, format_record(scan_summary(result)).encode("ascii"))
    return result


def scan_summary(result: ScanResult) -> dict:
    g = result.grid
    return {
        "command": "scan",
        "re_min": g.re_min, "re_max": g.re_max, "im_min": g.im_min, "im_max": g.im_max,
        "cols": g.cols, "rows": g.rows,
        "inside": result.counts["inside"],
        "outside": result.counts["outside"],
        "band": result.counts["band"],
        "curve_real_crossings": " ".join(_g(x) for x in result.crossings),
        "svg": result.files.get("svg", "none"),
        "heat": result.files.get("heat", "none"),
    }


def format_record(record: dict) -> str:
    """``key = value`` lines in insertion order; floats with 17 significant digits."""
    out = []
    for k, v in record.items():
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, float):
            v = _g(v)
        out.append(f"{k} = {v}")
    return "\n".join(out) + "\n"
