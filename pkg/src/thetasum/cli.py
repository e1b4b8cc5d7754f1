"""
Command-line entry point: ``thetasum {eval,sweep,scan,classify,verify}``.

Exit status: 0 success, 1 failed verification or unexpected error, 2 bad
flags or configuration, 3 the requested route cannot be applied at this
point (cancellation budget, no rotation angle, value out of range).

Defaults can come from a ``key = value`` file named by ``--config`` or the
``THETA_SUM_CONFIG`` environment variable; flags win over the file.
"""
from __future__ import annotations

import argparse
import configparser
import io
import math
import os
import re
import sys
from pathlib import Path

from .continuation import QuadratureSpec
from .engine import AUTO, evaluate, parse_method
from .errors import DomainError, InfeasibleCancellation, MarginTooSmall, NoValidAngle, NonConvergence
from .geometry import BAND_REL, classify_f
from .scan import DEFAULT_HEAT_CAP, DEFAULT_HEAT_EPS, GridSpec, atomic_write, format_record, scan_region, scan_summary
from .summation import SummingMethod, TruncationPolicy

__all__ = ["main", "parse_complex", "format_complex", "load_config", "build_parser"]

CONFIG_ENV = "THETA_SUM_CONFIG"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^\s*([+-]?{_NUM})\s*([+-]\s*{_NUM})i\s*$")
_REAL_RE = re.compile(rf"^\s*([+-]?{_NUM})\s*$")

# config key -> (type, default)
CONFIG_KEYS = {
    "tol": (float, 1e-16),
    "peak_log_budget": (float, math.log(1e12)),
    "max_terms": (int, 10_000_000),
    "extended_precision": (bool, False),
    "quad_tol": (float, 1e-10),
    "max_panels": (int, 1 << 14),
    "band_rel": (float, BAND_REL),
    "workers": (int, 1),
}


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``RE+IMi`` / ``RE-IMi`` (a bare real is accepted too).

    >>> parse_complex("1.5e0-0.25i")
    (1.5-0.25j)
    """
    m = _COMPLEX_RE.match(text)
    if m:
        return complex(float(m.group(1)), float(m.group(2).replace(" ", "")))
    m = _REAL_RE.match(text)
    if m:
        return complex(float(m.group(1)), 0.0)
    raise argparse.ArgumentTypeError(f"not a complex literal of the form RE+IMi: {text!r}")


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real:.17g}{sign}{abs(z.imag):.17g}i"


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def load_config(path=None) -> dict:
    """Read ``key = value`` lines; unknown keys and bad values are usage errors."""
    path = path or os.environ.get(CONFIG_ENV)
    cfg = {k: d for k, (_, d) in CONFIG_KEYS.items()}
    if not path:
        return cfg
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string("[thetasum]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"malformed config {path}: {exc}") from None
    for key, raw in parser["thetasum"].items():
        if key not in CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r} in {path}")
        kind = CONFIG_KEYS[key][0]
        try:
            cfg[key] = _parse_bool(raw) if kind is bool else kind(raw)
        except ValueError as exc:
            raise UsageError(f"bad value for {key} in {path}: {exc}") from None
    return cfg


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return conv


def _method(text):
    try:
        return parse_method(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _eps_list(text):
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad eps list {text!r}") from None
    if not vals or any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("eps values must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thetasum", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--config", help=f"key = value defaults file (else ${CONFIG_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    def numeric_flags(sp):
        sp.add_argument("--method", type=_method, default=SummingMethod.THETA,
                        help="theta (default), gamma-ratio, lindelof, mittag-leffler")
        sp.add_argument("--strategy", choices=["auto", "series", "dual", "contour"], default=AUTO)
        sp.add_argument("--tol", type=_positive(float))
        sp.add_argument("--peak-log-budget", type=_positive(float))
        sp.add_argument("--quad-tol", type=_positive(float))

    e = sub.add_parser("eval", help="evaluate the regularized sum at one point")
    e.add_argument("--z", type=parse_complex, required=True)
    e.add_argument("--eps", type=_positive(float), required=True)
    numeric_flags(e)

    s = sub.add_parser("sweep", help="CSV of values along eps_k = eps_start * ratio^k")
    s.add_argument("--z", type=parse_complex, required=True)
    s.add_argument("--eps-start", type=_positive(float), default=0.5)
    s.add_argument("--ratio", type=_positive(float), default=0.5)
    s.add_argument("--steps", type=_positive(int), default=10)
    s.add_argument("--out", help="CSV path (default: stdout)")
    numeric_flags(s)

    c = sub.add_parser("scan", help="region image over a grid")
    c.add_argument("--re-min", type=float, default=-30.0)
    c.add_argument("--re-max", type=float, default=30.0)
    c.add_argument("--im-min", type=float, default=-30.0)
    c.add_argument("--im-max", type=float, default=30.0)
    c.add_argument("--cols", type=_positive(int), default=400)
    c.add_argument("--rows", type=_positive(int), default=400)
    c.add_argument("--out", required=True, help="SVG path")
    c.add_argument("--heat", help="optional PGM path for max |f_eps| heat values")
    c.add_argument("--heat-eps", type=_eps_list, default=DEFAULT_HEAT_EPS)
    c.add_argument("--heat-cap", type=_positive(float), default=DEFAULT_HEAT_CAP)
    c.add_argument("--summary", help="summary record path (default: OUT with .txt suffix)")
    c.add_argument("--workers", type=_positive(int))
    c.add_argument("--band-rel", type=float)

    k = sub.add_parser("classify", help="region verdict for one point")
    k.add_argument("--z", type=parse_complex, required=True)
    k.add_argument("--band", type=float, help="absolute band width (default 1e-9 max(1, |z|))")

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--suite", help="comma-separated criterion numbers (default: all)")
    return p


def _merge_complex_flags(argv):
    # "--z -20+0i" would otherwise be read as an option
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--z" and i + 1 < len(argv):
            out.append(f"--z={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _settings(args, cfg):
    def pick(flag, key):
        v = getattr(args, flag, None)
        return cfg[key] if v is None else v
    policy = TruncationPolicy(tol=pick("tol", "tol"),
                              peak_log_budget=pick("peak_log_budget", "peak_log_budget"),
                              max_terms=cfg["max_terms"],
                              extended_precision=cfg["extended_precision"])
    quad = QuadratureSpec(tol=pick("quad_tol", "quad_tol"), max_panels=cfg["max_panels"])
    return policy, quad


def _record_line(rec: dict) -> str:
    parts = []
    for k, v in rec.items():
        if isinstance(v, float):
            v = format(v, ".17g")
        elif isinstance(v, bool):
            v = "true" if v else "false"
        parts.append(f"{k}={v}")
    return " ".join(parts)


def run_eval(args, cfg, out) -> int:
    policy, quad = _settings(args, cfg)
    r = evaluate(args.z, args.eps, args.method, args.strategy, policy, quad)
    out.write(_record_line({
        "value_re": r.value.real, "value_im": r.value.imag,
        "abs_err": r.abs_error_estimate, "strategy": r.strategy.value,
        "work": r.terms_or_nodes_used,
    }) + "\n")
    return EXIT_OK


def sweep_csv(z, eps_list, method, strategy, policy, quad) -> str:
    """CSV text with header ``eps,re,im,abs_err,strategy``; ``abs_err`` is vs ``1/(1-z)``."""
    target = 1 / (1 - complex(z))
    buf = io.StringIO(newline="")
    buf.write("eps,re,im,abs_err,strategy\n")
    for eps in eps_list:
        r = evaluate(z, eps, method, strategy, policy, quad)
        buf.write(f"{eps:.17g},{r.value.real:.17g},{r.value.imag:.17g},"
                  f"{abs(r.value - target):.17g},{r.strategy.value}\n")
    return buf.getvalue()


def run_sweep(args, cfg, out) -> int:
    if args.z == 1:
        raise UsageError("the sweep target 1/(1-z) is undefined at z = 1")
    if not args.ratio < 1:
        raise UsageError("--ratio must lie in (0, 1)")
    policy, quad = _settings(args, cfg)
    eps_list = [args.eps_start * args.ratio ** k for k in range(args.steps)]
    text = sweep_csv(args.z, eps_list, args.method, args.strategy, policy, quad)
    if args.out:
        atomic_write(args.out, text.encode("ascii"))
    else:
        out.write(text)
    return EXIT_OK


def run_scan(args, cfg, out) -> int:
    try:
        grid = GridSpec(args.re_min, args.re_max, args.im_min, args.im_max, args.cols, args.rows)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    summary = args.summary or str(Path(args.out).with_suffix(".txt"))
    workers = args.workers if args.workers is not None else cfg["workers"]
    band_rel = args.band_rel if args.band_rel is not None else cfg["band_rel"]
    res = scan_region(grid, svg_path=args.out, heat_path=args.heat, summary_path=summary,
                      heat_eps=args.heat_eps, heat_cap=args.heat_cap,
                      band_rel=band_rel, workers=workers)
    out.write(format_record(scan_summary(res)))
    return EXIT_OK


def run_classify(args, cfg, out) -> int:
    v = classify_f(args.z, args.band)
    witness = "none" if v.witness_z1 is None else ",".join(str(n) for n in v.witness_z1)
    out.write(_record_line({"z": format_complex(args.z), "label": v.label.value,
                            "margin": v.margin, "dual_divergent": v.dual_divergent,
                            "witness_z1": witness}) + "\n")
    if v.note:
        out.write(f"note: {v.note}\n")
    return EXIT_OK


def run_verify(args, cfg, out) -> int:
    from .acceptance import CRITERIA, format_result, run_criteria
    select = None
    if args.suite:
        try:
            select = [int(x) for x in args.suite.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad --suite {args.suite!r}") from None
        known = {n for n, _, _ in CRITERIA}
        if not set(select) <= known:
            raise UsageError(f"unknown criteria {sorted(set(select) - known)}")
    results = run_criteria(select)
    for r in results:
        out.write(format_result(r) + "\n")
    passed = sum(r.passed for r in results)
    out.write(f"{passed}/{len(results)} criteria passed\n")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


COMMANDS = {"eval": run_eval, "sweep": run_sweep, "scan": run_scan,
            "classify": run_classify, "verify": run_verify}


def main(argv=None, out=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_complex_flags(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg, out)
    except UsageError as exc:
        print(f"thetasum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleCancellation, NoValidAngle, MarginTooSmall, DomainError,
            NonConvergence, OverflowError) as exc:
        print(f"thetasum: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
