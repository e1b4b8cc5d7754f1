"""Single entry point that routes an evaluation to series, dual or contour."""
from __future__ import annotations

import dataclasses

from .continuation import DEFAULT_QUADRATURE, QuadratureSpec, eval_contour_f
from .errors import DomainError
from .summation import (
    DEFAULT_POLICY,
    EvalResult,
    Strategy,
    SummingMethod,
    TruncationPolicy,
    eval_direct,
)
from .thetadual import eval_dual_f

__all__ = ["AUTO", "evaluate", "parse_strategy", "parse_method"]

AUTO = "auto"


def parse_strategy(s) -> Strategy | str:
    if isinstance(s, Strategy) or s == AUTO:
        return s
    try:
        return Strategy(s)
    except ValueError:
        raise ValueError(f"unknown strategy {s!r}; use auto, series, dual or contour") from None


def parse_method(m) -> SummingMethod:
    if isinstance(m, SummingMethod):
        return m
    key = str(m).lower().replace("_", "-")
    aliases = {"gammaratio": "gamma-ratio", "mittagleffler": "mittag-leffler"}
    try:
        return SummingMethod(aliases.get(key, key))
    except ValueError:
        raise ValueError(f"unknown summing method {m!r}") from None


def evaluate(z, eps: float, method=SummingMethod.THETA, strategy=AUTO,
             policy: TruncationPolicy = DEFAULT_POLICY,
             quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EvalResult:
    """Evaluate ``sum gamma_n(eps) z^n`` by the requested route.

    ``auto`` uses the direct series for ``|z| <= 1`` and the dual (Poisson)
    form for ``|z| > 1``.  The classical summing sequences have only the
    series route; ``auto`` lets it fall back to multiprecision when the
    cancellation budget is exceeded.  The contour route is available for
    the theta sequence as an explicit cross-check.

    Raises
    ------
    InfeasibleCancellation, NoValidAngle, MarginTooSmall, DomainError
        When a fixed strategy cannot be applied at this point.
    """
    method = parse_method(method)
    strategy = parse_strategy(strategy)
    z = complex(z)
    if strategy == AUTO:
        if method is not SummingMethod.THETA:
            return eval_direct(z, eps, method, dataclasses.replace(policy, extended_precision=True))
        strategy = Strategy.DIRECT_SERIES if abs(z) <= 1 else Strategy.DUAL_THETA
    if strategy is Strategy.DIRECT_SERIES:
        return eval_direct(z, eps, method, policy)
    if method is not SummingMethod.THETA:
        raise DomainError(f"the {strategy.value} route exists only for the theta sequence")
    if strategy is Strategy.DUAL_THETA:
        return eval_dual_f(z, eps, tol=policy.tol, policy=policy)
    return eval_contour_f(z, eps, quad)
