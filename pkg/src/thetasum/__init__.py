"""
Theta-regularized summation of the geometric series ``sum z^n``.

``f_eps(z) = sum_n exp(-eps n^2) z^n`` is entire for every ``eps > 0`` and
tends to ``1/(1 - z)`` as ``eps -> 0`` exactly inside a heart-shaped domain
bounded by ``exp(|t| + i t)``.  The package evaluates ``f_eps`` by direct
summation, by its Poisson dual and by rotated contour integrals, and
classifies points against the convergence domain.
"""
from .continuation import (
    QuadratureSpec,
    Sign,
    SpiralSpec,
    check_uniform_bound,
    eval_contour_f,
    eval_half_contour,
    in_G_theta,
    select_theta,
    spiral_distance,
    spiral_point,
)
from .engine import evaluate
from .errors import (
    DomainError,
    EmptyZ1,
    InfeasibleCancellation,
    MarginTooSmall,
    NoValidAngle,
    NonConvergence,
    ThetaSumError,
)
from .geometry import (
    ConePlanePoint,
    RegionLabel,
    RegionVerdict,
    classify_f,
    cone_plane_classify,
    heart_curve_point,
    in_heart,
)
from .numerics import LogMagnitude, compensated_sum, log_gamma, log_sum_exp, principal_log
from .summation import (
    EvalResult,
    Strategy,
    SummingMethod,
    TruncationPolicy,
    check_summing_conditions,
    eval_bilateral,
    eval_direct,
    gamma_coefficient,
    negative_tail,
    order_probe,
)
from .thetadual import (
    DualDecomposition,
    dual_coordinate,
    eval_dual_f,
    eval_H,
    growth_envelope,
    h2_bound,
    index_split,
)

__version__ = "0.1.0"
