"""
Inside the heart-shaped domain the regularized sums approach 1/(1 - z).

Run with ``python notebooks/01_interior_convergence.py``.  The point -20 is
far outside the unit disc, yet the Gaussian-damped series still settles on
1/21 as eps shrinks.  For |z| > 1 the value comes from the dual sum, since the
plain series cancels away every digit long before eps reaches 1e-3.
"""
from thetasum import InfeasibleCancellation, evaluate

for z in (0.5, 0.7j, -2.0, -20.0):
    target = 1 / (1 - z)
    print(f"z = {z}   limit 1/(1-z) = {target:.6g}")
    eps = 0.5
    while eps > 1e-3:
        r = evaluate(z, eps)
        print(f"  eps={eps:<9.4g} value={r.value:.8g}  |err|={abs(r.value - target):.2e}  via {r.strategy.value}")
        eps /= 4
    print()

# the direct series refuses once the largest term would wipe out double precision
try:
    evaluate(-20.0, 1e-3, strategy="series")
except InfeasibleCancellation as exc:
    print("series route at z=-20, eps=1e-3:", exc)
