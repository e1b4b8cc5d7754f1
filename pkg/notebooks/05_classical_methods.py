"""
The same limit through older summation kernels.

Gamma-ratio, Lindelof and Mittag-Leffler weights all sum the geometric
series to 1/(1 - z) at z = -1.5, only more slowly than the Gaussian one.
The slow decay of the Gaussian factor also gives an entire function of
order zero, which the last block shows numerically.
"""
from thetasum.engine import evaluate
from thetasum.summation import SummingMethod, order_probe

z = -1.5
# below eps = 0.1 the Mittag-Leffler weights need multiprecision and get slow
for method in SummingMethod:
    errs = [abs(evaluate(z, eps, method).value - 0.4) for eps in (0.5, 0.3, 0.2, 0.1)]
    print(f"{method.value:<15}", "  ".join(f"{e:.4f}" for e in errs))

print("ln ln M(r) / ln r:", [round(v, 4) for v in order_probe(0.1, [1e3, 1e6, 1e9, 1e12])])
