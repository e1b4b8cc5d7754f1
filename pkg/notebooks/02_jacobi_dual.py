"""
The bilateral sum and its Gaussian dual agree to rounding error.

With zeta = ln(z) / 2i, the sum over all integers n of exp(-eps n^2) z^n
equals sqrt(pi/eps) times a sum of Gaussians centred on the lattice n*pi.
For small eps the first side needs about 1/sqrt(eps) terms and the second
only a handful, which is why the dual is used for |z| > 1.
"""
import cmath

import numpy as np

from thetasum.summation import eval_bilateral
from thetasum.thetadual import dual_coordinate, eval_H_with_error, index_split

rng = np.random.default_rng(1)
for _ in range(6):
    z = cmath.rect(np.exp(rng.uniform(-1.5, 1.5)), rng.uniform(-np.pi, np.pi))
    eps = rng.uniform(0.05, 1.0)
    h = eval_bilateral(z, eps)
    H, err, _ = eval_H_with_error(dual_coordinate(z), eps)
    print(f"z={z:.3f} eps={eps:.3f}  |h - H| = {abs(h.value - H):.1e}  (estimate {h.abs_error_estimate + err:.1e})")

# lattice indices whose Gaussians blow up as eps -> 0
for z in (-2.0, 2.0, 10j, 0.5):
    d = index_split(dual_coordinate(z).zeta)
    print(f"z={z}: divergent indices {d.z1}")
