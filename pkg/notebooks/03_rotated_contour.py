"""
Splitting f_eps into two contour integrals along rotated rays.

Each half is an integral over a ray turned by theta.  The value does not
depend on theta as long as the spiral exp((tan(theta) -+ i) t) stays clear of z,
and each half obeys a bound that holds for every eps.
"""
import math

from thetasum.continuation import (QuadratureSpec, Sign, SpiralSpec, eval_half_contour,
                                   select_theta, spiral_distance, uniform_bound)
from thetasum.summation import eval_direct

quad = QuadratureSpec(tol=1e-12)
z, eps = 0.6 + 0.5j, 0.2
plus = eval_half_contour(z, eps, SpiralSpec(Sign.PLUS, math.pi / 6), quad)
minus = eval_half_contour(z, eps, SpiralSpec(Sign.MINUS, math.pi / 6), quad)
print("f+ + f-     =", plus.value + minus.value)
print("series      =", eval_direct(z, eps).value)

for theta in (math.pi / 16, math.pi / 8, math.pi / 5):
    v = eval_half_contour(z, eps, SpiralSpec(Sign.PLUS, theta), quad).value
    print(f"theta={theta:.4f}  f+ = {v:.14f}")

# outside the unit disc the angle has to be picked so both spirals miss z
z = -3 + 1j
specs = select_theta(z)
print(f"chosen angle {specs[0].theta:.4f}")
for spec in specs:
    print(f"{spec.sign.value}: distance {spiral_distance(spec, z):.3f}, bound {uniform_bound(z, spec):.3f}")
for eps in (1.0, 0.1, 0.01):
    v = eval_half_contour(z, eps, specs[0], quad).value
    print(f"eps={eps:<5} |f+| = {abs(v):.4f}")
