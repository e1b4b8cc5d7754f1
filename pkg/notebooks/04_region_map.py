"""
Where the family converges: the heart r < exp(|phi|).

Writes region.svg (verdicts plus the boundary curve) and region.pgm (a
log-scaled map of the largest |f_eps| over a few eps) to the current
directory, then checks a few points against the dual-plane criterion.
"""
from thetasum.geometry import classify_f, cone_plane_classify, cone_plane_point
from thetasum.scan import GridSpec, format_record, scan_region, scan_summary

res = scan_region(GridSpec(-30, 30, -30, 30, 300, 300), svg_path="region.svg",
                  heat_path="region.pgm", workers=2)
print(format_record(scan_summary(res)), end="")

for z in (0.5, -20.0, 1.2, 10j, -25.0):
    v = classify_f(z)
    c = cone_plane_classify(cone_plane_point(z))
    print(f"z={z}: {v.label.value:<12} margin={v.margin:9.3f} dual witness={v.witness_z1} "
          f"in a square: {c.in_some_T}")
