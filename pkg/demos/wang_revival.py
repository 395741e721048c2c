"""The isotropic XX model with a field: separable ground state, entangled at
finite temperature, but never two windows. Small anisotropy or a tilted field
changes that."""

from thermalent import FamilySpec, ScanOptions, build, detect_regions

for family, params, opts in (
    ("wang", {"J": 1.0, "h": 1.5}, ScanOptions()),
    ("anisotropic", {"J": 1.0, "h": 1.5, "gamma": 1e-6}, ScanOptions()),
    ("misaligned", {"J": 1.0, "h": 1.5, "delta": 1e-6}, ScanOptions(neg_tol=1e-14)),
):
    report = detect_regions(build(FamilySpec(family, params)), opts=opts)
    spans = ", ".join(f"({a:.3g}, {b:.3g})" for a, b in report.intervals)
    print(f"{family:12s} {report.count} region(s): {spans}")
