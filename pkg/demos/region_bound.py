"""Upper bound on the number of entangled windows from the sign pattern of
the partial-transpose determinant, written as a polynomial in exp(-1/T)."""

from thermalent import FamilySpec, build, detect_regions, region_bound

for family, params in (
    ("rosci", {"J": 1.0, "h": 2.0}),
    ("wang", {"J": 1.0, "h": 1.5}),
    ("example11", {}),
):
    ham = build(FamilySpec(family, params))
    res = region_bound(ham)
    print(
        f"{family:10s} terms={res.term_count:2d} sign changes={res.derivative_sign_changes:2d} "
        f"bound={res.bound} detected={detect_regions(ham).count} "
        f"(energy rounding error {res.spectrum.approx_error:.1e})"
    )
