"""A Hamiltonian with a product ground state and two entangled windows."""

from thermalent import FamilySpec, ScanOptions, build, concurrence, detect_regions, thermal_state

ham = build(FamilySpec("example11"))
print("ground-state concurrence:", concurrence(thermal_state(ham, 0.0)))
report = detect_regions(ham, opts=ScanOptions(conc_tol=1e-6))
for lo, hi in report.intervals:
    print(f"entangled for T in ({lo:.5f}, {hi:.5f})")
