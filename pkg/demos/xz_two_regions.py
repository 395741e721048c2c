"""Two separated entangled temperature windows in the XZ model with a field.

Around h = 2 the ground state is entangled, entanglement dies as T rises,
then returns in a second window before vanishing for good.
"""

import numpy as np

from thermalent import FamilySpec, build, concurrence_curve, detect_regions

for h in (1.0, 2.0):
    ham = build(FamilySpec("rosci", {"J": 1.0, "h": h}))
    report = detect_regions(ham)
    print(f"h = {h}: {report.count} region(s)")
    for lo, hi in report.intervals:
        print(f"    entangled for T in ({lo:.4f}, {hi:.4f})")

ham = build(FamilySpec("rosci", {"J": 1.0, "h": 2.0}))
ts = np.linspace(0, 2.5, 11)
for s in concurrence_curve(ham, ts):
    print(f"T = {s.t:5.2f}  C = {s.concurrence:.5f}  min PT eigenvalue = {s.min_pt_eig:+.5f}")
