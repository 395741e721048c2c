"""How common are two entangled windows among random Hamiltonians?

Small sample sizes keep this quick; the acceptance tests use the full ones.
"""

from thermalent.experiments import run_gue_campaign, run_homogeneous_campaign

for name, run, n in (("homogeneous field", run_homogeneous_campaign, 50), ("GUE", run_gue_campaign, 200)):
    r = run(n, master_seed=0)
    lo, hi = r.wilson95
    print(f"{name:18s} {r.positives}/{r.samples} = {r.fraction:.3f}  (95% CI {lo:.3f} to {hi:.3f})")
