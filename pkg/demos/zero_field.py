"""Without local fields the Gibbs spectrum only spreads out with T, and a
local swap of Bell states maps any such Hamiltonian to one whose ground state
is a Bell state. The upshot is at most one entangled window."""

from thermalent.belldiag import bell_swaps, generated_permutations, swap_permutation
from thermalent.experiments import run_belldiag_check, run_majorization_check

for s in bell_swaps():
    print(f"swap {s.swapped_pair}: permutation {swap_permutation(s)}")
print("group generated by the swaps has", len(generated_permutations()), "elements")
print("majorization:", run_majorization_check(200).violations, "violations in 200 samples")
print("zero field:", run_belldiag_check(100).violations, "violations in 100 samples")
