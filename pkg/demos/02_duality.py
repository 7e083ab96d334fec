"""
Annihilators and dual subshifts
===============================

Each subshift V has an annihilator module V-perp, and each finitely
presented module M has a dual subshift.  Entropy of V plus the rank of
V-perp should add up to the alphabet size r.
"""

from entrobetti import ModulePresentation, dual_subshift, ledrappier, module_rank, perp, perp_entropy_check

SCHED = [4, 8, 16, 32]

led = ledrappier()
ann = perp(led)
print("annihilator generated by:", [[str(e) for e in row] for row in ann.submodule_generators])

# h(V) + rank(V-perp) - r goes to zero along the schedule.
check = perp_entropy_check(led, SCHED)
print("residuals:", [round(x, 4) for x in check.residuals])

# Free modules have integer rank on every window.
print(module_rank(ModulePresentation.free(3, 2), SCHED).values)

# The dual of a cyclic module with relation 1 + x0 + x1 is the reflected
# three-dot system: same window dimensions as Ledrappier.
m = ModulePresentation.from_strings(2, [["1 + x0 + x1"]])
print(dual_subshift(m).relations)
