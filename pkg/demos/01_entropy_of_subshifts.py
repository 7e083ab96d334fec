"""
Entropy of linear subshifts
===========================

A linear subshift is the set of GF(2) colourings of Z^d that satisfy a
finite list of local parity rules.  Its entropy is the number of free bits
per lattice site, estimated by counting solutions on growing boxes.
"""

import numpy as np

from entrobetti import SubshiftPresentation, entropy, enumerate_oracle, folner_box, ledrappier

# With no rules at all every site carries one free bit: entropy 1, on every box.
full = SubshiftPresentation.full_shift(1, 2)
print(entropy(full, [4, 8, 16]).values)

# Ledrappier's three-dot system: x(g) + x(g + e0) + x(g + e1) = 0 everywhere.
led = ledrappier()
est = entropy(led, [2, 4, 8, 16, 32, 64])
for n, dim, v, u in zip(est.schedule, est.dims, est.values, est.uncertainty):
    print(f"n={n:3d}  dim={dim:5d}  value={v:.4f}  uncertainty={u:.3f}")

# The window dimensions are 2n - 1: a bottom row and a left column fix the rest,
# so the estimate tends to 0 like 2/n.
print(est.dims == [2 * n - 1 for n in est.schedule])
print("snapped entropy:", est.snapped)

# Cross-check on a small box by listing every solution outright.
sols = enumerate_oracle(led, folner_box(3, 2))
print(len(sols), "patterns on the 3x3 box, log2 =", np.log2(len(sols)))
