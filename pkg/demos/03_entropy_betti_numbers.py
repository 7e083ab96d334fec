"""
Entropy Betti numbers of periodic complexes
===========================================

A Z^d-periodic cochain complex has finitely many cell orbits and Laurent
coboundary matrices.  Its entropy Betti numbers measure cohomology per
lattice site.  Three routes should agree: image telescoping on boxes,
cohomology of finite Folner patches, and cohomology of finite covers.
"""

import numpy as np

from entrobetti import betti, cover_cohomology, euler_check, example_complex, finite_quotient, folner_cohomology

SCHED = [4, 8, 16, 32]

# The line and the plane are contractible: every Betti number vanishes.
for name in ("circle", "torus"):
    c = example_complex(name)
    print(name, [betti(c, p, SCHED).snapped for p in range(c.top + 1)])

# A line of vertices with an RP^2 wedged on at each one.  Over GF(2) each copy
# adds a class in degrees 1 and 2, so the answer is (0, 1, 1).
rp2 = example_complex("decorated_lattice_rp2")
print("cells per orbit:", rp2.cells, "euler:", rp2.euler)
print([betti(rp2, p, SCHED).snapped for p in range(3)])

# Finite patches and finite covers tell the same story.
print(folner_cohomology(rp2, 7))
print(cover_cohomology(rp2, finite_quotient([[8]])))

# Euler characteristic per site matches the alternating sum of Betti numbers.
print(max(euler_check(rp2, SCHED).residuals))

# Covers of the torus complex: a genuine 2-torus at every level.
torus = example_complex("torus")
for n in (2, 3, 5):
    print(n, cover_cohomology(torus, finite_quotient(np.diag([n, n]))))
