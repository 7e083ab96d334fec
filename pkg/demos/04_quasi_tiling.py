"""
Checking quasi-tilings
======================

An epsilon-quasi-tiling places translates of a few tile shapes so that the
families are disjoint, each family is almost disjoint, and the union covers
nearly all of a target box.  The checker reports a witness for each failure.
"""

from entrobetti import box, verify_quasi_tiling

# Sixteen 2x2 tiles cover an 8x8 box exactly.
tile = box((0, 0), (2, 2))
centers = [(x, y) for x in range(0, 8, 2) for y in range(0, 8, 2)]
rep = verify_quasi_tiling([tile], [centers], box((0, 0), (8, 8)), 0)
print(rep.passed, rep.coverage)

# The same tiles against a 9x9 target leave a strip uncovered.
rep = verify_quasi_tiling([tile], [centers], box((0, 0), (9, 9)), 0.1)
print(rep.passed, rep.coverage, "failed:", rep.failed_conditions())

# Overlapping translates break epsilon-disjointness when epsilon is 0.
big = box((0, 0), (2, 2))
rep = verify_quasi_tiling([big], [[(0, 0), (1, 1)]], box((0, 0), (3, 3)), 0)
print(rep.failed_conditions(), rep.deficits)
