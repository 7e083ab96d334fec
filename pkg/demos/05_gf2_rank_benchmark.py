"""
Exact GF(2) rank at scale
=========================

All dimensions in the package reduce to ranks of sparse-ish GF(2) matrices.
Rows are packed into 64-bit words and eliminated with the method of four
Russians, compiled with numba.
"""

import time

import numpy as np

from entrobetti import BitMatrix, kernel_basis, rank

rng = np.random.default_rng(0)

# The first call compiles the kernels.
rank(BitMatrix.from_dense(rng.integers(0, 2, (64, 64))))

for n in (1024, 4096, 8192):
    m = BitMatrix.from_dense(rng.integers(0, 2, (n, n), dtype=np.uint8))
    t = time.perf_counter()
    r = rank(m)
    print(f"{n}x{n}: rank {r} in {time.perf_counter() - t:.2f} s")

# A product of thin factors has low rank, and the kernel basis has the right size.
a = rng.integers(0, 2, (300, 40), dtype=np.uint8)
b = rng.integers(0, 2, (40, 500), dtype=np.uint8)
m = BitMatrix.from_dense((a @ b) & 1)
print(rank(m), kernel_basis(m).rows, rank(m) + kernel_basis(m).rows == m.cols)
