"""Numba kernels for bit-packed GF(2) elimination.

Rows are stored as little-endian uint64 words: column ``c`` lives in word
``c >> 6`` at bit ``c & 63``.  Elimination is the method of four Russians
with 8-column strips, so each strip touches every remaining row once.
"""

import numpy as np
from numba import njit

_STRIP = 8


@njit(cache=True, nogil=True)
def eliminate(a, ncols, full):
    """Reduce ``a`` in place; return (rank, pivot columns).

    With ``full`` the result is the reduced row echelon form (rows above each
    pivot are cleared too), otherwise only rows below are cleared.
    """
    m, w = a.shape
    pivcols = np.empty(min(m, ncols), np.int64)
    table = np.zeros((1 << _STRIP, w), np.uint64)
    strip = np.empty(_STRIP, np.int64)
    r = 0
    c0 = 0
    one = np.uint64(1)
    while c0 < ncols and r < m:
        word = c0 >> 6
        shift = c0 & 63
        width = min(_STRIP, ncols - c0)
        t = 0
        for b in range(width):
            if r + t >= m:
                break
            bit = one << np.uint64(shift + b)
            found = -1
            for i in range(r + t, m):
                x = a[i, word]
                for j in range(t):
                    if x & (one << np.uint64(shift + strip[j])):
                        x ^= a[r + j, word]
                if x & bit:
                    found = i
                    break
            if found < 0:
                continue
            p = r + t
            if found != p:
                for q in range(word, w):
                    tmp = a[p, q]
                    a[p, q] = a[found, q]
                    a[found, q] = tmp
            for j in range(t):
                if a[p, word] & (one << np.uint64(shift + strip[j])):
                    for q in range(word, w):
                        a[p, q] ^= a[r + j, q]
            for j in range(t):
                if a[r + j, word] & bit:
                    for q in range(word, w):
                        a[r + j, q] ^= a[p, q]
            strip[t] = b
            pivcols[r + t] = c0 + b
            t += 1
        if t > 0:
            for q in range(word, w):
                table[0, q] = 0
            for mask in range(1, 1 << t):
                low = 0
                while not (mask >> low) & 1:
                    low += 1
                prev = mask ^ (1 << low)
                for q in range(word, w):
                    table[mask, q] = table[prev, q] ^ a[r + low, q]
            start = 0 if full else r + t
            for i in range(start, m):
                if i >= r and i < r + t:
                    continue
                x = a[i, word]
                mask = 0
                for j in range(t):
                    if (x >> np.uint64(shift + strip[j])) & one:
                        mask |= 1 << j
                if mask:
                    for q in range(word, w):
                        a[i, q] ^= table[mask, q]
            r += t
        c0 += width
    return r, pivcols[:r]


@njit(cache=True, nogil=True)
def kernel_from_rref(a, rank, pivcols, ncols, nwords):
    """Kernel basis rows from a reduced row echelon form."""
    is_pivot = np.zeros(ncols, np.bool_)
    for j in range(rank):
        is_pivot[pivcols[j]] = True
    slot = np.full(ncols, -1, np.int64)
    nfree = 0
    for c in range(ncols):
        if not is_pivot[c]:
            slot[c] = nfree
            nfree += 1
    out = np.zeros((nfree, nwords), np.uint64)
    one = np.uint64(1)
    for c in range(ncols):
        if slot[c] >= 0:
            out[slot[c], c >> 6] |= one << np.uint64(c & 63)
    for j in range(rank):
        pc = pivcols[j]
        for q in range(a.shape[1]):
            x = a[j, q]
            while x:
                low = x & (~x + one)
                b = 0
                y = low
                while y > one:
                    y >>= one
                    b += 1
                c = q * 64 + b
                if c < ncols and slot[c] >= 0:
                    out[slot[c], pc >> 6] |= one << np.uint64(pc & 63)
                x ^= low
    return out


@njit(cache=True, nogil=True)
def gather_columns(a, cols, nwords):
    """New packed matrix made of the listed columns of ``a``, in order."""
    m = a.shape[0]
    out = np.zeros((m, nwords), np.uint64)
    one = np.uint64(1)
    for k in range(cols.shape[0]):
        c = cols[k]
        src_w = c >> 6
        src_b = np.uint64(c & 63)
        dst_w = k >> 6
        dst_b = np.uint64(k & 63)
        for i in range(m):
            if (a[i, src_w] >> src_b) & one:
                out[i, dst_w] |= one << dst_b
    return out


@njit(cache=True, nogil=True)
def matmul(a, b, ncols_out):
    """Packed product: rows of ``a`` select and xor rows of ``b``."""
    m = a.shape[0]
    k = b.shape[0]
    w = b.shape[1]
    out = np.zeros((m, w), np.uint64)
    one = np.uint64(1)
    for i in range(m):
        for j in range(k):
            if (a[i, j >> 6] >> np.uint64(j & 63)) & one:
                for q in range(w):
                    out[i, q] ^= b[j, q]
    return out
