"""Exact linear algebra over GF(2) on bit-packed dense matrices."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import ArgumentError


def _nwords(cols):
    return (cols + 63) >> 6


class BitMatrix:
    """Dense GF(2) matrix, rows packed into little-endian uint64 words.

    Instances are immutable: the packed payload is marked read-only and every
    operation works on a copy.  Padding bits past ``cols`` are always zero.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows, cols, words=None):
        if rows < 0 or cols < 0:
            raise ArgumentError(f"negative shape {rows}x{cols}")
        nw = _nwords(cols)
        if words is None:
            words = np.zeros((rows, nw), np.uint64)
        else:
            words = np.ascontiguousarray(words, dtype=np.uint64)
            if words.shape != (rows, nw):
                raise ArgumentError(f"payload shape {words.shape} does not fit {rows}x{cols}")
            if cols & 63 and rows:
                pad = ~np.uint64((1 << (cols & 63)) - 1)
                if np.any(words[:, -1] & pad):
                    raise ArgumentError("nonzero padding bits")
        words.flags.writeable = False
        self.rows = rows
        self.cols = cols
        self.words = words

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        idx = np.arange(n)
        return cls.from_entries(n, n, idx, idx)

    @classmethod
    def from_dense(cls, array):
        a = np.asarray(array)
        if a.ndim != 2:
            raise ArgumentError("expected a 2-d array")
        rows, cols = a.shape
        bits = (a.astype(np.uint8) & 1)
        nw = _nwords(cols)
        padded = np.zeros((rows, nw * 64), np.uint8)
        padded[:, :cols] = bits
        packed = np.packbits(padded, axis=1, bitorder="little")
        words = packed.view("<u8").astype(np.uint64).reshape(rows, nw)
        return cls(rows, cols, words)

    @classmethod
    def from_entries(cls, rows, cols, row_idx, col_idx):
        """Matrix with a 1 at each listed position; repeated positions cancel."""
        r = np.asarray(row_idx, np.int64).ravel()
        c = np.asarray(col_idx, np.int64).ravel()
        if r.shape != c.shape:
            raise ArgumentError("row and column index arrays differ in length")
        if r.size and (r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols):
            raise ArgumentError("entry index out of range")
        words = np.zeros((rows, _nwords(cols)), np.uint64)
        if r.size:
            bits = np.left_shift(np.uint64(1), (c & 63).astype(np.uint64))
            np.bitwise_xor.at(words, (r, c >> 6), bits)
        return cls(rows, cols, words)

    # -- views --------------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def to_dense(self):
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), np.uint8)
        raw = self.words.astype("<u8").view(np.uint8).reshape(self.rows, -1)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.cols]

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    __hash__ = None

    def __iter__(self):
        """Yield rows as uint8 vectors."""
        dense = self.to_dense()
        yield from dense

    def transpose(self):
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self):
        return self.transpose()

    def vstack(self, other):
        if other.cols != self.cols:
            raise ArgumentError(f"column mismatch {self.cols} vs {other.cols}")
        return BitMatrix(self.rows + other.rows, self.cols, np.vstack([self.words, other.words]))

    def select_columns(self, cols):
        cols = np.asarray(cols, np.int64).ravel()
        if cols.size and (cols.min() < 0 or cols.max() >= self.cols):
            raise ArgumentError("column index out of range")
        nw = _nwords(cols.size)
        if self.rows == 0:
            return BitMatrix(0, cols.size)
        return BitMatrix(self.rows, cols.size, _kernels.gather_columns(self.words, cols, nw))

    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            if self.cols != other.rows:
                raise ArgumentError(f"shape mismatch {self.shape} @ {other.shape}")
            if self.rows == 0 or other.cols == 0:
                return BitMatrix(self.rows, other.cols)
            return BitMatrix(self.rows, other.cols, _kernels.matmul(self.words, other.words, other.cols))
        v = np.asarray(other, np.uint8) & 1
        return ((self.to_dense().astype(np.int64) @ v) & 1).astype(np.uint8)

    def _reduced(self, full):
        a = np.array(self.words, dtype=np.uint64, copy=True)
        if self.rows == 0 or self.cols == 0:
            return a, 0, np.zeros(0, np.int64)
        rk, piv = _kernels.eliminate(a, self.cols, full)
        return a, int(rk), piv


def rank(m: BitMatrix) -> int:
    """GF(2) rank; ``m`` is left untouched."""
    return m._reduced(full=False)[1]


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of {v : m v = 0}, one basis vector per row of the result."""
    a, rk, piv = m._reduced(full=True)
    nw = _nwords(m.cols)
    if m.cols == 0:
        return BitMatrix(0, 0)
    return BitMatrix(m.cols - rk, m.cols, _kernels.kernel_from_rref(a, rk, piv, m.cols, nw))


def projection_dim(m: BitMatrix, coords) -> int:
    """Dimension of ker(m) projected onto the coordinate subset ``coords``.

    Uses dim proj = |coords| + rank(m restricted to the other columns) - rank(m).
    """
    coords = np.unique(np.asarray(list(coords) if not isinstance(coords, np.ndarray) else coords, np.int64))
    if coords.size and (coords[0] < 0 or coords[-1] >= m.cols):
        raise ArgumentError(f"coordinate out of range for {m.cols} columns")
    keep = np.ones(m.cols, bool)
    keep[coords] = False
    rest = m.select_columns(np.flatnonzero(keep))
    return int(coords.size + rank(rest) - rank(m))
