"""Laurent polynomials over GF(2) in d variables and matrices over them.

Convention: a matrix M acts on configurations v = (v_1, …, v_r) by

    (M v)_i(γ) = Σ_j Σ_{e ∈ supp M_ij} v_j(γ + e),

i.e. the exponent e is a right-translation stencil.  The adjoint negates
exponents and transposes, so ⟨M v, w⟩ = ⟨v, M* w⟩ for finitely supported w.
"""

from __future__ import annotations

from collections import Counter
from functools import cached_property

import numpy as np

from .errors import ArgumentError
from .gf2 import BitMatrix
from .lattice import FiniteQuotient, LatticeWindow, _check_dim


class LaurentPoly:
    """Element of F_2[Z^d]: a finite set of exponent vectors (coefficient 1 each)."""

    __slots__ = ("dim", "support")

    def __init__(self, dim, support=()):
        _check_dim(dim)
        terms = Counter()
        for e in support:
            e = tuple(int(x) for x in e)
            if len(e) != dim:
                raise ArgumentError(f"exponent {e} has length {len(e)}, expected {dim}")
            terms[e] += 1
        self.dim = dim
        self.support = frozenset(e for e, c in terms.items() if c % 2)

    @classmethod
    def one(cls, dim):
        return cls(dim, [(0,) * dim])

    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def monomial(cls, dim, exponent):
        return cls(dim, [exponent])

    @classmethod
    def var(cls, dim, i, power=1):
        e = [0] * dim
        e[i] = power
        return cls(dim, [e])

    def __bool__(self):
        return bool(self.support)

    def __len__(self):
        return len(self.support)

    def __eq__(self, other):
        if isinstance(other, int) and other in (0, 1):
            other = LaurentPoly.one(self.dim) if other else LaurentPoly.zero(self.dim)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self.support == other.support

    def __hash__(self):
        return hash((self.dim, self.support))

    def _coerce(self, other):
        if isinstance(other, int):
            return LaurentPoly.one(self.dim) if other % 2 else LaurentPoly.zero(self.dim)
        if not isinstance(other, LaurentPoly) or other.dim != self.dim:
            raise ArgumentError("polynomials live in different rings")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        p = LaurentPoly(self.dim)
        p.support = self.support ^ other.support
        return p

    __radd__ = __add__
    __sub__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        terms = Counter(tuple(a + b for a, b in zip(e, f)) for e in self.support for f in other.support)
        return LaurentPoly(self.dim, [e for e, c in terms.items() if c % 2])

    __rmul__ = __mul__

    def __pow__(self, k):
        out = LaurentPoly.one(self.dim)
        for _ in range(k):
            out = out * self
        return out

    def involution(self):
        """γ ↦ γ⁻¹ on the group ring: negate every exponent."""
        return LaurentPoly(self.dim, [tuple(-x for x in e) for e in self.support])

    def sorted_support(self):
        return sorted(self.support)

    @property
    def radius(self):
        return max((sum(map(abs, e)) for e in self.support), default=0)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)!r}, dim={self.dim})"


def format_poly(p: LaurentPoly) -> str:
    """Canonical text: terms in exponent order joined by ' + '."""
    if not p.support:
        return "0"
    terms = []
    for e in p.sorted_support():
        factors = []
        for i, k in enumerate(e):
            if k == 1:
                factors.append(f"x{i}")
            elif k:
                factors.append(f"x{i}^{k}")
        terms.append("*".join(factors) if factors else "1")
    return " + ".join(terms)


def _as_poly(dim, value):
    if isinstance(value, LaurentPoly):
        if value.dim != dim:
            raise ArgumentError(f"entry has dimension {value.dim}, expected {dim}")
        return value
    if isinstance(value, int):
        return LaurentPoly.one(dim) if value % 2 else LaurentPoly.zero(dim)
    if isinstance(value, str):
        from .io import parse_poly

        return parse_poly(value, dim)
    raise ArgumentError(f"cannot interpret {value!r} as a Laurent polynomial")


class LaurentMatrix:
    """An s×r matrix over F_2[Z^d]; it presents an equivariant map Σ^r → Σ^s."""

    __slots__ = ("rows", "cols", "dim", "entries", "__dict__")

    def __init__(self, dim, entries, rows=None, cols=None):
        _check_dim(dim)
        entries = [list(row) for row in entries]
        if rows is None:
            rows = len(entries)
        if cols is None:
            if not entries:
                raise ArgumentError("column count required for a matrix without rows")
            cols = len(entries[0])
        if len(entries) != rows or any(len(row) != cols for row in entries):
            raise ArgumentError(f"entries do not form a {rows}x{cols} array")
        self.dim = dim
        self.rows = rows
        self.cols = cols
        self.entries = tuple(tuple(_as_poly(dim, x) for x in row) for row in entries)

    @classmethod
    def zeros(cls, dim, rows, cols):
        return cls(dim, [[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, dim, n):
        return cls(dim, [[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def empty(cls, dim, cols):
        """The 0×cols matrix (no relations)."""
        return cls(dim, [], 0, cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.dim == other.dim and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.dim, self.shape, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(format_poly(p) for p in row) for row in self.entries)
        return f"LaurentMatrix({self.rows}x{self.cols}, d={self.dim}, [{body}])"

    def is_zero(self):
        return not any(p for row in self.entries for p in row)

    def terms(self):
        """Triples (i, j, exponent) over all nonzero coefficients, sorted."""
        return [(i, j, e) for i, row in enumerate(self.entries) for j, p in enumerate(row) for e in p.sorted_support()]

    @cached_property
    def support_radius(self):
        return max((p.radius for row in self.entries for p in row), default=0)

    def row_stencil(self, i):
        """Sorted union of exponents used by row i."""
        return sorted(set().union(*(p.support for p in self.entries[i]))) if self.cols else []

    def transpose(self):
        return LaurentMatrix(self.dim, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)], self.cols, self.rows)

    def involution(self):
        """Entrywise exponent negation, no transpose."""
        return LaurentMatrix(self.dim, [[p.involution() for p in row] for row in self.entries], self.rows, self.cols)

    def __add__(self, other):
        if self.shape != other.shape or self.dim != other.dim:
            raise ArgumentError(f"cannot add {self.shape} and {other.shape}")
        return LaurentMatrix(self.dim, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], *self.shape)

    def __matmul__(self, other):
        if self.cols != other.rows or self.dim != other.dim:
            raise ArgumentError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = LaurentPoly.zero(self.dim)
                for k in range(self.cols):
                    if self.entries[i][k] and other.entries[k][j]:
                        acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return LaurentMatrix(self.dim, out, self.rows, other.cols)


def adjoint(m: LaurentMatrix) -> LaurentMatrix:
    """r×s matrix with entry (j, i) = entry (i, j) with exponents negated."""
    return m.involution().transpose()


def support_radius(m: LaurentMatrix) -> int:
    return m.support_radius


def stack(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    """Vertical concatenation; the kernel of the result is ker a ∩ ker b."""
    if a.cols != b.cols or a.dim != b.dim:
        raise ArgumentError(f"cannot stack {a.shape} (d={a.dim}) on {b.shape} (d={b.dim})")
    return LaurentMatrix(a.dim, list(a.entries) + list(b.entries), a.rows + b.rows, a.cols)


def block_diag(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    if a.dim != b.dim:
        raise ArgumentError(f"dimension mismatch: {a.dim} vs {b.dim}")
    z = LaurentPoly.zero(a.dim)
    top = [list(row) + [z] * b.cols for row in a.entries]
    bottom = [[z] * a.cols + list(row) for row in b.entries]
    return LaurentMatrix(a.dim, top + bottom, a.rows + b.rows, a.cols + b.cols)


def _check_window(m, w):
    if w.dim != m.dim:
        raise ArgumentError(f"window of dimension {w.dim} used with a matrix over Z^{m.dim}")


def _assemble(m, domain, row_codomains):
    """BitMatrix of the stencil map, with row i evaluated on row_codomains[i]."""
    nd = len(domain)
    offsets = np.concatenate([[0], np.cumsum([len(c) for c in row_codomains])]).astype(np.int64)
    rr, cc = [], []
    for i, j, e in m.terms():
        cod = row_codomains[i]
        if not len(cod):
            continue
        idx = domain.index_of(cod.points + np.asarray(e, np.int64))
        keep = idx >= 0
        rr.append(offsets[i] + np.flatnonzero(keep))
        cc.append(j * nd + idx[keep])
    if rr:
        rr = np.concatenate(rr)
        cc = np.concatenate(cc)
    return BitMatrix.from_entries(int(offsets[-1]), m.cols * nd, rr, cc)


def window_matrix(m: LaurentMatrix, domain: LatticeWindow, codomain: LatticeWindow) -> BitMatrix:
    """Matrix of (functions on domain)^r → (functions on codomain)^s.

    Row index i·|codomain| + position of γ, column index j·|domain| + position
    of δ.  Samples γ + e that fall outside ``domain`` are dropped.
    """
    _check_window(m, domain)
    _check_window(m, codomain)
    return _assemble(m, domain, [codomain] * m.rows)


def interior(m: LaurentMatrix, w: LatticeWindow, i: int) -> LatticeWindow:
    """Points γ of w with γ + e ∈ w for every exponent e of row i."""
    stencil = m.row_stencil(i)
    if not stencil or not len(w):
        return w
    ok = np.ones(len(w), bool)
    for e in stencil:
        ok &= w.index_of(w.points + np.asarray(e, np.int64)) >= 0
    return LatticeWindow(w.dim, w.points[ok])


def relation_matrix(m: LaurentMatrix, w: LatticeWindow) -> BitMatrix:
    """All relations whose stencil lies inside w, as a BitMatrix on patterns over w."""
    _check_window(m, w)
    return _assemble(m, w, [interior(m, w, i) for i in range(m.rows)])


def zero_extension_matrix(m: LaurentMatrix, w: LatticeWindow, radius=None) -> BitMatrix:
    """Relations touching w, applied to patterns on w extended by zero."""
    _check_window(m, w)
    from .lattice import ball

    k = m.support_radius if radius is None else radius
    return window_matrix(m, w, ball(w, k))


def fold(m: LaurentMatrix, q: FiniteQuotient) -> BitMatrix:
    """Matrix of the induced map on Λ-periodic configurations (size s·index × r·index)."""
    if q.dim != m.dim:
        raise ArgumentError(f"quotient of Z^{q.dim} used with a matrix over Z^{m.dim}")
    n = q.index
    reps = q.representatives
    rr, cc = [], []
    for i, j, e in m.terms():
        rr.append(i * n + np.arange(n))
        cc.append(j * n + q.reduce_index(reps + np.asarray(e, np.int64)))
    if rr:
        rr = np.concatenate(rr)
        cc = np.concatenate(cc)
    return BitMatrix.from_entries(m.rows * n, m.cols * n, rr, cc)
