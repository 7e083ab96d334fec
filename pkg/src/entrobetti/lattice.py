"""Geometry of Z^d: windows, word-metric balls, Følner boxes, quasi-tilings
and finite-index quotients.

The word metric is the ℓ¹ metric of the generators ±e_1, …, ±e_d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from .errors import ArgumentError

MAX_DIM = 3
DEFAULT_SCHEDULE = (2, 4, 8, 16, 32, 64)


def _check_dim(d):
    if not 1 <= d <= MAX_DIM:
        raise ArgumentError(f"dimension {d} not supported (1 <= d <= {MAX_DIM})")


class LatticeWindow:
    """A finite subset of Z^d, stored as lexicographically sorted points."""

    __slots__ = ("dim", "points", "__dict__")

    def __init__(self, dim, points=()):
        _check_dim(dim)
        pts = np.asarray(points, dtype=np.int64)
        if pts.size == 0:
            pts = np.zeros((0, dim), np.int64)
        if dim == 1 and pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim > 2 or pts.shape[-1] != dim:
            raise ArgumentError(f"points of shape {pts.shape} do not live in Z^{dim}")
        pts = pts.reshape(-1, dim)
        pts = np.unique(pts, axis=0) if len(pts) else pts
        pts.flags.writeable = False
        self.dim = dim
        self.points = pts

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return (tuple(int(x) for x in p) for p in self.points)

    def __repr__(self):
        return f"LatticeWindow(dim={self.dim}, size={len(self)})"

    def __eq__(self, other):
        if not isinstance(other, LatticeWindow):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash((self.dim, self.points.tobytes()))

    def __contains__(self, point):
        return bool(self.index_of(np.asarray(point).reshape(1, -1))[0] >= 0)

    def as_set(self):
        return set(self)

    @cached_property
    def _lookup(self):
        if not len(self):
            return None
        lo = self.points.min(axis=0)
        ext = self.points.max(axis=0) - lo + 1
        strides = np.ones(self.dim, np.int64)
        for i in range(self.dim - 2, -1, -1):
            strides[i] = strides[i + 1] * ext[i + 1]
        codes = (self.points - lo) @ strides
        return lo, ext, strides, codes

    def index_of(self, pts):
        """Positions of ``pts`` in ``self.points``; -1 where absent."""
        pts = np.asarray(pts, np.int64).reshape(-1, self.dim)
        out = np.full(len(pts), -1, np.int64)
        if self._lookup is None or not len(pts):
            return out
        lo, ext, strides, codes = self._lookup
        rel = pts - lo
        inside = np.all((rel >= 0) & (rel < ext), axis=1)
        c = rel[inside] @ strides
        pos = np.searchsorted(codes, c)
        pos = np.minimum(pos, len(codes) - 1)
        hit = codes[pos] == c
        sub = np.where(hit, pos, -1)
        out[inside] = sub
        return out

    def translate(self, v):
        return LatticeWindow(self.dim, self.points + np.asarray(v, np.int64))

    def union(self, other):
        _same_dim(self, other)
        return LatticeWindow(self.dim, np.vstack([self.points, other.points]))

    def difference(self, other):
        _same_dim(self, other)
        return LatticeWindow(self.dim, self.points[other.index_of(self.points) < 0])

    def intersection(self, other):
        _same_dim(self, other)
        return LatticeWindow(self.dim, self.points[other.index_of(self.points) >= 0])

    def issubset(self, other):
        _same_dim(self, other)
        return bool(np.all(other.index_of(self.points) >= 0))

    __or__ = union
    __sub__ = difference
    __and__ = intersection
    __le__ = issubset


def _same_dim(a, b):
    if a.dim != b.dim:
        raise ArgumentError(f"dimension mismatch: {a.dim} vs {b.dim}")


def box(lo, hi):
    """The box [lo_1, hi_1) × … × [lo_d, hi_d)."""
    lo = tuple(int(x) for x in lo)
    hi = tuple(int(x) for x in hi)
    d = len(lo)
    _check_dim(d)
    axes = [np.arange(a, b) for a, b in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    return LatticeWindow(d, grid)


def folner_box(n, d):
    """The Følner box F_n = [0, n)^d."""
    _check_dim(d)
    if n < 1:
        raise ArgumentError(f"box side must be positive, got {n}")
    return box((0,) * d, (n,) * d)


def l1_sphere_offsets(d, r):
    """All integer vectors with ℓ¹ norm <= r, sorted."""
    rng = range(-r, r + 1)
    return np.array([v for v in product(rng, repeat=d) if sum(map(abs, v)) <= r], np.int64).reshape(-1, d)


def ball(h: LatticeWindow, r: int) -> LatticeWindow:
    """B_r(H): points within word distance r of H."""
    if r < 0:
        raise ArgumentError("radius must be non-negative")
    if r == 0 or not len(h):
        return h
    offs = l1_sphere_offsets(h.dim, r)
    pts = (h.points[:, None, :] + offs[None, :, :]).reshape(-1, h.dim)
    return LatticeWindow(h.dim, pts)


def boundary(h: LatticeWindow, r: int = 1) -> LatticeWindow:
    """B_r(H) \\ H."""
    if r < 1:
        raise ArgumentError("boundary radius must be >= 1")
    return ball(h, r) - h


def boundary_ratio(n, d, r=1):
    f = folner_box(n, d)
    return Fraction(len(boundary(f, r)), len(f))


# -- quasi-tilings -------------------------------------------------------------


@dataclass
class QuasiTilingReport:
    """Outcome of :func:`verify_quasi_tiling` with witnesses for failures.

    ``overlaps`` lists (family i, family j, shared point) for condition 1;
    ``deficits`` lists (family, center, kept, required) for condition 2;
    ``coverage`` is the exact covered fraction of the target.
    """

    epsilon: Fraction
    cross_disjoint: bool
    eps_disjoint: bool
    covers: bool
    coverage: Fraction
    overlaps: list = field(default_factory=list)
    deficits: list = field(default_factory=list)
    kept_sizes: list = field(default_factory=list)
    nested: bool = False

    @property
    def passed(self):
        return self.cross_disjoint and self.eps_disjoint and self.covers

    def failed_conditions(self):
        return [i for i, ok in ((1, self.cross_disjoint), (2, self.eps_disjoint), (3, self.covers)) if not ok]


def verify_quasi_tiling(tiles, centers, target, epsilon) -> QuasiTilingReport:
    """Check the three ε-quasi-tiling conditions for translates ``c + T_i``.

    1. the families C_i + T_i are pairwise disjoint;
    2. within each family the translates are ε-disjoint, certified by the
       greedy choice (in center order) of the kept parts;
    3. the union covers at least a (1 - ε) fraction of ``target``.

    Nesting 0 ∈ T_1 ⊂ … ⊂ T_N is reported in ``nested`` but not required.
    """
    eps = Fraction(epsilon).limit_denominator(10**9) if not isinstance(epsilon, Fraction) else epsilon
    if not 0 <= eps < 1:
        raise ArgumentError(f"epsilon {epsilon} outside [0, 1)")
    if len(tiles) != len(centers):
        raise ArgumentError(f"{len(tiles)} tiles but {len(centers)} center sets")
    d = target.dim
    tiles = [t if isinstance(t, LatticeWindow) else LatticeWindow(d, t) for t in tiles]
    centers = [c if isinstance(c, LatticeWindow) else LatticeWindow(d, c) for c in centers]
    for w in (*tiles, *centers):
        if w.dim != d:
            raise ArgumentError(f"dimension mismatch: window of dim {w.dim} against target of dim {d}")

    family_sets = []
    kept_sizes = []
    deficits = []
    for i, (tile, cs) in enumerate(zip(tiles, centers)):
        used = set()
        tile_pts = tile.as_set()
        need = (1 - eps) * len(tile_pts)
        sizes = []
        for c in cs:
            translate = {tuple(a + b for a, b in zip(p, c)) for p in tile_pts}
            kept = translate - used
            sizes.append(len(kept))
            if len(kept) < need:
                deficits.append((i, c, len(kept), need))
            used |= kept
        family_sets.append(used)
        kept_sizes.append(sizes)

    overlaps = []
    for i in range(len(family_sets)):
        for j in range(i + 1, len(family_sets)):
            common = family_sets[i] & family_sets[j]
            if common:
                overlaps.append((i, j, min(common)))

    covered = set().union(*family_sets) if family_sets else set()
    tgt = target.as_set()
    coverage = Fraction(len(tgt & covered), len(tgt)) if tgt else Fraction(1)
    origin = (0,) * d
    nested = bool(tiles) and origin in tiles[0] and all(a.issubset(b) for a, b in zip(tiles, tiles[1:]))
    return QuasiTilingReport(
        epsilon=eps,
        cross_disjoint=not overlaps,
        eps_disjoint=not deficits,
        covers=coverage >= 1 - eps,
        coverage=coverage,
        overlaps=overlaps,
        deficits=deficits,
        kept_sizes=kept_sizes,
        nested=nested,
    )


# -- finite quotients ------------------------------------------------------------


def smith_normal_form(a):
    """Return (U, D, V) with U @ a @ V = D diagonal, U and V unimodular.

    Diagonal entries are non-negative and each divides the next.
    """
    a = [[int(x) for x in row] for row in a]
    n = len(a)
    m = len(a[0]) if n else 0
    D = [row[:] for row in a]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_row(M, src, dst, k):
        M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]

    def add_col(M, src, dst, k):
        for row in M:
            row[dst] += k * row[src]

    for t in range(min(n, m)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, n) for j in range(t, m) if D[i][j]]
            if not nz:
                return U, D, V
            _, pi, pj = min(nz)
            swap_rows(D, t, pi)
            swap_rows(U, t, pi)
            swap_cols(D, t, pj)
            swap_cols(V, t, pj)
            done = True
            for i in range(t + 1, n):
                q = D[i][t] // D[t][t]
                add_row(D, t, i, -q)
                add_row(U, t, i, -q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, m):
                q = D[t][j] // D[t][t]
                add_col(D, t, j, -q)
                add_col(V, t, j, -q)
                if D[t][j]:
                    done = False
            if not done:
                continue
            bad = [(i, j) for i in range(t + 1, n) for j in range(t + 1, m) if D[i][j] % D[t][t]]
            if bad:
                i, _ = bad[0]
                add_row(D, i, t, 1)
                add_row(U, i, t, 1)
                continue
            break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def _int_inverse(u):
    """Inverse of a unimodular integer matrix (exact)."""
    import sympy

    inv = sympy.Matrix(u).inv()
    return [[int(x) for x in row] for row in inv.tolist()]


@dataclass(frozen=True, eq=False)
class FiniteQuotient:
    """Z^d modulo the lattice spanned by the columns of ``basis``.

    Reduction goes through the Smith form U·basis·V = diag(s): a point x maps
    to the residue vector (U x) mod s, which is a complete invariant of its
    coset.  Representatives are U⁻¹ applied to the residue vectors, then
    reduced into a small box when the basis is diagonal.
    """

    dim: int
    basis: tuple
    index: int
    representatives: np.ndarray
    _u: np.ndarray
    _moduli: np.ndarray
    _rep_codes: np.ndarray
    _rep_order: np.ndarray

    def residues(self, points):
        pts = np.asarray(points, np.int64).reshape(-1, self.dim)
        return np.mod(pts @ self._u.T, self._moduli)

    def _codes(self, points):
        res = self.residues(points)
        strides = np.cumprod(np.concatenate([[1], self._moduli[::-1][:-1]]))[::-1]
        return res @ strides

    def reduce_index(self, points):
        """Index into ``representatives`` of the coset of each point."""
        codes = self._codes(points)
        pos = np.searchsorted(self._rep_codes, codes)
        return self._rep_order[pos]

    def reduce(self, points):
        """Canonical representative of each point's coset."""
        return self.representatives[self.reduce_index(points)]

    def congruent(self, a, b):
        return bool(np.array_equal(self.residues(a), self.residues(b)))


def finite_quotient(basis) -> FiniteQuotient:
    """Finite quotient Z^d / Λ where Λ is spanned by the columns of ``basis``."""
    b = np.atleast_2d(np.asarray(basis, np.int64))
    if b.shape[0] != b.shape[1]:
        raise ArgumentError(f"basis must be square, got {b.shape}")
    d = b.shape[0]
    _check_dim(d)
    det = round(np.linalg.det(b.astype(float)))
    if det == 0:
        raise ArgumentError("singular basis: quotient would be infinite")
    U, D, _ = smith_normal_form(b.tolist())
    moduli = np.array([D[i][i] for i in range(d)], np.int64)
    index = int(np.prod(moduli))
    if index != abs(det):
        raise ArgumentError("Smith form inconsistent with determinant")
    u = np.array(U, np.int64)
    uinv = np.array(_int_inverse(U), np.int64)

    is_diag = np.count_nonzero(b - np.diag(np.diagonal(b))) == 0
    residue_grid = np.stack(np.meshgrid(*[np.arange(s) for s in moduli], indexing="ij"), -1).reshape(-1, d)
    if is_diag:
        reps = np.stack(np.meshgrid(*[np.arange(abs(s)) for s in np.diagonal(b)], indexing="ij"), -1).reshape(-1, d)
    else:
        reps = residue_grid @ uinv.T
        # shrink toward the origin: pick the lexicographically smallest
        # non-negative point in each coset within a search box
        reps = _small_representatives(b, reps)
    reps = reps.astype(np.int64)
    strides = np.cumprod(np.concatenate([[1], moduli[::-1][:-1]]))[::-1]
    codes = np.mod(reps @ u.T, moduli) @ strides
    order = np.argsort(codes)
    if len(np.unique(codes)) != index:
        raise ArgumentError("representatives are not pairwise incongruent")
    reps.flags.writeable = False
    return FiniteQuotient(
        dim=d,
        basis=tuple(tuple(int(x) for x in row) for row in b),
        index=index,
        representatives=reps,
        _u=u,
        _moduli=moduli,
        _rep_codes=codes[order],
        _rep_order=order,
    )


def _small_representatives(b, reps):
    """Replace representatives by small non-negative members of their cosets."""
    d = b.shape[0]
    index = len(reps)
    span = max(1, int(np.abs(b).sum(axis=0).max()))
    search = np.stack(np.meshgrid(*[np.arange(span + 1)] * d, indexing="ij"), -1).reshape(-1, d)
    # residues of search points relative to the lattice: solve via Smith data
    U, D, _ = smith_normal_form(b.tolist())
    u = np.array(U, np.int64)
    moduli = np.array([D[i][i] for i in range(d)], np.int64)
    key = lambda pts: [tuple(x) for x in np.mod(pts @ u.T, moduli)]
    best = {}
    for p, k in zip(search, key(search)):
        if k not in best:
            best[k] = p
    out = []
    for p, k in zip(reps, key(reps)):
        out.append(best.get(k, p))
    out = np.array(out, np.int64).reshape(index, d)
    return out[np.lexsort(out.T[::-1])]
