"""Linear subshifts of (F_2^r)^{Z^d} cut out by local relations, and their entropy.

A presentation stores an s×r Laurent matrix R; the subshift is V = ker R.
Every dimension is computed on a finite window from an extended
configuration: the space K_w of patterns on w satisfying all relations
whose stencil lies inside w.  Entropy estimates are dim K_{F_n} / |F_n|
with the width r·|B_k(∂F_n)| / |F_n| of the pigeonhole sandwich.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import gf2
from .errors import ArgumentError, ResourceError
from .laurent import LaurentMatrix, block_diag, fold, relation_matrix, stack, window_matrix, zero_extension_matrix
from .lattice import DEFAULT_SCHEDULE, FiniteQuotient, LatticeWindow, ball, boundary, folner_box

DEFAULT_MAX_CELLS = 1 << 32
ENUMERATION_CAP = 24


def thread_count():
    try:
        return max(1, int(os.environ.get("ENTROBETTI_THREADS", "1")))
    except ValueError:
        return 1


def map_schedule(fn, schedule):
    """Evaluate ``fn`` on each schedule entry, in order, possibly in threads."""
    threads = min(thread_count(), len(schedule))
    if threads <= 1:
        return [fn(n) for n in schedule]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, schedule))


@dataclass(frozen=True, eq=False)
class SubshiftPresentation:
    """V = ker(relations) inside the r-fold full shift over Z^d."""

    relations: LaurentMatrix
    name: str = ""

    def __post_init__(self):
        if self.relations.cols < 1:
            raise ArgumentError("alphabet rank r must be at least 1")

    @property
    def r(self):
        return self.relations.cols

    @property
    def d(self):
        return self.relations.dim

    @property
    def k(self):
        return self.relations.support_radius

    @classmethod
    def full_shift(cls, r, d):
        return cls(LaurentMatrix.empty(d, r), name=f"full{r}")

    @classmethod
    def zero(cls, r, d):
        return cls(LaurentMatrix.identity(d, r), name=f"zero{r}")

    @classmethod
    def from_strings(cls, d, rows, r=None, name=""):
        if not rows:
            if r is None:
                raise ArgumentError("r is required when there are no relations")
            return cls(LaurentMatrix.empty(d, r), name=name)
        m = LaurentMatrix(d, rows)
        if r is not None and m.cols != r:
            raise ArgumentError(f"relations have {m.cols} columns but r = {r}")
        return cls(m, name=name)

    def __repr__(self):
        return f"SubshiftPresentation(r={self.r}, d={self.d}, relations={self.relations!r})"


def ledrappier(d=2):
    """The three-dot system v(γ) + v(γ + e_0) + v(γ + e_1) = 0."""
    return SubshiftPresentation(LaurentMatrix(d, [["1 + x0 + x1"]]), name="ledrappier")


# -- window dimensions -----------------------------------------------------------


def local_kernel_dim(p: SubshiftPresentation, w: LatticeWindow) -> int:
    """dim K_w = r|w| − rank of the relations fully supported in w."""
    if not len(w):
        return 0
    return p.r * len(w) - gf2.rank(relation_matrix(p.relations, w))


def restriction_dim(p: SubshiftPresentation, w: LatticeWindow, margin: int) -> int:
    """Dimension of K_{B_margin(w)} projected onto the coordinates of w."""
    if margin < 0:
        raise ArgumentError("margin must be non-negative")
    if not len(w):
        return 0
    big = ball(w, margin)
    pos = big.index_of(w.points)
    coords = np.concatenate([j * len(big) + pos for j in range(p.r)])
    return gf2.projection_dim(relation_matrix(p.relations, big), coords)


def image_dim(m: LaurentMatrix, w: LatticeWindow) -> int:
    """Rank of the window map from B_k(w) onto w."""
    if not len(w):
        return 0
    return gf2.rank(window_matrix(m, ball(w, m.support_radius), w))


def boundary_volume(w: LatticeWindow, k: int) -> int:
    """|B_k(∂w)|, the number of sites where windows and restrictions may disagree."""
    return len(ball(boundary(w, 1), k))


def finite_support_witness(p: SubshiftPresentation, w: LatticeWindow):
    """A nonzero global element of V supported in w, or None.

    Patterns on w are extended by zero, so every relation touching w must
    vanish; returns one such pattern as a uint8 vector (layout j·|w| + site).
    """
    basis = gf2.kernel_basis(zero_extension_matrix(p.relations, w))
    if not basis.rows:
        return None
    return next(iter(basis))


# -- estimates -----------------------------------------------------------------------


def snap_integer(values, tol=0.25):
    """Nearest integer when the last two values agree on it and the last is within ``tol``."""
    if len(values) < 2:
        return None
    a, b = round(values[-2]), round(values[-1])
    if a == b and abs(values[-1] - b) < tol:
        return int(b)
    return None


@dataclass
class EntropyEstimate:
    """Per-window estimator series along a schedule of box sides.

    ``uncertainty`` is the boundary term of the pigeonhole sandwich; it is a
    convergence-scale indicator, not a certified two-sided enclosure.
    ``crosscheck`` (when present) is an independent route to the same limit,
    with its own width in ``crosscheck_uncertainty``.
    """

    schedule: list
    volumes: list
    dims: list
    values: list
    uncertainty: list
    mode: str = "kernel"
    r: int = 1
    crosscheck: list | None = None
    crosscheck_uncertainty: list | None = None

    @property
    def snapped(self):
        return snap_integer(self.values)

    @property
    def widths(self):
        return [2 * u for u in self.uncertainty]

    def combined_uncertainty(self):
        if self.crosscheck_uncertainty is None:
            return list(self.uncertainty)
        return [a + b for a, b in zip(self.uncertainty, self.crosscheck_uncertainty)]

    def crosscheck_gaps(self):
        if self.crosscheck is None:
            return None
        return [abs(a - b) for a, b in zip(self.values, self.crosscheck)]

    def prefix(self, n):
        """Estimate restricted to the first ``n`` schedule entries."""
        cut = lambda xs: None if xs is None else list(xs[:n])
        return EntropyEstimate(
            cut(self.schedule), cut(self.volumes), cut(self.dims), cut(self.values), cut(self.uncertainty),
            self.mode, self.r, cut(self.crosscheck), cut(self.crosscheck_uncertainty),
        )

    def __sub__(self, other):
        if list(self.schedule) != list(other.schedule):
            raise ArgumentError("estimates use different schedules")
        return EntropyEstimate(
            list(self.schedule),
            list(self.volumes),
            [a - b for a, b in zip(self.dims, other.dims)],
            [a - b for a, b in zip(self.values, other.values)],
            [a + b for a, b in zip(self.uncertainty, other.uncertainty)],
            mode="difference",
            r=self.r,
        )

    def __add__(self, other):
        if list(self.schedule) != list(other.schedule):
            raise ArgumentError("estimates use different schedules")
        return EntropyEstimate(
            list(self.schedule),
            list(self.volumes),
            [a + b for a, b in zip(self.dims, other.dims)],
            [a + b for a, b in zip(self.values, other.values)],
            [a + b for a, b in zip(self.uncertainty, other.uncertainty)],
            mode="sum",
            r=self.r + other.r,
        )


def _check_schedule(schedule):
    schedule = [int(n) for n in (DEFAULT_SCHEDULE if schedule is None else schedule)]
    if not schedule:
        raise ArgumentError("empty schedule")
    if any(n < 1 for n in schedule) or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ArgumentError(f"schedule must be positive and strictly increasing: {schedule}")
    return schedule


def _window_cells(n, d, rows, cols, k):
    """Bits in the largest dense matrix built at box side n."""
    vol = n**d
    big = (n + 2 * k) ** d
    return max(rows * vol * cols * vol, rows * vol * cols * big)


def check_budget(schedule, d, rows, cols, k, max_cells=None):
    max_cells = DEFAULT_MAX_CELLS if max_cells is None else max_cells
    worst = max(schedule)
    if _window_cells(worst, d, max(rows, 1), cols, k) <= max_cells:
        return
    n = 1
    while _window_cells(n + 1, d, max(rows, 1), cols, k) <= max_cells:
        n += 1
    raise ResourceError(f"box side {worst} exceeds the budget of {max_cells} matrix cells; largest feasible side is {n}", largest_feasible=n)


def image_entropy(m: LaurentMatrix, schedule=None, max_cells=None) -> EntropyEstimate:
    """Estimator of h(Im T_m) inside the s-fold full shift."""
    schedule = _check_schedule(schedule)
    check_budget(schedule, m.dim, m.rows, m.cols, m.support_radius, max_cells)

    def one(n):
        f = folner_box(n, m.dim)
        dim = image_dim(m, f)
        return dim, max(m.rows, 1) * boundary_volume(f, m.support_radius)

    out = map_schedule(one, schedule)
    vols = [n**m.dim for n in schedule]
    return EntropyEstimate(
        schedule, vols, [o[0] for o in out], [o[0] / v for o, v in zip(out, vols)],
        [o[1] / v for o, v in zip(out, vols)], mode="image", r=m.rows,
    )


def entropy(p: SubshiftPresentation, schedule=None, max_cells=None, crosscheck=True) -> EntropyEstimate:
    """Entropy estimator series of V along boxes [0, n)^d.

    values[n] = dim K_{F_n} / |F_n|.  The cross-check is r minus the image
    entropy of the relations at the same window (rank additivity).
    """
    schedule = _check_schedule(schedule)
    check_budget(schedule, p.d, p.relations.rows, p.r, p.k, max_cells)

    def one(n):
        f = folner_box(n, p.d)
        dim = local_kernel_dim(p, f)
        bvol = boundary_volume(f, p.k)
        img = image_dim(p.relations, f) if crosscheck else None
        return dim, bvol, img

    out = map_schedule(one, schedule)
    vols = [n**p.d for n in schedule]
    est = EntropyEstimate(
        schedule, vols, [o[0] for o in out], [o[0] / v for o, v in zip(out, vols)],
        [p.r * o[1] / v for o, v in zip(out, vols)], mode="kernel", r=p.r,
    )
    if crosscheck:
        s = p.relations.rows
        est.crosscheck = [p.r - o[2] / v for o, v in zip(out, vols)]
        est.crosscheck_uncertainty = [max(s, 1) * o[1] / v for o, v in zip(out, vols)]
    return est


def direct_sum(p1: SubshiftPresentation, p2: SubshiftPresentation) -> SubshiftPresentation:
    if p1.d != p2.d:
        raise ArgumentError(f"dimension mismatch: {p1.d} vs {p2.d}")
    name = f"{p1.name}+{p2.name}" if p1.name and p2.name else ""
    return SubshiftPresentation(block_diag(p1.relations, p2.relations), name=name)


def refine(x: SubshiftPresentation, extra: LaurentMatrix) -> SubshiftPresentation:
    """Y = ker(stack(x.relations, extra)) ⊆ X."""
    if extra.cols != x.r or extra.dim != x.d:
        raise ArgumentError(f"extra relations {extra.shape} (d={extra.dim}) do not fit r={x.r}, d={x.d}")
    return SubshiftPresentation(stack(x.relations, extra))


def quotient_entropy(x: SubshiftPresentation, extra: LaurentMatrix, schedule=None, max_cells=None) -> EntropyEstimate:
    """Estimator of h^top(X / Y) = h(X) − h(Y) for Y = X ∩ ker(extra)."""
    y = refine(x, extra)
    ex = entropy(x, schedule, max_cells, crosscheck=False)
    ey = entropy(y, schedule, max_cells, crosscheck=False)
    return ex - ey


def fixed_point_log_count(p: SubshiftPresentation, q: FiniteQuotient) -> int:
    """log_2 |Fix Λ| = dim ker of the relations folded onto Z^d / Λ."""
    if q.dim != p.d:
        raise ArgumentError(f"quotient of Z^{q.dim} used with a subshift over Z^{p.d}")
    return p.r * q.index - gf2.rank(fold(p.relations, q))


# -- brute-force oracles --------------------------------------------------------------


def _parity_masks(p, w):
    """Integer bit masks of the relations fully inside w, built without BitMatrix."""
    pts = [tuple(int(x) for x in pt) for pt in w.points]
    where = {pt: i for i, pt in enumerate(pts)}
    nw = len(pts)
    masks = []
    for i, row in enumerate(p.relations.entries):
        for g in pts:
            mask = 0
            inside = True
            for j, poly in enumerate(row):
                for e in poly.support:
                    site = tuple(a + b for a, b in zip(g, e))
                    if site not in where:
                        inside = False
                        break
                    mask ^= 1 << (j * nw + where[site])
                if not inside:
                    break
            if inside and mask:
                masks.append(mask)
    return masks


def enumerate_oracle(p: SubshiftPresentation, w: LatticeWindow, cap=ENUMERATION_CAP) -> np.ndarray:
    """All patterns on w satisfying every relation inside w, by exhaustive filtering.

    Rows are patterns in the layout j·|w| + site.  Costs 2^{r|w|}.
    """
    nbits = p.r * len(w)
    if nbits > cap:
        raise ResourceError(f"enumeration over 2^{nbits} patterns exceeds the cap 2^{cap}")
    masks = _parity_masks(p, w)
    hits = []
    chunk = 1 << 16
    for start in range(0, 1 << nbits, chunk):
        cand = np.arange(start, min(start + chunk, 1 << nbits), dtype=np.int64)
        ok = np.ones(len(cand), bool)
        for mask in masks:
            ok &= (np.bitwise_count(cand & mask) & 1) == 0
        hits.append(cand[ok])
    hits = np.concatenate(hits) if hits else np.zeros(0, np.int64)
    bits = (hits[:, None] >> np.arange(nbits, dtype=np.int64)[None, :]) & 1
    return bits.astype(np.uint8)


@dataclass
class SeparatedCount:
    """|V_{F_n}| obtained once restriction dimensions stop changing with margin."""

    count: int | None
    log2_count: int | None
    margin: int | None
    dims_by_margin: list = field(default_factory=list)

    @property
    def conclusive(self):
        return self.count is not None


def separated_count_oracle(p: SubshiftPresentation, n: int, epsilon=1.0, max_margin=8) -> SeparatedCount:
    """Cardinality |V_{F_n}| (the lower bound for the ε = 1 separated count).

    The margin is increased until three consecutive restriction dimensions
    agree; otherwise the result is flagged inconclusive.
    """
    if epsilon != 1.0:
        raise ArgumentError("only the ε = 1 separated count is implemented")
    f = folner_box(n, p.d)
    dims = []
    for m in range(max_margin + 1):
        dims.append(restriction_dim(p, f, m))
        if len(dims) >= 3 and dims[-1] == dims[-2] == dims[-3]:
            return SeparatedCount(2 ** dims[-1], dims[-1], m - 2, dims)
    return SeparatedCount(None, None, None, dims)


# -- random batteries -----------------------------------------------------------------


def random_laurent_matrix(rng, d=2, rows=None, cols=None, radius=2, density=0.25, max_size=3):
    """Random matrix with entries supported in the ℓ¹ ball of the given radius."""
    from .lattice import l1_sphere_offsets

    rows = int(rng.integers(1, max_size + 1)) if rows is None else rows
    cols = int(rng.integers(1, max_size + 1)) if cols is None else cols
    offs = [tuple(int(x) for x in o) for o in l1_sphere_offsets(d, radius)]
    entries = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            row.append([o for o in offs if rng.random() < density])
        entries.append(row)
    from .laurent import LaurentPoly

    return LaurentMatrix(d, [[LaurentPoly(d, e) for e in row] for row in entries], rows, cols)


def random_presentation(rng, d=2, **kw):
    return SubshiftPresentation(random_laurent_matrix(rng, d=d, **kw))
