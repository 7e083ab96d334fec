"""Entropy Betti numbers of finite cell complexes with a free Z^d-cover.

The cover's p-cochains are (F_2^{|K_p|})^{Z^d}; the coboundary d_p is a
|K_{p+1}|×|K_p| Laurent matrix whose (i, j) entry lists the translates e such
that cell (j, γ + e) is a face of cell (i, γ) (mod 2).

Three routes to b_E^p are provided and should agree in the limit:

* image entropies:   |K_p| − h(Im d_p) − h(Im d_{p−1})
* Følner patches:    dim H^p(L_n) / |F_n|
* finite covers:     dim H^p(X_Λ) / [Z^d : Λ]
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .duality import ResidualSeries
from .errors import ArgumentError, VerificationError
from .gf2 import BitMatrix
from .laurent import LaurentMatrix, fold
from .lattice import FiniteQuotient, LatticeWindow, ball, folner_box
from .subshift import EntropyEstimate, _check_schedule, boundary_volume, image_dim, map_schedule


@dataclass
class ComplexReport:
    ok: bool
    degree: int | None = None
    entry: tuple | None = None
    product: str | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class PeriodicComplex:
    """Cell counts |K_0|, …, |K_n| and coboundaries d_0, …, d_{n−1}."""

    d: int
    cells: tuple
    coboundaries: tuple
    name: str = ""
    labels: tuple = field(default=())
    check: bool = True

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "coboundaries", tuple(self.coboundaries))
        if not cells or any(c < 0 for c in cells):
            raise ArgumentError(f"bad cell counts {cells}")
        if len(self.coboundaries) != len(cells) - 1:
            raise ArgumentError(f"{len(cells)} degrees need {len(cells) - 1} coboundaries, got {len(self.coboundaries)}")
        for p, m in enumerate(self.coboundaries):
            if m.dim != self.d:
                raise ArgumentError(f"d_{p} lives over Z^{m.dim}, complex over Z^{self.d}")
            if m.shape != (cells[p + 1], cells[p]):
                raise ArgumentError(f"d_{p} has shape {m.shape}, expected {(cells[p + 1], cells[p])}")
        if self.check:
            report = validate_complex(self)
            if not report.ok:
                raise VerificationError(report.message)

    @property
    def top(self):
        return len(self.cells) - 1

    @property
    def euler(self):
        return sum((-1) ** p * c for p, c in enumerate(self.cells))

    def coboundary(self, p):
        """d_p, with d_{−1} and d_top the zero maps."""
        if 0 <= p < self.top:
            return self.coboundaries[p]
        if p == -1:
            return LaurentMatrix.zeros(self.d, self.cells[0], 0)
        if p == self.top:
            return LaurentMatrix.empty(self.d, self.cells[self.top])
        raise ArgumentError(f"degree {p} out of range")

    @property
    def radius(self):
        return max((m.support_radius for m in self.coboundaries), default=0)


def validate_complex(c: PeriodicComplex) -> ComplexReport:
    """Check d_{p+1} d_p = 0 over the Laurent ring; report the first bad entry."""
    for p in range(len(c.coboundaries) - 1):
        prod = c.coboundaries[p + 1] @ c.coboundaries[p]
        for i, row in enumerate(prod.entries):
            for j, poly in enumerate(row):
                if poly:
                    return ComplexReport(
                        False, p, (i, j), str(poly),
                        f"d_{p + 1} d_{p} is nonzero at entry ({i}, {j}): {poly}",
                    )
    return ComplexReport(True)


def _image_dim_or_zero(m, w):
    if m.rows == 0 or m.cols == 0:
        return 0
    return image_dim(m, w)


def betti(c: PeriodicComplex, p: int, schedule=None, crosscheck=False) -> EntropyEstimate:
    """Entropy Betti estimator b_E^p along boxes [0, n)^d.

    values: |K_p| − (dim Im d_p + dim Im d_{p−1}) / |F_n|, reported raw.
    With ``crosscheck`` the Følner-patch ratio dim H^p(L_n) / |F_n| is
    attached as the independent route.
    """
    if not 0 <= p <= c.top:
        raise ArgumentError(f"degree {p} outside 0..{c.top}")
    schedule = _check_schedule(schedule)
    dp, dprev = c.coboundary(p), c.coboundary(p - 1)
    k = max(dp.support_radius, dprev.support_radius)
    nxt = c.cells[p + 1] if p < c.top else 0
    weight = max(c.cells[p] + nxt, 1)

    def one(n):
        f = folner_box(n, c.d)
        i_p = _image_dim_or_zero(dp, f)
        i_prev = _image_dim_or_zero(dprev, f)
        h = folner_cohomology(c, n)[p] if crosscheck else None
        return i_p, i_prev, boundary_volume(f, k), h

    out = map_schedule(one, schedule)
    vols = [n**c.d for n in schedule]
    dims = [c.cells[p] * v - o[0] - o[1] for o, v in zip(out, vols)]
    est = EntropyEstimate(
        schedule, vols, dims, [x / v for x, v in zip(dims, vols)],
        [weight * o[2] / v for o, v in zip(out, vols)], mode="betti", r=c.cells[p],
    )
    if crosscheck:
        est.crosscheck = [o[3] / v for o, v in zip(out, vols)]
        est.crosscheck_uncertainty = [2 * c.cells[p] * len(ball(folner_box(n, c.d), 2 * c.radius) - folner_box(n, c.d)) / v
                                      for n, v in zip(schedule, vols)]
    return est


def euler_check(c: PeriodicComplex, schedule=None) -> ResidualSeries:
    """|Σ (−1)^p b_E^p(n) − e(K)| per window, against the summed widths."""
    schedule = _check_schedule(schedule)
    ests = [betti(c, p, schedule) for p in range(c.top + 1)]
    alt = [sum((-1) ** p * e.values[i] for p, e in enumerate(ests)) for i in range(len(schedule))]
    unc = [sum(e.uncertainty[i] for e in ests) for i in range(len(schedule))]
    return ResidualSeries(
        schedule, [abs(a - c.euler) for a in alt], unc,
        {"alternating_sum": alt, "euler": c.euler, "betti": [e.values for e in ests]},
    )


# -- finite complexes ------------------------------------------------------------------


def _patch_cells(c: PeriodicComplex, s: LatticeWindow):
    """Per degree, per cell type: the lattice labels of cells in the patch.

    A degree-0 cell belongs when its label is in s; a higher cell belongs
    when its label is in s and every face (mod 2) already belongs.
    """
    included = [[s for _ in range(c.cells[0])]]
    for p in range(c.top):
        m = c.coboundaries[p]
        layer = []
        for i in range(c.cells[p + 1]):
            ok = np.ones(len(s), bool)
            for j, poly in enumerate(m.entries[i]):
                for e in poly.support:
                    ok &= included[p][j].index_of(s.points + np.asarray(e, np.int64)) >= 0
            layer.append(LatticeWindow(c.d, s.points[ok]))
        included.append(layer)
    return included


def _patch_coboundary(m: LaurentMatrix, rows_cells, cols_cells) -> BitMatrix:
    roff = np.concatenate([[0], np.cumsum([len(w) for w in rows_cells])]).astype(np.int64)
    coff = np.concatenate([[0], np.cumsum([len(w) for w in cols_cells])]).astype(np.int64)
    rr, cc = [], []
    for i, j, e in m.terms():
        cod = rows_cells[i]
        if not len(cod):
            continue
        idx = cols_cells[j].index_of(cod.points + np.asarray(e, np.int64))
        keep = idx >= 0
        rr.append(roff[i] + np.flatnonzero(keep))
        cc.append(coff[j] + idx[keep])
    if rr:
        rr, cc = np.concatenate(rr), np.concatenate(cc)
    return BitMatrix.from_entries(int(roff[-1]), int(coff[-1]), rr, cc)


def _cohomology_dims(sizes, ranks):
    """dim H^p = dim C^p − rank d_p − rank d_{p−1}."""
    out = []
    for p, size in enumerate(sizes):
        out.append(size - (ranks[p] if p < len(ranks) else 0) - (ranks[p - 1] if p > 0 else 0))
    return out


def folner_cohomology(c: PeriodicComplex, n: int, mode: str = "spanned") -> list:
    """dim H^p over F_2 of the patch spanned by labels in F_n (or its thickening)."""
    if mode not in ("spanned", "thickened"):
        raise ArgumentError(f"unknown mode {mode!r}")
    s = folner_box(n, c.d)
    if mode == "thickened":
        s = ball(s, 2 * c.radius)
    cells = _patch_cells(c, s)
    sizes = [sum(len(w) for w in layer) for layer in cells]
    ranks = [gf2.rank(_patch_coboundary(c.coboundaries[p], cells[p + 1], cells[p])) for p in range(c.top)]
    return _cohomology_dims(sizes, ranks)


def cover_cohomology(c: PeriodicComplex, q: FiniteQuotient) -> list:
    """dim H^p over F_2 of the finite cover X_Λ = cover / Λ."""
    if q.dim != c.d:
        raise ArgumentError(f"quotient of Z^{q.dim} used with a complex over Z^{c.d}")
    sizes = [k * q.index for k in c.cells]
    ranks = [gf2.rank(fold(m, q)) for m in c.coboundaries]
    return _cohomology_dims(sizes, ranks)


# -- shipped examples ----------------------------------------------------------------------

EXAMPLES = ("circle", "torus", "decorated_lattice_rp2", "decorated_lattice_rp2_d2")


def example_complex(name: str) -> PeriodicComplex:
    """Built-in complexes.

    circle
        the line R covering S^1: one vertex, one edge γ → γ + 1.
    torus
        the plane covering T^2: vertex, edges a (along x0), b (along x1),
        one square face.
    decorated_lattice_rp2, decorated_lattice_rp2_d2
        the circle (resp. torus) complex with a copy of RP^2 wedged onto
        every vertex.  RP^2 uses its minimal cell structure e^0 ∪ e^1 ∪ e^2,
        e^0 identified with the lattice vertex; the attaching degrees are
        0 and 2, so both new coboundary entries vanish mod 2 and each fiber
        contributes one class in H^1 and one in H^2.
    """
    if name == "circle":
        return PeriodicComplex(1, (1, 1), (LaurentMatrix(1, [["1 + x0"]]),), name=name, labels=(("v",), ("a",)))
    if name == "torus":
        return PeriodicComplex(
            2, (1, 2, 1),
            (LaurentMatrix(2, [["1 + x0"], ["1 + x1"]]), LaurentMatrix(2, [["1 + x1", "1 + x0"]])),
            name=name, labels=(("v",), ("a", "b"), ("sq",)),
        )
    if name == "decorated_lattice_rp2":
        return PeriodicComplex(
            1, (1, 2, 1),
            (LaurentMatrix(1, [["1 + x0"], ["0"]]), LaurentMatrix(1, [["0", "0"]])),
            name=name, labels=(("v",), ("a", "c"), ("f",)),
        )
    if name == "decorated_lattice_rp2_d2":
        return PeriodicComplex(
            2, (1, 3, 2),
            (LaurentMatrix(2, [["1 + x0"], ["1 + x1"], ["0"]]),
             LaurentMatrix(2, [["1 + x1", "1 + x0", "0"], ["0", "0", "0"]])),
            name=name, labels=(("v",), ("a", "b", "c"), ("sq", "f")),
        )
    raise ArgumentError(f"unknown example complex {name!r}; choose from {', '.join(EXAMPLES)}")
