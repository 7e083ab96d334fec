"""Pontryagin duality between finitely presented F_2[Z^d]-modules and linear
subshifts, annihilators, and the entropy rank on modules.

A module M = F_2[Z^d]^r / ⟨rows of R⟩ is dual to the subshift of
configurations annihilated by every translate of every row of R.  Pairing a
configuration with a translate of a row reads the configuration through the
row with exponents negated, so the dual subshift is ker(R̄) where R̄ is R
with the involution γ ↦ γ⁻¹ applied entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .errors import ArgumentError
from .laurent import LaurentMatrix, adjoint, block_diag, relation_matrix, stack, window_matrix
from .lattice import ball, folner_box
from .subshift import (
    EntropyEstimate,
    SubshiftPresentation,
    _check_schedule,
    boundary_volume,
    entropy,
    image_dim,
    map_schedule,
)


@dataclass(frozen=True, eq=False)
class ModulePresentation:
    """Cokernel of F_2[Z^d]^s → F_2[Z^d]^r given by the rows of ``relations``."""

    relations: LaurentMatrix
    name: str = ""

    def __post_init__(self):
        if self.relations.cols < 1:
            raise ArgumentError("a module presentation needs at least one generator")

    @property
    def r(self):
        return self.relations.cols

    @property
    def d(self):
        return self.relations.dim

    @classmethod
    def free(cls, r, d):
        return cls(LaurentMatrix.empty(d, r), name=f"free{r}")

    @classmethod
    def from_strings(cls, d, rows, r=None, name=""):
        if not rows:
            if r is None:
                raise ArgumentError("r is required when there are no relations")
            return cls(LaurentMatrix.empty(d, r), name=name)
        return cls(LaurentMatrix(d, rows), name=name)

    @property
    def submodule_generators(self):
        """Rows of ``relations``: generators of the relation submodule."""
        return [list(row) for row in self.relations.entries]

    def is_zero_submodule(self):
        """True when the relation submodule is 0, i.e. the module is free."""
        return self.relations.rows == 0 or self.relations.is_zero()

    def __repr__(self):
        return f"ModulePresentation(r={self.r}, d={self.d}, relations={self.relations!r})"


def dual_subshift(m: ModulePresentation) -> SubshiftPresentation:
    """The subshift annihilated by the relation submodule of ``m``."""
    return SubshiftPresentation(m.relations.involution(), name=m.name)


def perp(p: SubshiftPresentation) -> ModulePresentation:
    """F_2[Z^d]^r / V^⊥, presented by the generators of V^⊥.

    V^⊥ is generated by the relation rows of ``p`` with exponents negated.
    For the full shift V^⊥ = 0 and the module is free.
    """
    return ModulePresentation(p.relations.involution(), name=p.name)


def direct_sum(a: ModulePresentation, b: ModulePresentation) -> ModulePresentation:
    if a.d != b.d:
        raise ArgumentError(f"dimension mismatch: {a.d} vs {b.d}")
    return ModulePresentation(block_diag(a.relations, b.relations))


@dataclass
class ResidualSeries:
    """Per-window residuals next to the width they are compared against."""

    schedule: list
    residuals: list
    uncertainty: list
    parts: dict

    def within(self, index=None):
        idx = range(len(self.schedule)) if index is None else [index]
        return all(self.residuals[i] <= self.uncertainty[i] for i in idx)


def perp_entropy_check(p: SubshiftPresentation, schedule=None) -> ResidualSeries:
    """Residuals |h_n(V) + h_n(closure of V^⊥) − r| along the schedule.

    The closure of V^⊥ is the image of the adjoint of the relations, so its
    window value is image_dim(adjoint(R), F_n) / |F_n|.
    """
    schedule = _check_schedule(schedule)
    est = entropy(p, schedule, crosscheck=False)
    adj = adjoint(p.relations) if p.relations.rows else None
    s = max(p.relations.rows, 1)

    def one(n):
        f = folner_box(n, p.d)
        dim = image_dim(adj, f) if adj is not None else 0
        return dim, boundary_volume(f, p.k)

    out = map_schedule(one, schedule)
    vols = est.volumes
    adj_values = [o[0] / v for o, v in zip(out, vols)]
    residuals = [abs(a + b - p.r) for a, b in zip(est.values, adj_values)]
    unc = [(p.r + s) * o[1] / v for o, v in zip(out, vols)]
    return ResidualSeries(schedule, residuals, unc, {"values": est.values, "perp_values": adj_values})


def module_rank(m: ModulePresentation, schedule=None) -> EntropyEstimate:
    """rk(M) = entropy of the dual subshift."""
    return entropy(dual_subshift(m), schedule)


def restricted_image_dim(relations: LaurentMatrix, t: LaurentMatrix, w) -> int:
    """dim of {T z |_w : z ∈ K_{B_k(w)}} where K is cut out by ``relations``.

    Computed as rank[rel; T_w] − rank[rel] on the ball B_k(w), k the radius
    of T.
    """
    big = ball(w, t.support_radius)
    rel = relation_matrix(relations, big)
    tw = window_matrix(t, big, w)
    return gf2.rank(rel.vstack(tw)) - gf2.rank(rel)


def grothendieck_additivity_check(sub: ModulePresentation, extra: LaurentMatrix, schedule=None) -> ResidualSeries:
    """Additivity of rk along 0 → M → L → N → 0 with N = L / ⟨extra⟩.

    ``sub`` presents L; M is the submodule of L generated by the rows of
    ``extra``.  rk(L) and rk(N) are dual-subshift entropies; rk(M) is
    computed independently as the entropy of the image of dual(L) under the
    map read off the extra rows.  Residual: |rk L − rk N − rk M| per window.
    """
    if extra.cols != sub.r or extra.dim != sub.d:
        raise ArgumentError(f"extra relations {extra.shape} (d={extra.dim}) do not fit r={sub.r}, d={sub.d}")
    schedule = _check_schedule(schedule)
    quotient = ModulePresentation(stack(sub.relations, extra))
    dl = dual_subshift(sub)
    dn = dual_subshift(quotient)
    el = entropy(dl, schedule, crosscheck=False)
    en = entropy(dn, schedule, crosscheck=False)
    t = extra.involution()

    def one(n):
        f = folner_box(n, sub.d)
        if extra.rows == 0:
            return 0, 0
        return restricted_image_dim(dl.relations, t, f), boundary_volume(f, t.support_radius + dl.k)

    out = map_schedule(one, schedule)
    vols = el.volumes
    rank_m = [o[0] / v for o, v in zip(out, vols)]
    residuals = [abs(a - b - c) for a, b, c in zip(el.values, en.values, rank_m)]
    unc = [a + b + max(extra.rows, 1) * o[1] / v for a, b, o, v in zip(el.uncertainty, en.uncertainty, out, vols)]
    return ResidualSeries(
        schedule, residuals, unc,
        {"rank_L": el.values, "rank_N": en.values, "rank_M": rank_m, "difference": [a - b for a, b in zip(el.values, en.values)]},
    )
