import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entrobetti import (
    ArgumentError,
    LatticeWindow,
    LaurentMatrix,
    ResourceError,
    SubshiftPresentation,
    ball,
    boundary,
    direct_sum,
    entropy,
    enumerate_oracle,
    finite_quotient,
    fixed_point_log_count,
    folner_box,
    image_dim,
    kernel_basis,
    ledrappier,
    local_kernel_dim,
    quotient_entropy,
    restriction_dim,
    separated_count_oracle,
    window_matrix,
)
from entrobetti.subshift import (
    finite_support_witness,
    random_laurent_matrix,
    random_presentation,
    refine,
    snap_integer,
)
from oracles import box_points, l1_dilate, naive_rank, stencil_solutions, torus_solutions

LED_ROWS = [[[(0, 0), (1, 0), (0, 1)]]]
full2 = SubshiftPresentation.full_shift(1, 2)


def seeds():
    return st.integers(0, 2**32 - 1).map(np.random.default_rng)


# -- local_kernel_dim -----------------------------------------------------------


def test_full_shift_kernel_dim():
    for r, d, n in [(1, 1, 7), (2, 2, 4), (3, 3, 2)]:
        assert local_kernel_dim(SubshiftPresentation.full_shift(r, d), folner_box(n, d)) == r * n**d


def test_ledrappier_kernel_dim_against_enumeration():
    for n in (2, 3, 4):
        count, _, _ = stencil_solutions(LED_ROWS, 1, box_points(n, 2))
        assert count == 2 ** (2 * n - 1)
        assert local_kernel_dim(ledrappier(), folner_box(n, 2)) == 2 * n - 1


def test_ledrappier_kernel_dim_against_naive_rank():
    # the explicit stencil matrix: one row per site whose three dots fit in the box
    for n in range(2, 9):
        pts = sorted(box_points(n, 2))
        where = {p: i for i, p in enumerate(pts)}
        rows = []
        for x, y in pts:
            if x + 1 < n and y + 1 < n:
                row = np.zeros(n * n, np.uint8)
                row[[where[(x, y)], where[(x + 1, y)], where[(x, y + 1)]]] = 1
                rows.append(row)
        assert n * n - naive_rank(np.array(rows)) == 2 * n - 1 == local_kernel_dim(ledrappier(), folner_box(n, 2))


def test_constants_kernel_dim():
    p = SubshiftPresentation.from_strings(1, [["1 + x0"]])
    for n in range(1, 11):
        assert stencil_solutions([[[(0,), (1,)]]], 1, box_points(n, 1))[0] == 2
        assert local_kernel_dim(p, folner_box(n, 1)) == 1


def test_empty_window_and_rank_zero():
    assert local_kernel_dim(ledrappier(), LatticeWindow(2)) == 0
    with pytest.raises(ArgumentError):
        SubshiftPresentation(LaurentMatrix.empty(2, 0))


# -- restriction and image ------------------------------------------------------


def test_restriction_examples():
    w = folner_box(3, 2)
    for m in range(4):
        assert restriction_dim(SubshiftPresentation.full_shift(2, 2), w, m) == 18
    origin = LatticeWindow(2, [(0, 0)])
    for m in range(3):
        # brute force: patterns on the ℓ¹ ball that satisfy the inner relations
        _, sols, pts = stencil_solutions(LED_ROWS, 1, l1_dilate({(0, 0)}, m))
        assert len({s[pts.index((0, 0))] for s in sols}) == 2
    # m = 3 (2^25 candidates) was enumerated once offline: both symbols occur
    for m in range(4):
        assert restriction_dim(ledrappier(), origin, m) == 1
    assert restriction_dim(SubshiftPresentation.zero(1, 2), w, 0) == 0
    with pytest.raises(ArgumentError):
        restriction_dim(ledrappier(), w, -1)


def test_restriction_of_ledrappier_box_by_projection():
    _, sols, pts = stencil_solutions(LED_ROWS, 1, l1_dilate(box_points(2, 2), 1))
    idx = [pts.index(p) for p in sorted(box_points(2, 2))]
    assert len({tuple(s[i] for i in idx) for s in sols}) == 8
    assert restriction_dim(ledrappier(), folner_box(2, 2), 1) == 3


def test_image_dim_examples():
    w = folner_box(3, 2)
    assert image_dim(LaurentMatrix.identity(2, 2), w) == 18
    assert image_dim(LaurentMatrix.zeros(2, 2, 2), w) == 0
    m = LaurentMatrix(1, [["1 + x0"]])
    for n in range(1, 17):
        dense = window_matrix(m, ball(folner_box(n, 1), 1), folner_box(n, 1)).to_dense()
        assert naive_rank(dense) == n == image_dim(m, folner_box(n, 1))


# -- entropy --------------------------------------------------------------------


def test_full_shift_entropy_is_exactly_one():
    for d in (1, 2):
        est = entropy(SubshiftPresentation.full_shift(1, d), [2, 4, 8, 16, 32, 64])
        assert est.values == [1.0] * 6
        assert est.snapped == 1
        assert est.crosscheck == [1.0] * 6


def test_ledrappier_entropy_series():
    est = entropy(ledrappier(), [2, 4, 8, 16, 32])
    assert est.dims == [2 * n - 1 for n in est.schedule]
    assert est.values[-1] == pytest.approx(63 / 1024)
    assert abs(est.values[-1] - 0.0615) < 1e-4
    assert est.snapped == 0
    assert all(a > b for a, b in zip(est.values, est.values[1:]))
    assert all(a > b > 0 for a, b in zip(est.uncertainty, est.uncertainty[1:]))
    assert all(g <= u for g, u in zip(est.crosscheck_gaps(), est.combined_uncertainty()))


def test_zero_subshift_entropy():
    est = entropy(SubshiftPresentation.zero(1, 2), [2, 4, 8])
    assert est.values == [0.0, 0.0, 0.0]
    assert est.snapped == 0


def test_uncertainty_is_boundary_term():
    est = entropy(ledrappier(), [4, 8])
    for n, u in zip(est.schedule, est.uncertainty):
        f = folner_box(n, 2)
        assert u == len(l1_dilate(boundary(f, 1).as_set(), 1)) / n**2


def test_schedule_and_budget_errors():
    with pytest.raises(ArgumentError):
        entropy(ledrappier(), [])
    with pytest.raises(ArgumentError):
        entropy(ledrappier(), [4, 4])
    with pytest.raises(ResourceError) as info:
        entropy(ledrappier(), [8, 64], max_cells=10**6)
    assert info.value.largest_feasible is not None
    entropy(ledrappier(), [info.value.largest_feasible], max_cells=10**6)
    with pytest.raises(ResourceError):
        entropy(ledrappier(), [info.value.largest_feasible + 1], max_cells=10**6)


def test_snap_rule():
    assert snap_integer([0.3]) is None
    assert snap_integer([0.3, 0.2]) == 0
    assert snap_integer([1.3, 1.26]) is None
    assert snap_integer([0.6, 0.2]) is None
    assert snap_integer([2.1, 1.9]) == 2


# -- sums, quotients, fixed points ---------------------------------------------


def test_direct_sum_examples():
    sched = [2, 4, 8, 16]
    assert entropy(direct_sum(full2, full2), sched).values == [2.0] * 4
    led = entropy(ledrappier(), sched).values
    assert entropy(direct_sum(ledrappier(), SubshiftPresentation.zero(1, 2)), sched).values == led
    plus = entropy(direct_sum(ledrappier(), full2), sched).values
    assert plus == [1 + (2 * n - 1) / n**2 for n in sched]
    with pytest.raises(ArgumentError):
        direct_sum(ledrappier(), SubshiftPresentation.full_shift(1, 1))


def test_quotient_entropy_examples():
    sched = [4, 8, 16]
    assert quotient_entropy(ledrappier(), LaurentMatrix.zeros(2, 1, 1), sched).values == [0.0] * 3
    q = quotient_entropy(SubshiftPresentation.full_shift(1, 1), LaurentMatrix(1, [["1 + x0"]]), sched)
    assert q.values == [1 - 1 / n for n in sched]
    assert snap_integer(q.values) == 1
    ff = SubshiftPresentation.full_shift(2, 2)
    q = quotient_entropy(ff, LaurentMatrix(2, [["0", "1"]]), sched)
    assert q.values == [1.0] * 3
    with pytest.raises(ArgumentError):
        quotient_entropy(ff, LaurentMatrix(2, [["1"]]), sched)


def test_fixed_point_examples():
    q = finite_quotient([[3, 0], [0, 3]])
    assert fixed_point_log_count(full2, q) == 9
    assert fixed_point_log_count(SubshiftPresentation.full_shift(1, 1), finite_quotient([[5]])) == 5
    assert fixed_point_log_count(SubshiftPresentation.zero(1, 2), q) == 0
    # exhaustive count on small tori: only the zero pattern on 2×2, four on 3×3
    assert torus_solutions(LED_ROWS, 1, (2, 2)) == 1
    assert fixed_point_log_count(ledrappier(), finite_quotient([[2, 0], [0, 2]])) == 0
    assert torus_solutions(LED_ROWS, 1, (3, 3)) == 4
    assert fixed_point_log_count(ledrappier(), q) == 2
    with pytest.raises(ArgumentError):
        fixed_point_log_count(ledrappier(), finite_quotient([[2]]))


@settings(max_examples=15, deadline=None)
@given(seeds(), st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_fixed_points_match_torus_enumeration(rng, sides):
    p = random_presentation(rng, rows=1, cols=1, radius=1, density=0.5)
    rows = [[sorted(p.relations[0, 0].support)]]
    count = torus_solutions(rows, 1, sides)
    assert 2 ** fixed_point_log_count(p, finite_quotient(np.diag(sides))) == count


# -- oracles --------------------------------------------------------------------


def test_enumerate_oracle_examples():
    assert len(enumerate_oracle(SubshiftPresentation.full_shift(1, 1), folner_box(3, 1))) == 8
    pats = enumerate_oracle(SubshiftPresentation.from_strings(1, [["1 + x0"]]), folner_box(4, 1))
    assert sorted(map(tuple, pats.tolist())) == [(0, 0, 0, 0), (1, 1, 1, 1)]
    assert len(enumerate_oracle(ledrappier(), folner_box(3, 2))) == 32
    with pytest.raises(ResourceError):
        enumerate_oracle(ledrappier(), folner_box(5, 2))


def test_separated_count_examples():
    s = separated_count_oracle(SubshiftPresentation.full_shift(1, 1), 2)
    assert s.count == 4 and s.conclusive
    assert separated_count_oracle(SubshiftPresentation.zero(1, 2), 3).count == 1
    s = separated_count_oracle(ledrappier(), 2)
    assert s.count == 8 and s.log2_count == 3
    assert s.dims_by_margin[:3] == [3, 3, 3]
    with pytest.raises(ArgumentError):
        separated_count_oracle(ledrappier(), 2, epsilon=0.5)


# -- properties -----------------------------------------------------------------


def small_presentation(rng, d=2):
    return random_presentation(rng, d=d, radius=1, density=0.35, max_size=2)


@settings(max_examples=30, deadline=None)
@given(seeds(), st.integers(1, 3))
def test_oracle_equivalence(rng, n):
    p = small_presentation(rng)
    w = folner_box(n, 2)
    if p.r * len(w) <= 16:
        assert len(enumerate_oracle(p, w)) == 2 ** local_kernel_dim(p, w)
        rows = [[sorted(p.relations[i, j].support) for j in range(p.r)] for i in range(p.relations.rows)]
        assert stencil_solutions(rows, p.r, w.as_set())[0] == 2 ** local_kernel_dim(p, w)


@settings(max_examples=20, deadline=None)
@given(seeds(), st.integers(2, 6))
def test_sandwich_and_margin_monotonicity(rng, n):
    p = small_presentation(rng)
    f = folner_box(n, 2)
    kdim = local_kernel_dim(p, f)
    dims = [restriction_dim(p, f, m) for m in range(4)]
    assert dims[0] == kdim
    assert all(a >= b for a, b in zip(dims, dims[1:]))
    for m, rd in enumerate(dims):
        assert kdim - rd <= p.r * len(ball(boundary(f, 1), p.k + m))


@settings(max_examples=20, deadline=None)
@given(seeds(), st.integers(2, 8))
def test_window_rank_nullity(rng, n):
    m = random_laurent_matrix(rng)
    f = folner_box(n, 2)
    big = ball(f, m.support_radius)
    ker = kernel_basis(window_matrix(m, big, f)).rows
    assert ker + image_dim(m, f) == m.cols * len(big)


@settings(max_examples=20, deadline=None)
@given(seeds())
def test_direct_sum_is_exact_per_window(rng):
    a, b = small_presentation(rng), small_presentation(rng)
    s = direct_sum(a, b)
    for n in (2, 3, 5, 8):
        f = folner_box(n, 2)
        assert local_kernel_dim(s, f) == local_kernel_dim(a, f) + local_kernel_dim(b, f)


@settings(max_examples=15, deadline=None)
@given(seeds())
def test_monotone_and_continuous_under_stacking(rng):
    base = small_presentation(rng)
    family = [base]
    for _ in range(3):
        extra = random_laurent_matrix(rng, rows=1, cols=base.r, radius=1, density=0.35)
        family.append(refine(family[-1], extra))
    # repeating the last refinement changes nothing: the family has stabilized
    family.append(refine(family[-1], family[-1].relations))
    sched = [2, 4, 8]
    series = [entropy(p, sched, crosscheck=False).values for p in family]
    for prev, nxt in zip(series, series[1:]):
        assert all(a >= b for a, b in zip(prev, nxt))
    assert series[-1] == series[-2]


def test_finitely_supported_elements_force_positive_entropy():
    cases = [
        SubshiftPresentation.from_strings(2, [["1 + x0 + x1", "1 + x0 + x1"]]),
        SubshiftPresentation.from_strings(1, [["1 + x0", "1 + x0"]]),
        SubshiftPresentation.from_strings(2, [["1 + x0", "x1 + x0*x1"]]),
    ]
    for p in cases:
        w = folner_box(2, p.d)
        v = finite_support_witness(p, w)
        assert v is not None and v.any()
        # the witness really is a global element: the zero extension satisfies every relation
        big = ball(w, p.k)
        pad = np.zeros(p.r * len(big), np.uint8)
        pos = big.index_of(w.points)
        for j in range(p.r):
            pad[j * len(big) + pos] = v[j * len(w):(j + 1) * len(w)]
        rows = [[sorted(p.relations[i, j].support) for j in range(p.r)] for i in range(p.relations.rows)]
        pts = [tuple(x) for x in big.points]
        for row in rows:
            for g in ball(big, p.k).as_set():
                acc = 0
                for j, exps in enumerate(row):
                    for e in exps:
                        q = tuple(a + b for a, b in zip(g, e))
                        if q in pts:
                            acc ^= int(pad[j * len(big) + pts.index(q)])
                assert acc == 0
        est = entropy(p, [4, 8, 16, 32])
        # translates of the witness with disjoint supports are independent,
        # giving at least one free bit per translate of its bounding box
        floor = 1 / len(ball(w, p.k))
        assert all(x >= floor for x in est.values)
    assert finite_support_witness(ledrappier(), folner_box(5, 2)) is None
