import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entrobetti import (
    ArgumentError,
    BitMatrix,
    LaurentMatrix,
    LaurentPoly,
    SubshiftPresentation,
    adjoint,
    ball,
    box,
    finite_quotient,
    fold,
    folner_box,
    local_kernel_dim,
    rank,
    stack,
    support_radius,
    window_matrix,
)
from entrobetti.io import parse_poly
from entrobetti.laurent import format_poly
from oracles import box_points, stencil_solutions

exps2 = st.tuples(st.integers(-2, 2), st.integers(-2, 2))
polys2 = st.frozensets(exps2, max_size=4).map(lambda s: LaurentPoly(2, s))


@st.composite
def matrices(draw, rows=None, cols=None):
    s = draw(st.integers(1, 3)) if rows is None else rows
    r = draw(st.integers(1, 3)) if cols is None else cols
    return LaurentMatrix(2, [[draw(polys2) for _ in range(r)] for _ in range(s)], s, r)


def window_oracle(m, domain, codomain):
    """Entry ((i,γ),(j,δ)) is 1 iff δ − γ is an exponent of m[i,j]."""
    dom = sorted(domain.as_set())
    cod = sorted(codomain.as_set())
    out = np.zeros((m.rows * len(cod), m.cols * len(dom)), np.uint8)
    for i in range(m.rows):
        for j in range(m.cols):
            supp = m[i, j].support
            for a, g in enumerate(cod):
                for b, dlt in enumerate(dom):
                    if tuple(x - y for x, y in zip(dlt, g)) in supp:
                        out[i * len(cod) + a, j * len(dom) + b] = 1
    return out


def lift_matrix(fine, coarse, layers):
    """Pull back Λ-periodic configurations to Λ'-periodic ones, Λ' ⊂ Λ."""
    p = np.zeros((fine.index, coarse.index), np.uint8)
    p[np.arange(fine.index), coarse.reduce_index(fine.representatives)] = 1
    return np.kron(np.eye(layers, dtype=np.uint8), p)


# -- examples -------------------------------------------------------------------


def test_adjoint_examples():
    one = LaurentMatrix(1, [["1"]])
    assert adjoint(one) == one
    assert adjoint(LaurentMatrix(1, [["x0"]])) == LaurentMatrix(1, [["x0^-1"]])
    a = adjoint(LaurentMatrix(2, [["1 + x0", "x1"]]))
    assert a.shape == (2, 1)
    assert a == LaurentMatrix(2, [["1 + x0^-1"], ["x1^-1"]])


def test_window_matrix_examples():
    w = box([0, 0], [2, 3])
    assert window_matrix(LaurentMatrix.identity(2, 1), w, w) == BitMatrix.identity(6)
    m = window_matrix(LaurentMatrix(1, [["1 + x0"]]), folner_box(3, 1), folner_box(2, 1))
    assert m.to_dense().tolist() == [[1, 1, 0], [0, 1, 1]]
    z = window_matrix(LaurentMatrix.zeros(2, 2, 3), folner_box(2, 2), folner_box(3, 2))
    assert z.shape == (2 * 9, 3 * 4) and not z.to_dense().any()


def test_window_matrix_dimension_mismatch():
    with pytest.raises(ArgumentError):
        window_matrix(LaurentMatrix(1, [["1"]]), folner_box(2, 2), folner_box(2, 2))


def test_fold_examples():
    q = finite_quotient([[2, 0], [0, 3]])
    assert fold(LaurentMatrix.identity(2, 2), q) == BitMatrix.identity(12)
    c = fold(LaurentMatrix(1, [["1 + x0"]]), finite_quotient([[3]]))
    assert c.to_dense().tolist() == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    z = fold(LaurentMatrix(1, [["1 + x0"]]), finite_quotient([[1]]))
    assert z.to_dense().tolist() == [[0]]
    with pytest.raises(ArgumentError):
        fold(LaurentMatrix(1, [["1"]]), q)


def test_support_radius_examples():
    assert support_radius(LaurentMatrix(2, [["1 + x0 + x1"]])) == 1
    assert support_radius(LaurentMatrix(2, [["x0^2*x1"]])) == 3
    assert support_radius(LaurentMatrix.zeros(2, 2, 2)) == 0
    assert support_radius(LaurentMatrix(2, [["x0^-1*x1^-2 + 1"]])) == 3


def test_stack_examples():
    led = LaurentMatrix(2, [["1 + x0 + x1"]])
    for n in (2, 3, 4):
        w = folner_box(n, 2)
        base = local_kernel_dim(SubshiftPresentation(led), w)
        assert local_kernel_dim(SubshiftPresentation(stack(LaurentMatrix.zeros(2, 1, 1), led)), w) == base
        assert local_kernel_dim(SubshiftPresentation(stack(led, led)), w) == base
    both = stack(LaurentMatrix(2, [["1 + x0"]]), LaurentMatrix(2, [["1 + x1"]]))
    for n in (2, 3):
        count, sols, _ = stencil_solutions([[[(0, 0), (1, 0)]], [[(0, 0), (0, 1)]]], 1, box_points(n, 2))
        # only the two constant patterns survive
        assert count == 2 and {frozenset(s) for s in sols} == {frozenset({0}), frozenset({1})}
        assert 2 ** local_kernel_dim(SubshiftPresentation(both), folner_box(n, 2)) == count
    with pytest.raises(ArgumentError):
        stack(led, LaurentMatrix.identity(2, 2))


def test_polynomial_arithmetic():
    x = LaurentPoly.var(2, 0)
    y = LaurentPoly.var(2, 1)
    one = LaurentPoly.one(2)
    assert (one + x) * (one + x) == one + x * x
    assert (one + x + y) ** 2 == one + x**2 + y**2
    assert x * x.involution() == one
    assert str(one + x + y) == "1 + x1 + x0"
    assert format_poly(LaurentPoly(1, [(-1,), (0,)])) == "x0^-1 + 1"


def test_parse_poly_forms():
    assert parse_poly("0", 2) == LaurentPoly.zero(2)
    assert parse_poly("1 + 1", 2) == LaurentPoly.zero(2)
    assert parse_poly("x0*x1^-2", 2) == LaurentPoly(2, [(1, -2)])
    with pytest.raises(ArgumentError):
        parse_poly("x2", 2)
    with pytest.raises(ArgumentError):
        parse_poly("3*x0", 2)


# -- properties -----------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(polys2)
def test_poly_text_round_trip(p):
    assert parse_poly(format_poly(p), 2) == p


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_adjoint_is_involution(m):
    assert adjoint(adjoint(m)) == m
    assert adjoint(m).shape == (m.cols, m.rows)
    assert support_radius(adjoint(m)) == support_radius(m)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_adjoint_reverses_products_and_windows_compose(data):
    a = data.draw(matrices())
    b = data.draw(matrices(cols=None, rows=a.cols))
    assert adjoint(a @ b) == adjoint(b) @ adjoint(a)
    c = folner_box(2, 2)
    mid = ball(c, a.support_radius)
    dom = ball(mid, b.support_radius)
    assert window_matrix(a @ b, dom, c) == window_matrix(a, mid, c) @ window_matrix(b, dom, mid)


@settings(max_examples=25, deadline=None)
@given(matrices(), st.integers(1, 3), st.integers(1, 3), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_window_matrix_matches_oracle_and_is_translation_covariant(m, n1, n2, t):
    dom = box([-1, -1], [n1 + 1, n2 + 1])
    cod = box([0, 0], [n1, n2])
    w = window_matrix(m, dom, cod)
    assert np.array_equal(w.to_dense(), window_oracle(m, dom, cod))
    assert window_matrix(m, dom.translate(t), cod.translate(t)) == w


@settings(max_examples=25, deadline=None)
@given(matrices(), st.integers(1, 3))
def test_transpose_rank_symmetry(m, n):
    c = folner_box(n, 2)
    d = ball(c, m.support_radius)
    assert rank(window_matrix(m, d, c)) == rank(window_matrix(adjoint(m), c, d))


@settings(max_examples=25, deadline=None)
@given(matrices())
def test_fold_commutes_with_refinement(m):
    for fine_b, coarse_b in [
        ([[4, 0], [0, 4]], [[2, 0], [0, 2]]),
        ([[6, 0], [0, 2]], [[3, 0], [0, 1]]),
        ([[4, 2], [0, 2]], [[2, 0], [0, 2]]),
    ]:
        fine, coarse = finite_quotient(fine_b), finite_quotient(coarse_b)
        lhs = fold(m, fine).to_dense().astype(int) @ lift_matrix(fine, coarse, m.cols)
        rhs = lift_matrix(fine, coarse, m.rows).astype(int) @ fold(m, coarse).to_dense()
        assert np.array_equal(lhs % 2, rhs % 2)


@settings(max_examples=20, deadline=None)
@given(matrices())
def test_fold_matches_wrapped_stencil(m):
    q = finite_quotient([[3, 0], [0, 2]])
    reps = [tuple(p) for p in q.representatives]
    want = np.zeros((m.rows * 6, m.cols * 6), np.uint8)
    for i in range(m.rows):
        for j in range(m.cols):
            for a, g in enumerate(reps):
                for e in m[i, j].support:
                    tgt = ((g[0] + e[0]) % 3, (g[1] + e[1]) % 2)
                    want[i * 6 + a, j * 6 + reps.index(tgt)] ^= 1
    assert np.array_equal(fold(m, q).to_dense(), want)
