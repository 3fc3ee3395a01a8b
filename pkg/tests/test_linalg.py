from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from algfact.linalg import (
    ExactMatrix,
    LinForm,
    components,
    rank,
    rank_and_kernel,
    rank_blocks,
    solve,
    solve_blocks,
    solve_rows,
)
from algfact.scalar import QRational

q = QRational.q()


@st.composite
def sparse_matrices(draw, max_rows=7, max_cols=7):
    nrows = draw(st.integers(1, max_rows))
    ncols = draw(st.integers(1, max_cols))
    entries = draw(st.dictionaries(
        st.tuples(st.integers(0, nrows - 1), st.integers(0, ncols - 1)),
        st.fractions(max_denominator=4).filter(lambda x: x and abs(x) < 6),
        max_size=nrows * ncols,
    ))
    return ExactMatrix(nrows, ncols, entries)


def _sympy(M):
    return sympy.Matrix(M.nrows, M.ncols, lambda i, j: sympy.Rational(M[i, j]))


@settings(max_examples=150, deadline=None)
@given(sparse_matrices())
def test_rank_matches_sympy(M):
    assert rank(M) == _sympy(M).rank()
    assert rank_blocks(M.rows) == rank(M)


@settings(max_examples=100, deadline=None)
@given(sparse_matrices())
def test_rank_nullity(M):
    r, kernel = rank_and_kernel(M)
    assert r + len(kernel) == M.ncols
    for v in kernel:
        assert not M.apply(v)
    if kernel:
        K = sympy.Matrix([[sympy.Rational(v.get(j, 0)) for j in range(M.ncols)] for v in kernel])
        assert K.rank() == len(kernel)


@settings(max_examples=100, deadline=None)
@given(sparse_matrices(), st.lists(st.integers(-3, 3), min_size=7, max_size=7))
def test_solve_consistent_systems(M, y):
    rhs = M.apply({j: Fraction(y[j]) for j in range(M.ncols) if y[j]})
    x = solve(M, rhs)
    assert x is not None
    assert M.apply(x) == {i: c for i, c in rhs.items() if c}
    sol, bad = solve_blocks(M.rows, M.ncols, [rhs.get(i, 0) for i in range(M.nrows)])
    assert bad is None and M.apply(sol) == {i: c for i, c in rhs.items() if c}


@settings(max_examples=100, deadline=None)
@given(sparse_matrices(), st.lists(st.integers(-3, 3), min_size=7, max_size=7))
def test_inconsistency_matches_augmented_rank(M, b):
    rhs = {i: Fraction(b[i]) for i in range(M.nrows) if b[i]}
    S = _sympy(M)
    aug = S.row_join(sympy.Matrix([sympy.Rational(rhs.get(i, 0)) for i in range(M.nrows)]))
    consistent = aug.rank() == S.rank()
    x = solve(M, rhs)
    assert (x is not None) == consistent
    sol, bad = solve_blocks(M.rows, M.ncols, [rhs.get(i, 0) for i in range(M.nrows)])
    assert (sol is not None) == consistent
    if not consistent:
        assert bad is not None


def test_rational_function_entries():
    M = ExactMatrix.from_rows([{0: 2, 1: q}, {0: 1, 1: 3}], 2)
    assert rank(M) == 2
    rhs = {0: 1, 1: 3}
    x = solve(M, rhs)
    assert M.apply(x) == rhs
    # rank drops exactly at q = 6
    M6 = ExactMatrix.from_rows([{0: 2, 1: 6}, {0: 1, 1: 3}], 2)
    assert rank(M6) == 1
    r, kernel = rank_and_kernel(ExactMatrix.from_rows([{0: 2, 1: q}], 2))
    assert r == 1 and kernel == [{1: 1, 0: -q / 2}]


def test_inconsistent_row_is_reported():
    rows = [{0: 1}, {0: 2}]
    sol, bad = solve_rows(rows, 1, [1, 1])
    assert sol is None and bad == 1


def test_components_split_disjoint_supports():
    rows = [{0: 1}, {2: 1}, {0: 1, 1: 1}, {}, {3: 1, 2: 1}]
    assert components(rows) == [[0, 2], [1, 4], [3]]


def test_triplet_round_trip():
    M = ExactMatrix(2, 3, {(0, 1): Fraction(1, 2), (1, 2): -3})
    assert ExactMatrix.from_triplets(M.to_triplets()) == M
    assert M.to_dense() == [[0, Fraction(1, 2), 0], [0, 0, -3]]


def test_linform_arithmetic():
    x, y = LinForm.var("x"), LinForm.var("y")
    e = 2 * x - y + x * 3
    assert e == LinForm({"x": 5, "y": -1})
    assert not (x - x)
