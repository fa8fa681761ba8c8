import random
from fractions import Fraction

import pytest

from hocat import _pykernel, linalg
from hocat.linalg import format_q, matmul, nullspace, parse_q, q, rank, rational_str, rref, solve, solve_rows, sparse_solve


def _random_matrix(rng, m, n, density=0.5, size=5):
    return [[rng.randint(-size, size) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]


def test_normalisation_and_formatting():
    assert q(Fraction(4, 2)) == 2 and isinstance(q(Fraction(4, 2)), int)
    assert format_q(Fraction(-1, 2)) == "-1/2"
    assert format_q(3) == 3
    assert rational_str(Fraction(6, 4)) == "3/2"
    assert parse_q("3/6") == Fraction(1, 2)
    assert parse_q("4") == 4


def test_rref_of_small_matrix():
    rows, pivots = rref([[2, 4], [1, 3]])
    assert pivots == [0, 1]
    assert rows == [[1, 0], [0, 1]]


def test_rank_nullspace_relation():
    rng = random.Random(1)
    for _ in range(30):
        m, n = rng.randint(1, 7), rng.randint(1, 7)
        a = _random_matrix(rng, m, n)
        basis = nullspace(a, n)
        assert len(basis) + rank(a, n) == n
        for v in basis:
            assert all(not x for x in linalg.matvec(a, v))


def test_solve_consistent_and_inconsistent():
    a = [[1, 1], [2, 2]]
    assert solve(a, [1, 3], 2) is None
    x = solve(a, [1, 2], 2)
    assert linalg.matvec(a, x) == [1, 2]


def test_solve_rows_reports_uniqueness():
    a = [[1, 0], [0, 1]]
    sols, unique = solve_rows(a, [[3, 4]], 2)
    assert unique and sols == [[3, 4]]
    sols, unique = solve_rows([[1], [1]], [[2]], 2)
    assert not unique and matmul([sols[0]], [[1], [1]]) == [[2]]


def test_sparse_solve_matches_dense():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(1, 6)
        a = _random_matrix(rng, n + 2, n)
        truth = [rng.randint(-3, 3) for _ in range(n)]
        b = linalg.matvec(a, truth)
        eqs = [({j: x for j, x in enumerate(row) if x}, rhs) for row, rhs in zip(a, b)]
        x, nullity = sparse_solve(eqs, n)
        assert linalg.matvec(a, x) == b
        assert nullity == n - rank(a, n)
    assert sparse_solve([({0: 1}, 1), ({0: 1}, 2)], 1) == (None, None)


@pytest.mark.parametrize(
    "shape,size",
    [((12, 12), 5), ((9, 20), 3), ((15, 6), 9), ((10, 10), 10**12)],
    ids=["square", "wide", "tall", "overflow"],
)
def test_selected_kernel_agrees_with_python(shape, size):
    rng = random.Random(3)
    for _ in range(5):
        a = _random_matrix(rng, *shape, density=0.7, size=size)
        left, right = [list(r) for r in a], [list(r) for r in a]
        assert linalg.ff_gauss_jordan(left, shape[1]) == _pykernel.ff_gauss_jordan(right, shape[1])
        assert left == right


def test_kernel_keyword_is_honoured():
    a = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
    assert rank(a, kernel=linalg.python_kernel()) == rank(a) == 3
