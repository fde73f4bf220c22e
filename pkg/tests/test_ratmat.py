"""Exact linear algebra tests, including brute-force oracles."""
from fractions import Fraction
from itertools import combinations, product
import random

import pytest

from spectracert.ratmat import (
    IndefinitePivotError,
    InfeasibleProjectionError,
    Matrix,
    NotPsdError,
    SingularMatrixError,
    SymMatrix,
    congruence,
    inertia,
    is_psd,
    ldlt,
    nullspace,
    project_affine,
    psd_block_diagonalize,
    rank,
    rationalize,
    solve_linear,
)


def _minor_rank(m: Matrix) -> int:
    """Oracle: rank as the largest k with a nonzero k x k minor."""
    nr, nc = m.nrows, m.ncols
    for k in range(min(nr, nc), 0, -1):
        for rows in combinations(range(nr), k):
            for cols in combinations(range(nc), k):
                sub = Matrix([[m[(i, j)] for j in cols] for i in rows])
                if sub.det() != 0:
                    return k
    return 0


def _psd_oracle(a: SymMatrix) -> bool:
    """Oracle: psd iff every principal minor is nonnegative."""
    n = a.order
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if a.principal_submatrix(idx).det() < 0:
                return False
    return True


def test_ldlt_identity():
    f = ldlt(SymMatrix.identity(3))
    assert f.unit_lower == Matrix.identity(3)
    assert f.diagonal == (1, 1, 1)
    assert f.reconstruct() == SymMatrix.identity(3)


def test_ldlt_rank_one():
    a = SymMatrix([[1, 1], [1, 1]])
    f = ldlt(a)
    assert f.diagonal == (1, 0)
    assert f.unit_lower == Matrix([[1, 0], [1, 1]])
    assert f.reconstruct() == a


def test_ldlt_rejects_zero_pivot_with_nonzero_row():
    with pytest.raises(IndefinitePivotError):
        ldlt(SymMatrix([[0, 1], [1, 0]]))


def test_ldlt_reconstruction_on_random_psd():
    rng = random.Random(7)
    for n in range(1, 6):
        for _ in range(20):
            g = Matrix([
                [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)]
                for _ in range(n)
            ])
            a = SymMatrix.from_matrix(g @ g.T)
            assert ldlt(a).reconstruct() == a


def test_is_psd_known_cases():
    assert is_psd(SymMatrix.diagonal([1, 0, 0]))
    assert is_psd(SymMatrix([[4, 2, 0], [2, 1, 0], [0, 0, 1]]))
    assert not is_psd(SymMatrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]]))


def test_is_psd_matches_minor_oracle_exhaustively():
    vals = [-2, -1, 0, 1, 2]
    for n in (1, 2, 3):
        positions = [(i, j) for i in range(n) for j in range(i, n)]
        for combo in product(vals, repeat=len(positions)):
            rows = [[0] * n for _ in range(n)]
            for (i, j), v in zip(positions, combo):
                rows[i][j] = v
                rows[j][i] = v
            a = SymMatrix(rows)
            assert is_psd(a) == _psd_oracle(a), f"mismatch at {rows}"


def test_rank_basics():
    assert rank(Matrix.zeros(4, 4)) == 0
    assert rank(SymMatrix.diagonal([0, 0, 1, 1])) == 2


def test_rank_matches_minor_expansion_oracle():
    rng = random.Random(11)
    r = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
    dependent = Matrix([r, r, [2 * x for x in r]])
    assert rank(dependent) == _minor_rank(dependent) == 1
    for _ in range(25):
        m = Matrix([
            [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(4)]
            for _ in range(3)
        ])
        assert rank(m) == _minor_rank(m)


def test_congruence_identity_and_round_trip():
    a = SymMatrix([[2, 1, 0], [1, -1, 3], [0, 3, 5]])
    assert congruence(a, Matrix.identity(3)) == a
    v = Matrix([[1, 2, 0], [0, 1, 1], [1, 0, 1]])
    assert congruence(congruence(a, v), v.inverse()) == a


def test_congruence_diagonalizes_first_reduction_combo():
    w = SymMatrix([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    q = Matrix([[1, -1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert congruence(w, q) == SymMatrix.diagonal([1, 0, 0, 0])


def test_congruence_rejects_singular():
    with pytest.raises(SingularMatrixError):
        congruence(SymMatrix.identity(2), Matrix([[1, 1], [1, 1]]))


def test_congruence_preserves_inertia():
    rng = random.Random(3)
    for n in range(2, 6):
        for _ in range(10):
            a = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    a[j][i] = a[i][j]
            sym = SymMatrix(a)
            while True:
                v = Matrix([
                    [Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)
                ])
                if v.det() != 0:
                    break
            assert inertia(congruence(sym, v)) == inertia(sym)


def test_inertia_counts():
    assert inertia(SymMatrix.diagonal([3, -1, 0])) == inertia(SymMatrix.diagonal([5, 0, -2]))
    ine = inertia(SymMatrix([[0, 1], [1, 0]]))
    assert (ine.positive, ine.negative, ine.zero) == (1, 1, 0)


def test_psd_block_diagonalize_identity():
    q, r = psd_block_diagonalize(SymMatrix.identity(4))
    assert r == 4
    assert q == Matrix.identity(4)


def test_psd_block_diagonalize_matches_known_rotation():
    w = SymMatrix([[1, 2, 0], [2, 4, 0], [0, 0, 0]])
    q, r = psd_block_diagonalize(w)
    assert r == 1
    assert q == Matrix([[1, -2, 0], [0, 1, 0], [0, 0, 1]])
    assert congruence(w, q) == SymMatrix.diagonal([1, 0, 0])


def test_psd_block_diagonalize_rank_one():
    w = SymMatrix([[1, 1], [1, 1]])
    q, r = psd_block_diagonalize(w)
    assert r == 1
    assert q == Matrix([[1, -1], [0, 1]])
    assert congruence(w, q) == SymMatrix.diagonal([1, 0])


def test_psd_block_diagonalize_shape_property():
    rng = random.Random(19)
    for n in range(1, 6):
        for _ in range(15):
            k = rng.randint(0, n)
            g = Matrix([
                [Fraction(rng.randint(-2, 2)) for _ in range(k)] for _ in range(n)
            ])
            w = SymMatrix.from_matrix(g @ g.T) if k else SymMatrix.zeros(n, n)
            q, r = psd_block_diagonalize(w)
            assert q.det() != 0
            d = congruence(w, q)
            for i in range(n):
                for j in range(n):
                    if i != j:
                        assert d[(i, j)] == 0
                    elif i < r:
                        assert d[(i, i)] > 0
                    else:
                        assert d[(i, i)] == 0
            assert r == rank(w)


def test_psd_block_diagonalize_rejects_indefinite():
    with pytest.raises(NotPsdError):
        psd_block_diagonalize(SymMatrix([[0, 1], [1, 0]]))


def test_rationalize_simple():
    assert rationalize(0.5, 10) == Fraction(1, 2)
    assert rationalize(-1.0, 10) == Fraction(-1)


def test_rationalize_matches_enumeration_oracle():
    x = 0.333334
    best = min(
        (Fraction(p, q) for q in range(1, 101) for p in range(-200, 201)),
        key=lambda f: (abs(x - float(f)), f.denominator),
    )
    assert best == Fraction(1, 3)
    assert rationalize(x, 100) == Fraction(1, 3)


def test_rationalize_is_best_approximant():
    rng = random.Random(23)
    for _ in range(40):
        x = rng.uniform(-3, 3)
        m = rng.randint(1, 40)
        got = rationalize(x, m)
        assert got.denominator <= m
        for q in range(1, m + 1):
            p = round(x * q)
            assert abs(x - float(got)) <= abs(x - p / q) + 1e-15


def test_project_affine_examples():
    assert project_affine([1, 1], [([1, 1], 0)]) == (0, 0)
    assert project_affine([1, 0], [([0, 1], 0)]) == (1, 0)
    assert project_affine([2, 1, 1], [([1, -1, 0], 0)]) == (
        Fraction(3, 2),
        Fraction(3, 2),
        Fraction(1),
    )


def test_project_affine_satisfies_constraints_and_optimality():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(2, 5)
        v = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)]
        a = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        if all(x == 0 for x in a):
            a[0] = Fraction(1)
        c = Fraction(rng.randint(-2, 2))
        u = project_affine(v, [(a, c)])
        assert sum(x * y for x, y in zip(a, u)) == c
        # Residual must be orthogonal to the constraint's null directions.
        diff = [x - y for x, y in zip(u, v)]
        for basis_vec in nullspace([a]):
            assert sum(d * z for d, z in zip(diff, basis_vec)) == 0


def test_project_affine_inconsistent():
    with pytest.raises(InfeasibleProjectionError):
        project_affine([0, 0], [([1, 1], 0), ([2, 2], 1)])


def test_solve_linear_and_nullspace():
    sol = solve_linear([[1, 2], [3, 4]], [5, 6])
    assert sol is not None
    assert sol[0] + 2 * sol[1] == 5 and 3 * sol[0] + 4 * sol[1] == 6
    assert solve_linear([[1, 1], [1, 1]], [0, 1]) is None
    basis = nullspace([[1, 1, 0]])
    assert len(basis) == 2
    for vec in basis:
        assert vec[0] + vec[1] == 0
