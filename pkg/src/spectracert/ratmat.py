"""Exact rational dense linear algebra for symmetric-matrix feasibility work.

Everything here operates on ``fractions.Fraction`` entries, so all decisions
(psd-ness, rank, congruence identities) are exact.  Matrices are immutable
tuples of tuples and safe to share between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, str, Fraction]


class RatmatError(Exception):
    """Base class for exact linear algebra failures."""


class IndefinitePivotError(RatmatError):
    """Raised when a pivoted LDL^T run proves the input is not psd."""

    def __init__(self, index: int, value: Fraction, reason: str):
        self.index = index
        self.value = value
        super().__init__(f"pivot {index} ({reason}, value {value}) shows the matrix is not psd")


class SingularMatrixError(RatmatError):
    """Raised when an operation requires an invertible matrix."""


class NotPsdError(RatmatError):
    """Raised when a psd input precondition fails."""


class InfeasibleProjectionError(RatmatError):
    """Raised when affine projection constraints are mutually inconsistent."""


def as_fraction(x: Scalar) -> Fraction:
    """Coerce ints, rational strings like ``-3/4`` and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        # Lossless binary expansion; used to wrap float-mode data only.
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational scalar")


def format_fraction(x: Fraction) -> str:
    """Render as ``p/q``, or just ``p`` when the denominator is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable dense rational matrix."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        data = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[0] * ncols for _ in range(nrows)])

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> "Matrix":
        vals = [as_fraction(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_fraction(x) for x in row) for row in self.rows)
        return f"{type(self).__name__}([{body}])"

    def __add__(self, other: "Matrix") -> "Matrix":
        return type(self)([
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)
        ])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return type(self)([
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)
        ])

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "Matrix":
        c = as_fraction(c)
        return type(self)([[c * x for x in row] for row in self.rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        return Matrix([
            [sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.rows
        ])

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows)) if self.rows else Matrix([])

    def matvec(self, v: Sequence[Scalar]) -> tuple[Fraction, ...]:
        vec = [as_fraction(x) for x in v]
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def det(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        a = [list(row) for row in self.rows]
        det = Fraction(1)
        for k in range(n):
            pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != k:
                a[k], a[pivot] = a[pivot], a[k]
                det = -det
            det *= a[k][k]
            inv = 1 / a[k][k]
            for i in range(k + 1, n):
                f = a[i][k] * inv
                if f == 0:
                    continue
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        return det

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise SingularMatrixError("non-square matrix has no inverse")
        n = self.nrows
        a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self.rows)]
        for k in range(n):
            pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
            if pivot is None:
                raise SingularMatrixError("matrix is singular")
            a[k], a[pivot] = a[pivot], a[k]
            inv = 1 / a[k][k]
            a[k] = [x * inv for x in a[k]]
            for i in range(n):
                if i == k or a[i][k] == 0:
                    continue
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return Matrix([row[n:] for row in a])

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in row] for row in self.rows], dtype=float)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.rows]


class SymMatrix(Matrix):
    """Square rational matrix with exact symmetry enforced at construction."""

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        super().__init__(rows)
        n = self.nrows
        if n != self.ncols:
            raise ValueError("symmetric matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if self.rows[i][j] != self.rows[j][i]:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) differ")

    @property
    def order(self) -> int:
        return self.nrows

    @classmethod
    def from_matrix(cls, m: Matrix) -> "SymMatrix":
        return cls(m.rows)

    def dot(self, other: "SymMatrix") -> Fraction:
        """Trace inner product of symmetric matrices."""
        return sum(
            a * b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def principal_submatrix(self, indices: Sequence[int]) -> "SymMatrix":
        return SymMatrix([[self.rows[i][j] for j in indices] for i in indices])

    def lower_right(self, r: int) -> "SymMatrix":
        """Trailing (n-r) x (n-r) principal block."""
        return self.principal_submatrix(range(r, self.order))


@dataclass(frozen=True)
class Inertia:
    """Signature of a symmetric matrix: eigenvalue sign counts."""

    positive: int
    negative: int
    zero: int


@dataclass(frozen=True)
class LdltFactorization:
    """Pivoted LDL^T data with P^T A P == L D L^T holding exactly.

    ``permutation[j]`` is the original index moved into pivot slot j.  Only
    1x1 pivots appear: the factorization is defined for psd inputs and the
    driver rejects anything else.
    """

    permutation: tuple[int, ...]
    unit_lower: Matrix
    diagonal: tuple[Fraction, ...]

    def reconstruct(self) -> SymMatrix:
        """Recompute A = P L D L^T P^T for verification."""
        n = len(self.permutation)
        l = self.unit_lower
        d = self.diagonal
        core = [
            [sum(l[(i, k)] * d[k] * l[(j, k)] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        out = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                out[self.permutation[a]][self.permutation[b]] = core[a][b]
        return SymMatrix(out)

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def ldlt(a: SymMatrix) -> LdltFactorization:
    """Pivoted LDL^T of a psd matrix, exact over the rationals.

    Pivot rule: take the first remaining nonnegative nonzero diagonal entry.
    A negative diagonal, or an all-zero remaining diagonal with a nonzero
    off-diagonal entry, certifies that the input is not psd and raises
    IndefinitePivotError.  Both rejections are exact, so no 2x2 pivots are
    ever needed.
    """
    n = a.order
    work = [list(row) for row in a.rows]
    order = list(range(n))
    lower = [[Fraction(0)] * n for _ in range(n)]
    diag: list[Fraction] = []

    for k in range(n):
        pivot = None
        for i in range(k, n):
            v = work[i][i]
            if v > 0:
                pivot = i
                break
            if v < 0:
                raise IndefinitePivotError(order[i], v, "negative pivot")
        if pivot is None:
            # Remaining diagonal is all zero; psd forces the block to vanish.
            for i in range(k, n):
                for j in range(i + 1, n):
                    if work[i][j] != 0:
                        raise IndefinitePivotError(
                            order[i], Fraction(0), "zero pivot with nonzero row"
                        )
            for i in range(k, n):
                lower[i][i] = Fraction(1)
                diag.append(Fraction(0))
            break
        if pivot != k:
            order[k], order[pivot] = order[pivot], order[k]
            work[k], work[pivot] = work[pivot], work[k]
            for row in work:
                row[k], row[pivot] = row[pivot], row[k]
            lower[k], lower[pivot] = lower[pivot], lower[k]
        p = work[k][k]
        diag.append(p)
        lower[k][k] = Fraction(1)
        for i in range(k + 1, n):
            lower[i][k] = work[i][k] / p
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] -= work[i][k] * work[j][k] / p

    return LdltFactorization(tuple(order), Matrix(lower), tuple(diag))


def is_psd(a: SymMatrix) -> bool:
    """Exact positive semidefiniteness test via pivoted LDL^T."""
    try:
        ldlt(a)
    except IndefinitePivotError:
        return False
    return True


def is_pd(a: SymMatrix) -> bool:
    """Exact positive definiteness test."""
    try:
        f = ldlt(a)
    except IndefinitePivotError:
        return False
    return f.rank == a.order


def rank(a: Matrix) -> int:
    """Exact rank by fraction-free (Bareiss) Gaussian elimination.

    Rows are rescaled to integers first; rescaling by positive integers does
    not change the rank.
    """
    if not a.rows or a.ncols == 0:
        return 0
    m = []
    for row in a.rows:
        scale = math.lcm(*(x.denominator for x in row))
        m.append([int(x * scale) for x in row])
    nr, nc = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(nc):
        pivot = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == nr:
            break
    return r


def inertia(a: SymMatrix) -> Inertia:
    """Exact inertia via symmetric elimination.

    Uses 1x1 pivots while a nonzero diagonal entry exists; when the remaining
    diagonal is zero but the block is not, a hyperbolic 2x2 pivot contributes
    one positive and one negative eigenvalue.  Correct for every symmetric
    rational matrix by Sylvester's law.
    """
    work = [list(row) for row in a.rows]
    active = list(range(a.order))
    pos = neg = zero = 0

    def eliminate_one(idx: int):
        p = work[idx][idx]
        others = [i for i in active if i != idx]
        for i in others:
            f = work[i][idx] / p
            if f == 0:
                continue
            for j in others:
                work[i][j] -= f * work[idx][j]
        active.remove(idx)

    while active:
        diag_idx = next((i for i in active if work[i][i] != 0), None)
        if diag_idx is not None:
            if work[diag_idx][diag_idx] > 0:
                pos += 1
            else:
                neg += 1
            eliminate_one(diag_idx)
            continue
        off = next(
            ((i, j) for i in active for j in active if i < j and work[i][j] != 0),
            None,
        )
        if off is None:
            zero += len(active)
            break
        i, j = off
        # 2x2 block [[0, a], [a, 0]] has one eigenvalue of each sign.
        pos += 1
        neg += 1
        av = work[i][j]
        others = [t for t in active if t not in (i, j)]
        for s in others:
            fi = work[s][j] / av
            fj = work[s][i] / av
            for t in others:
                work[s][t] -= fi * work[i][t] + fj * work[j][t]
                # Subtracting both cross terms; the (i,j) pivot block inverse
                # is [[0, 1/a], [1/a, 0]].
        active.remove(i)
        active.remove(j)

    return Inertia(pos, neg, zero)


def congruence(a: SymMatrix, v: Matrix) -> SymMatrix:
    """Exact congruence transform V^T A V with an invertibility check."""
    if v.nrows != v.ncols or v.nrows != a.order:
        raise ValueError("rotation matrix has wrong shape")
    if v.det() == 0:
        raise SingularMatrixError("rotation matrix is singular")
    return SymMatrix.from_matrix(v.T @ a @ v)


def psd_block_diagonalize(w: SymMatrix) -> tuple[Matrix, int]:
    """Find invertible rational Q with Q^T W Q = diag(d_1..d_r, 0..0), d_j > 0.

    W must be psd; r is its rank.  Built from the LDL^T factors: with
    P^T W P = L D L^T the choice Q = P L^{-T} gives Q^T W Q = D, and the
    pivot strategy in ``ldlt`` emits the positive entries of D first.
    """
    try:
        f = ldlt(w)
    except IndefinitePivotError as e:
        raise NotPsdError(str(e)) from e
    n = w.order
    l_inv_t = f.unit_lower.inverse().T
    perm = Matrix([
        [1 if f.permutation[j] == i else 0 for j in range(n)] for i in range(n)
    ])
    q = perm @ l_inv_t
    r = f.rank
    if any(x != 0 for x in f.diagonal[r:]) or any(x <= 0 for x in f.diagonal[:r]):
        raise NotPsdError("pivot ordering failed to sort positive entries first")
    return q, r


def rationalize(x: float, max_denominator: int) -> Fraction:
    """Best rational approximation of x with denominator <= max_denominator."""
    if not math.isfinite(x):
        raise ValueError("cannot rationalize a non-finite float")
    if max_denominator < 1:
        raise ValueError("max_denominator must be positive")
    return Fraction(x).limit_denominator(max_denominator)


def project_affine(
    v: Sequence[Scalar],
    constraints: Sequence[tuple[Sequence[Scalar], Scalar]],
) -> tuple[Fraction, ...]:
    """Exact orthogonal projection of v onto the affine set {u : a_i^T u = c_i}.

    Dependent but consistent constraint rows are filtered out; inconsistent
    constraints raise InfeasibleProjectionError.
    """
    vec = [as_fraction(x) for x in v]
    rows = [[as_fraction(x) for x in a] for a, _ in constraints]
    rhs = [as_fraction(c) for _, c in constraints]
    if not rows:
        return tuple(vec)
    if any(len(r) != len(vec) for r in rows):
        raise ValueError("constraint length mismatch")

    keep = _independent_rows(rows)
    if len(keep) < len(rows):
        # Dropped rows must be implied by the kept ones, else no solution.
        sol = solve_linear([rows[i] for i in keep], [rhs[i] for i in keep])
        if sol is None:
            raise InfeasibleProjectionError("constraints are inconsistent")
        for i in range(len(rows)):
            if i not in keep and sum(a * s for a, s in zip(rows[i], sol)) != rhs[i]:
                raise InfeasibleProjectionError("constraints are inconsistent")
        rows = [rows[i] for i in keep]
        rhs = [rhs[i] for i in keep]

    k = len(rows)
    gram = [[sum(a * b for a, b in zip(rows[i], rows[j])) for j in range(k)] for i in range(k)]
    resid = [rhs[i] - sum(a * x for a, x in zip(rows[i], vec)) for i in range(k)]
    lam = solve_linear(gram, resid)
    if lam is None:
        raise InfeasibleProjectionError("constraints are inconsistent")
    out = list(vec)
    for i in range(k):
        if lam[i] == 0:
            continue
        for j in range(len(out)):
            out[j] += lam[i] * rows[i][j]
    return tuple(out)


def _independent_rows(rows: list[list[Fraction]]) -> list[int]:
    """Indices of a maximal exactly-independent subset, in input order."""
    keep: list[int] = []
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        r = list(row)
        for b, p in zip(basis, pivots):
            if r[p] != 0:
                f = r[p] / b[p]
                r = [x - f * y for x, y in zip(r, b)]
        piv = next((j for j, x in enumerate(r) if x != 0), None)
        if piv is None:
            continue
        keep.append(idx)
        basis.append(r)
        pivots.append(piv)
    return keep


def solve_linear(
    a_rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]
) -> tuple[Fraction, ...] | None:
    """One exact solution of A x = rhs, or None when inconsistent.

    Free variables are set to zero.
    """
    rows = [[as_fraction(x) for x in r] for r in a_rows]
    b = [as_fraction(x) for x in rhs]
    if not rows:
        return ()
    nc = len(rows[0])
    aug = [row + [bv] for row, bv in zip(rows, b)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(nc):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, len(aug)):
        if aug[i][nc] != 0:
            return None
    x = [Fraction(0)] * nc
    for pr, pc in pivots:
        x[pc] = aug[pr][nc]
    return tuple(x)


def nullspace(a_rows: Sequence[Sequence[Scalar]], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Exact basis of {x : A x = 0}."""
    rows = [[as_fraction(x) for x in r] for r in a_rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty constraint set")
        ncols = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    aug = [list(r) for r in rows]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for pr, pc in pivots:
            vec[pc] = -aug[pr][free]
        basis.append(tuple(vec))
    return basis
