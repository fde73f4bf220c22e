"""Floating-point solver for the homogeneous facial-reduction subproblems.

All three entry points (:func:`solve_aux`, :func:`solve_hom`,
:func:`solve_farkas`) reduce to one primitive: decide whether a linear
subspace of block-diagonal symmetric matrices meets the interior of the psd
cone, and produce either an interior point or a separating psd element of the
orthogonal complement.  The primitive is solved as the eigenvalue-shift SDP

    maximize t   s.t.   Z0 + sum_j u_j B_j - t*I  psd,

whose primal and dual are both strictly feasible by construction, with a
Nesterov-Todd primal-dual path-following method.  Scalar cones (the
homogenized variable, trace slacks) ride along as 1x1 blocks.

Faces with n - r <= 1 are decided by exact rational case analysis instead of
floating point; those outcomes carry exact multiplier vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

import numpy as np

from . import ratmat
from .ratmat import Matrix, SymMatrix

if TYPE_CHECKING:  # pragma: no cover - typing only, avoids a module cycle
    from .reduce import SdpSystem


STRICTLY_FEASIBLE = "strictly_feasible"
DUAL_RAY = "dual_ray"
NUMERIC_FAILURE = "numeric_failure"


@dataclass(frozen=True)
class ToleranceProfile:
    """Numeric thresholds for the float solver, overridable from the CLI."""

    eq: float = 1e-9
    pd: float = 1e-9
    rank: float = 1e-7
    max_iters: int = 200
    gap: float = 1e-12


@dataclass(frozen=True)
class FaceDescriptor:
    """The face 0 (+) S_+^(n-r): leading r rows and columns pinned to zero."""

    n: int
    r: int

    def __post_init__(self):
        if not 0 <= self.r <= self.n:
            raise ValueError("face requires 0 <= r <= n")

    @property
    def d(self) -> int:
        return self.n - self.r


@dataclass
class SubproblemOutcome:
    """Result of one subproblem solve.

    ``X``/``x0`` are set for strictly feasible outcomes, ``y`` for dual rays.
    ``y_exact`` is attached when the ray came out of exact arithmetic (the
    polyhedral endgames), so callers can skip the rounding ladder.
    """

    tag: str
    X: np.ndarray | None = None
    x0: float | None = None
    y: np.ndarray | None = None
    y_exact: tuple[Fraction, ...] | None = None
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# symmetric-matrix coordinates (exact side)

def _upper_pairs(d: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(d) for b in range(a, d)]


def _functional_row(a: SymMatrix) -> list[Fraction]:
    """Coordinates of X -> A . X over the upper-triangle parametrization."""
    out = []
    for i, j in _upper_pairs(a.order):
        out.append(a[(i, j)] if i == j else 2 * a[(i, j)])
    return out


def _coords_to_sym(vec: Sequence[Fraction], d: int) -> SymMatrix:
    rows = [[Fraction(0)] * d for _ in range(d)]
    for (i, j), v in zip(_upper_pairs(d), vec):
        rows[i][j] = v
        rows[j][i] = v
    return SymMatrix(rows)


# ---------------------------------------------------------------------------
# NT path-following core

@dataclass
class _PencilResult:
    status: str
    x: np.ndarray
    S: np.ndarray
    Y: np.ndarray
    mu: float
    iterations: int


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def _sqrt_and_inv_sqrt(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(_sym(a))
    w = np.maximum(w, 1e-300)
    rt = np.sqrt(w)
    return v @ np.diag(rt) @ v.T, v @ np.diag(1.0 / rt) @ v.T


def _max_step(p: np.ndarray, dp: np.ndarray) -> float:
    """Largest alpha with p + alpha*dp still psd (1.0 cap applied later)."""
    try:
        l = np.linalg.cholesky(_sym(p))
    except np.linalg.LinAlgError:
        return 0.0
    m = np.linalg.solve(l, np.linalg.solve(l, dp).T)
    lam = np.linalg.eigvalsh(_sym(m)).min()
    if lam >= -1e-14:
        return np.inf
    return -1.0 / lam


def _solve_pencil(
    f0: np.ndarray,
    fs: list[np.ndarray],
    bvec: np.ndarray,
    x_init: np.ndarray,
    y_init: np.ndarray,
    max_iters: int,
    gap_tol: float,
) -> _PencilResult:
    """Maximize b.x subject to F0 + sum x_i F_i psd.

    Requires strictly feasible starting points on both sides: the primal slack
    at ``x_init`` and ``y_init`` itself must be positive definite with
    <F_i, y_init> = -b_i.  Both callers construct such points analytically.
    """
    nu = f0.shape[0]
    p = len(fs)
    x = np.array(x_init, dtype=float)
    y = _sym(np.array(y_init, dtype=float))

    def slack(xv):
        s = f0.copy()
        for xi, fi in zip(xv, fs):
            s = s + xi * fi
        return _sym(s)

    s = slack(x)
    status = "max_iters"
    it = 0
    stalls = 0
    for it in range(1, max_iters + 1):
        mu = float(np.tensordot(s, y)) / nu
        if mu < gap_tol:
            status = "converged"
            break
        try:
            s_rt, s_inv_rt = _sqrt_and_inv_sqrt(s)
            inner = _sym(s_rt @ y @ s_rt)
            inner_rt, inner_inv_rt = _sqrt_and_inv_sqrt(inner)
            w_inv = _sym(s_inv_rt @ inner_rt @ s_inv_rt)
            s_inv = _sym(s_inv_rt @ s_inv_rt)
        except np.linalg.LinAlgError:
            status = "factorization_failed"
            break

        h = [_sym(w_inv @ fi @ w_inv) for fi in fs]
        m = np.array([[np.tensordot(fs[i], h[j]) for j in range(p)] for i in range(p)])
        m = 0.5 * (m + m.T)
        a = np.array([np.tensordot(fi, s_inv) for fi in fs])

        def direction(sigma):
            rhs = sigma * mu * a + bvec
            try:
                dx = np.linalg.solve(m, rhs)
            except np.linalg.LinAlgError:
                dx = np.linalg.lstsq(m + 1e-13 * np.eye(p), rhs, rcond=None)[0]
            ds = np.zeros_like(s)
            for dxi, fi in zip(dx, fs):
                ds = ds + dxi * fi
            dy = _sym(sigma * mu * s_inv - y - w_inv @ ds @ w_inv)
            return dx, ds, dy

        dx_a, ds_a, dy_a = direction(0.0)
        alpha_a = min(_max_step(s, ds_a), _max_step(y, dy_a), 1.0) * 0.98
        mu_aff = float(np.tensordot(s + alpha_a * ds_a, y + alpha_a * dy_a)) / nu
        sigma = min(0.8, max(1e-4, (max(mu_aff, 0.0) / mu) ** 3))

        dx, ds, dy = direction(sigma)
        alpha = min(_max_step(s, ds), _max_step(y, dy), 1.0 / 0.98) * 0.98
        if alpha < 1e-10:
            stalls += 1
            if stalls >= 3:
                status = "stalled"
                break
        else:
            stalls = 0
        x = x + alpha * dx
        y = _sym(y + alpha * dy)
        s = slack(x)
        if not (np.isfinite(s).all() and np.isfinite(y).all()):
            status = "diverged"
            break

    mu = float(np.tensordot(s, y)) / nu
    return _PencilResult(status, x, s, y, mu, it)


# ---------------------------------------------------------------------------
# the subspace-versus-cone primitive

@dataclass
class _GordanResult:
    """Outcome of one interior-versus-separator solve."""

    t_lower: float
    t_upper: float
    interior: np.ndarray
    separator: np.ndarray
    diagnostics: dict


def _gordan(z0: SymMatrix, basis: list[SymMatrix], tol: ToleranceProfile) -> _GordanResult:
    """Run the eigenvalue-shift solve for the slice {Z in L : tr Z = theta}.

    ``z0`` has trace theta (the ambient dimension), ``basis`` spans the
    traceless part of L.  Returns primal/dual bounds on the optimal shift,
    the interior candidate Z, and the separator candidate from the dual side.
    """
    dim = z0.order
    theta = float(dim)
    z0f = z0.to_float()
    bs = []
    for bmat in basis:
        bf = bmat.to_float()
        nrm = np.linalg.norm(bf)
        bs.append(bf / nrm if nrm > 0 else bf)
    fs = bs + [-np.eye(dim)]
    bvec = np.zeros(len(fs))
    bvec[-1] = 1.0

    lam_min = float(np.linalg.eigvalsh(z0f).min())
    t0 = lam_min - 1.0 - 0.1 * abs(lam_min)
    x_init = np.zeros(len(fs))
    x_init[-1] = t0
    y_init = np.eye(dim) / theta

    scale = max(1.0, float(np.linalg.norm(z0f)))
    res = _solve_pencil(
        z0f, fs, bvec, x_init, y_init,
        max_iters=tol.max_iters, gap_tol=tol.gap * scale,
    )

    t_val = float(res.x[-1])
    slack_min = float(np.linalg.eigvalsh(res.S).min())
    t_lower = t_val + min(0.0, slack_min)
    t_upper = float(np.tensordot(z0f, res.Y))
    interior = _sym(res.S + t_val * np.eye(dim))
    separator = _sym(res.Y - (t_upper / theta) * np.eye(dim))
    diag = {
        "ipm_status": res.status,
        "ipm_iterations": res.iterations,
        "ipm_gap": res.mu,
        "t_lower": t_lower,
        "t_upper": t_upper,
    }
    return _GordanResult(t_lower, t_upper, interior, separator, diag)


def _kernel_basis_blocks(
    rows: list[list[Fraction]], d: int, extra: int
) -> list[SymMatrix]:
    """Exact kernel of functional rows over (sym d x d) x R^extra coordinates.

    Each kernel vector is embedded as a (d+extra) x (d+extra) block-diagonal
    symmetric matrix, scalars on the trailing diagonal.
    """
    ncols = len(_upper_pairs(d)) + extra
    kernel = ratmat.nullspace(rows, ncols) if rows else ratmat.nullspace([], ncols)
    out = []
    npairs = len(_upper_pairs(d))
    for vec in kernel:
        sym = _coords_to_sym(vec[:npairs], d)
        size = d + extra
        rows_full = [[Fraction(0)] * size for _ in range(size)]
        for i in range(d):
            for j in range(d):
                rows_full[i][j] = sym[(i, j)]
        for e in range(extra):
            rows_full[d + e][d + e] = vec[npairs + e]
        out.append(SymMatrix(rows_full))
    return out


def _split_trace(basis: list[SymMatrix], dim: int) -> tuple[SymMatrix, list[SymMatrix]] | None:
    """Pick Z0 with trace == dim and a traceless basis; None if trace dies on L."""
    traces = [sum(b[(i, i)] for i in range(dim)) for b in basis]
    pivot = next((j for j, t in enumerate(traces) if t != 0), None)
    if pivot is None:
        return None
    z0 = basis[pivot].scale(Fraction(dim) / traces[pivot])
    rest = []
    for j, bmat in enumerate(basis):
        if j == pivot:
            continue
        adj = bmat - basis[pivot].scale(traces[j] / traces[pivot])
        if not adj.is_zero():
            rest.append(adj)
    return z0, rest


def _recover_multipliers(
    columns: list[np.ndarray], target: np.ndarray
) -> np.ndarray:
    a = np.stack(columns, axis=1)
    sol, *_ = np.linalg.lstsq(a, target, rcond=None)
    return sol


def _ray_float_check(
    system: "SdpSystem", face: FaceDescriptor, y: np.ndarray, rhs_target: float,
    tol: ToleranceProfile,
) -> tuple[bool, dict]:
    """Float-level validity of a dual ray: equality and conic residuals."""
    bf = np.array([float(x) for x in system.b])
    eq_resid = abs(float(np.dot(y, bf)) - rhs_target)
    comb = np.zeros((face.d, face.d))
    for yi, ai in zip(y, system.a):
        comb += yi * ai.lower_right(face.r).to_float()
    lam = np.linalg.eigvalsh(_sym(comb)) if face.d else np.array([0.0])
    scale = max(1.0, float(np.abs(comb).max()) if face.d else 1.0, float(np.abs(y).max()))
    ok = eq_resid <= tol.eq * scale and (face.d == 0 or lam.min() >= -tol.pd * scale)
    info = {
        "ray_eq_residual": eq_resid,
        "ray_min_eig": float(lam.min()) if face.d else 0.0,
        "ray_numeric_rank": int((lam > tol.rank * scale).sum()) if face.d else 0,
    }
    return ok, info


# ---------------------------------------------------------------------------
# exact polyhedral endgames (n - r <= 1)

def _scalar_data(system: "SdpSystem", face: FaceDescriptor):
    n = face.n
    abar = [a[(n - 1, n - 1)] for a in system.a]
    return abar, list(system.b)


def _exact_final_ray(
    abar: list[Fraction], b: list[Fraction]
) -> tuple[Fraction, ...] | None:
    """Exact y with sum y_i b_i = -1 and sum y_i abar_i >= 0, if one exists."""
    m = len(b)
    y0 = ratmat.solve_linear([b], [Fraction(-1)])
    if y0 is None:
        return None
    val0 = sum(y * a for y, a in zip(y0, abar))
    if val0 >= 0:
        return tuple(y0)
    for h in ratmat.nullspace([b], m):
        g = sum(hi * a for hi, a in zip(h, abar))
        if g != 0:
            tau = (1 - val0) / g
            return tuple(yi + tau * hi for yi, hi in zip(y0, h))
    return None


def _solve_scalar_aux(system: "SdpSystem", face: FaceDescriptor) -> SubproblemOutcome:
    """Exact trichotomy for the 1x1 face: x free in sign, scalar block x >= 0."""
    n = face.n
    abar, b = _scalar_data(system, face)
    kernel = ratmat.nullspace([[a, -bi] for a, bi in zip(abar, b)], 2)
    for vec in kernel:
        if vec[0] != 0:
            sgn = 1 if vec[0] > 0 else -1
            xval = float(sgn * vec[0])
            x = np.zeros((n, n))
            x[n - 1, n - 1] = xval
            return SubproblemOutcome(
                STRICTLY_FEASIBLE, X=x, x0=float(sgn * vec[1]),
                diagnostics={"path": "exact_scalar"},
            )
    # The scalar coordinate vanishes on the subspace, so a combination with
    # unit block and zero right-hand side exists.
    y = ratmat.solve_linear([abar, b], [Fraction(1), Fraction(0)])
    if y is None:
        return SubproblemOutcome(NUMERIC_FAILURE, diagnostics={"path": "exact_scalar"})
    return SubproblemOutcome(
        DUAL_RAY,
        y=np.array([float(v) for v in y]),
        y_exact=tuple(y),
        diagnostics={"path": "exact_scalar", "ray_rhs": 0},
    )


def _solve_scalar_hom(system: "SdpSystem", face: FaceDescriptor) -> SubproblemOutcome:
    """Exact Case 2 dichotomy on a polyhedral face (n - r <= 1)."""
    n, d = face.n, face.d
    if d == 0:
        if all(x == 0 for x in system.b):
            return SubproblemOutcome(
                STRICTLY_FEASIBLE, X=np.zeros((n, n)), x0=1.0,
                diagnostics={"path": "exact_empty_face"},
            )
        y = ratmat.solve_linear([list(system.b)], [Fraction(-1)])
        return SubproblemOutcome(
            DUAL_RAY,
            y=np.array([float(v) for v in y]),
            y_exact=tuple(y),
            diagnostics={"path": "exact_empty_face", "ray_rhs": -1},
        )

    abar, b = _scalar_data(system, face)
    kernel = ratmat.nullspace([[a, -bi] for a, bi in zip(abar, b)], 2)
    best = None
    for vec in kernel:
        for sgn in (1, -1):
            xv, x0v = sgn * vec[0], sgn * vec[1]
            if x0v > 0 and xv >= 0:
                cand = (xv, x0v)
                if best is None or (best[0] == 0 and xv > 0):
                    best = cand
    if len(kernel) == 2:
        best = (Fraction(1), Fraction(1))
    if best is not None and best[0] > 0:
        x = np.zeros((n, n))
        x[n - 1, n - 1] = float(best[0])
        return SubproblemOutcome(
            STRICTLY_FEASIBLE, X=x, x0=float(best[1]),
            diagnostics={"path": "exact_scalar"},
        )
    if best is not None:
        # Feasible only with a zero block: hand back a rank-increasing
        # combination so the caller performs one more reduction.
        y = ratmat.solve_linear([abar, b], [Fraction(1), Fraction(0)])
        if y is not None:
            return SubproblemOutcome(
                DUAL_RAY,
                y=np.array([float(v) for v in y]),
                y_exact=tuple(y),
                diagnostics={"path": "exact_scalar", "ray_rhs": 0},
            )
    y = _exact_final_ray(abar, b)
    if y is None:
        return SubproblemOutcome(NUMERIC_FAILURE, diagnostics={"path": "exact_scalar"})
    return SubproblemOutcome(
        DUAL_RAY,
        y=np.array([float(v) for v in y]),
        y_exact=tuple(y),
        diagnostics={"path": "exact_scalar", "ray_rhs": -1},
    )


# ---------------------------------------------------------------------------
# public solves

def solve_aux(
    system: "SdpSystem",
    face: FaceDescriptor,
    tol: ToleranceProfile | None = None,
    hint_y: Sequence[Fraction] | None = None,
) -> SubproblemOutcome:
    """Decide strict feasibility of the homogenized system over the face.

    Returns ``StrictlyFeasible`` with an interior point of the face, or a
    ``DualRay`` ``y`` with ``sum y_i b_i = 0`` and a psd, nonzero lower block
    of ``sum y_i A_i`` (to float tolerance; exact validation is the caller's
    job).
    """
    tol = tol or ToleranceProfile()
    if face.r >= face.n:
        raise ValueError("solve_aux requires face.r < n")
    if hint_y is not None:
        y = tuple(ratmat.as_fraction(v) for v in hint_y)
        return SubproblemOutcome(
            DUAL_RAY, y=np.array([float(v) for v in y]), y_exact=y,
            diagnostics={"path": "hinted"},
        )
    d = face.d
    if d == 1:
        return _solve_scalar_aux(system, face)

    abar = [a.lower_right(face.r) for a in system.a]
    b = list(system.b)
    # Eliminate the free homogenizing variable exactly.
    pivot = None
    for i, bi in enumerate(b):
        if bi != 0 and (pivot is None or abs(bi) > abs(b[pivot])):
            pivot = i
    if pivot is None:
        rows = [_functional_row(a) for a in abar]
    else:
        rows = [
            _functional_row(abar[j] - abar[pivot].scale(b[j] / b[pivot]))
            for j in range(len(b))
            if j != pivot
        ]
    rows = [r for r in rows if any(x != 0 for x in r)]
    basis = _kernel_basis_blocks(rows, d, extra=0)

    split = _split_trace(basis, d)
    if split is None:
        # Trace is orthogonal to the subspace: the identity combination is an
        # exact dual ray.
        target = _functional_row(SymMatrix.identity(d)) + [Fraction(0)]
        cols = [_functional_row(a) + [bi] for a, bi in zip(abar, b)]
        y = ratmat.solve_linear(list(map(list, zip(*cols))), target)
        if y is not None:
            return SubproblemOutcome(
                DUAL_RAY, y=np.array([float(v) for v in y]), y_exact=tuple(y),
                diagnostics={"path": "exact_trace_ray", "ray_rhs": 0},
            )
        return SubproblemOutcome(NUMERIC_FAILURE, diagnostics={"path": "exact_trace_ray"})

    z0, traceless = split
    res = _gordan(z0, traceless, tol)
    diag = dict(res.diagnostics)
    diag["path"] = "gordan_aux"

    decide = max(tol.pd, 100.0 * res.diagnostics["ipm_gap"])
    if res.t_lower > decide:
        x = np.zeros((face.n, face.n))
        x[face.r :, face.r :] = res.interior
        if pivot is None:
            x0 = 0.0
        else:
            x0 = float(np.tensordot(abar[pivot].to_float(), res.interior)) / float(b[pivot])
        return SubproblemOutcome(STRICTLY_FEASIBLE, X=x, x0=x0, diagnostics=diag)

    cols = [a.to_float().ravel() for a in abar]
    weight = max(1.0, max(np.abs(c).max() for c in cols)) if cols else 1.0
    cols = [np.concatenate([c, [weight * float(bi)]]) for c, bi in zip(cols, b)]
    target = np.concatenate([res.separator.ravel(), [0.0]])
    y = _recover_multipliers(cols, target)
    ok, info = _ray_float_check(system, face, y, 0.0, tol)
    diag.update(info)
    diag["ray_rhs"] = 0
    if not ok:
        diag["candidate_y"] = y.tolist()
        return SubproblemOutcome(NUMERIC_FAILURE, diagnostics=diag)
    return SubproblemOutcome(DUAL_RAY, y=y, diagnostics=diag)


def solve_hom(
    system: "SdpSystem",
    face: FaceDescriptor,
    tol: ToleranceProfile | None = None,
    hint_y: Sequence[Fraction] | None = None,
) -> SubproblemOutcome:
    """Decide whether the homogenized value is zero or unbounded.

    ``DualRay`` carries y with ``sum y_i b_i = -1`` and psd lower block
    (infeasibility direction); ``StrictlyFeasible`` carries an interior point
    with positive homogenizing coordinate (feasible direction).  A ray with
    ``sum y_i b_i = 0`` may come back when only a further face reduction is
    possible; its ``diagnostics["ray_rhs"]`` is 0.
    """
    tol = tol or ToleranceProfile()
    if hint_y is not None:
        y = tuple(ratmat.as_fraction(v) for v in hint_y)
        return SubproblemOutcome(
            DUAL_RAY, y=np.array([float(v) for v in y]), y_exact=y,
            diagnostics={"path": "hinted"},
        )
    d = face.d
    if d <= 1:
        return _solve_scalar_hom(system, face)

    abar = [a.lower_right(face.r) for a in system.a]
    b = list(system.b)
    rows = [
        _functional_row(a) + [-bi]
        for a, bi in zip(abar, b)
        if any(x != 0 for x in _functional_row(a)) or bi != 0
    ]
    basis = _kernel_basis_blocks(rows, d, extra=1)
    split = _split_trace(basis, d + 1)
    if split is None:
        target = _functional_row(SymMatrix.identity(d)) + [Fraction(-1)]
        cols = [_functional_row(a) + [-bi] for a, bi in zip(abar, b)]
        y = ratmat.solve_linear(list(map(list, zip(*cols))), target)
        if y is not None:
            return SubproblemOutcome(
                DUAL_RAY, y=np.array([float(v) for v in y]), y_exact=tuple(y),
                diagnostics={"path": "exact_trace_ray", "ray_rhs": -1},
            )
        return SubproblemOutcome(NUMERIC_FAILURE, diagnostics={"path": "exact_trace_ray"})

    z0, traceless = split
    res = _gordan(z0, traceless, tol)
    diag = dict(res.diagnostics)
    diag["path"] = "gordan_hom"

    decide = max(tol.pd, 100.0 * res.diagnostics["ipm_gap"])
    if res.t_lower > decide:
        x = np.zeros((face.n, face.n))
        x[face.r :, face.r :] = res.interior[:d, :d]
        return SubproblemOutcome(
            STRICTLY_FEASIBLE, X=x, x0=float(res.interior[d, d]), diagnostics=diag
        )

    w_part = res.separator[:d, :d]
    beta = float(res.separator[d, d])
    cols = [
        np.concatenate([a.to_float().ravel(), [-float(bi)]])
        for a, bi in zip(abar, b)
    ]
    target = np.concatenate([w_part.ravel(), [beta]])
    y = _recover_multipliers(cols, target)
    diag["separator_beta"] = beta
    bf = np.array([float(v) for v in b])
    rhs = float(np.dot(y, bf))
    if rhs < -max(tol.eq, 1e-8):
        y = y / (-rhs)
        ok, info = _ray_float_check(system, face, y, -1.0, tol)
        diag.update(info)
        diag["ray_rhs"] = -1
    else:
        ok, info = _ray_float_check(system, face, y, 0.0, tol)
        diag.update(info)
        diag["ray_rhs"] = 0
    if not ok:
        diag["candidate_y"] = y.tolist()
        return SubproblemOutcome(NUMERIC_FAILURE, diagnostics=diag)
    return SubproblemOutcome(DUAL_RAY, y=y, diagnostics=diag)


def solve_farkas(
    system: "SdpSystem", tol: ToleranceProfile | None = None
) -> SubproblemOutcome:
    """Search for a strong-infeasibility multiplier vector.

    Finds y with ``sum y_i A_i`` psd and ``sum y_i b_i = -1`` when a strictly
    positive-definite such combination exists; exact verification of the
    rounded ray happens downstream.  Otherwise reports the separating
    evidence as a strictly feasible outcome (a psd matrix V with
    ``A_i . V = gamma * b_i``).
    """
    tol = tol or ToleranceProfile()
    n, m = system.n, system.m
    span_rows = [
        _functional_row(a) + [-bi] for a, bi in zip(system.a, system.b)
    ]
    keep = ratmat._independent_rows([list(r) for r in span_rows])
    if not keep:
        return SubproblemOutcome(
            STRICTLY_FEASIBLE, X=np.eye(n), x0=1.0,
            diagnostics={"path": "trivial_zero_system"},
        )
    dim = n + 1
    members = []
    for idx in keep:
        rows_full = [[Fraction(0)] * dim for _ in range(dim)]
        for i in range(n):
            for j in range(n):
                rows_full[i][j] = system.a[idx][(i, j)]
        rows_full[n][n] = -system.b[idx]
        members.append(SymMatrix(rows_full))

    split = _split_trace(members, dim)
    if split is None:
        # The identity lies in the orthogonal complement: tr A_i == b_i for
        # all i, so the identity matrix solves the original system.
        return SubproblemOutcome(
            STRICTLY_FEASIBLE, X=np.eye(n), x0=1.0,
            diagnostics={"path": "identity_feasible"},
        )
    z0, traceless = split
    res = _gordan(z0, traceless, tol)
    diag = dict(res.diagnostics)
    diag["path"] = "gordan_farkas"

    decide = max(tol.pd, 100.0 * res.diagnostics["ipm_gap"])
    if res.t_lower > decide:
        cols = [
            np.concatenate([system.a[i].to_float().ravel(), [-float(system.b[i])]])
            for i in range(m)
        ]
        target = np.concatenate([res.interior[:n, :n].ravel(), [res.interior[n, n]]])
        y = _recover_multipliers(cols, target)
        bf = np.array([float(v) for v in system.b])
        rhs = float(np.dot(y, bf))
        if rhs >= -1e-12:
            diag["candidate_y"] = y.tolist()
            return SubproblemOutcome(NUMERIC_FAILURE, diagnostics=diag)
        y = y / (-rhs)
        ok, info = _ray_float_check(system, FaceDescriptor(n, 0), y, -1.0, tol)
        diag.update(info)
        if not ok:
            diag["candidate_y"] = y.tolist()
            return SubproblemOutcome(NUMERIC_FAILURE, diagnostics=diag)
        return SubproblemOutcome(DUAL_RAY, y=y, diagnostics=diag)

    if res.diagnostics["ipm_status"] in ("converged", "stalled", "max_iters"):
        sep = res.separator
        return SubproblemOutcome(
            STRICTLY_FEASIBLE,
            X=sep[:n, :n],
            x0=float(sep[n, n]),
            diagnostics=diag,
        )
    return SubproblemOutcome(NUMERIC_FAILURE, diagnostics=diag)


# ---------------------------------------------------------------------------
# bounded objective solve for the duality probe

def solve_reduced_pair(
    abar: list[SymMatrix],
    b: list[Fraction],
    cbar: np.ndarray,
    x_interior: np.ndarray,
    tol: ToleranceProfile | None = None,
) -> dict:
    """Solve max C.Z s.t. <A_i, Z> = b_i, Z psd, together with its dual.

    ``x_interior`` must be a strictly feasible float point (it seeds the
    primal).  A trace bound is added so both sides of the pair are strictly
    feasible for the path-following core; if the bound stays active the
    problem is reported unbounded.
    """
    tol = tol or ToleranceProfile()
    d = cbar.shape[0]
    rows = [_functional_row(a) for a in abar]
    pairs = list(zip(rows, b))
    keep = ratmat._independent_rows([list(r) for r, _ in pairs])
    sol = ratmat.solve_linear([pairs[i][0] for i in keep], [pairs[i][1] for i in keep])
    if sol is None:
        return {"status": "inconsistent"}
    for i in range(len(pairs)):
        if i not in keep:
            if sum(a * x for a, x in zip(pairs[i][0], sol)) != pairs[i][1]:
                return {"status": "inconsistent"}
    z_part = _coords_to_sym(sol, d)
    kernel = ratmat.nullspace([pairs[i][0] for i in keep], len(_upper_pairs(d)))
    n_mats = [_coords_to_sym(vec, d) for vec in kernel]

    zp = z_part.to_float()
    ns = []
    for nm in n_mats:
        nf = nm.to_float()
        nrm = np.linalg.norm(nf)
        ns.append(nf / nrm if nrm > 0 else nf)
    if not ns:
        # The equalities pin Z to a single point.
        value = float(np.tensordot(cbar, zp))
        return {"status": "optimal", "primal": value, "dual": value, "gap": 0.0,
                "history": []}
    u0, *_ = np.linalg.lstsq(
        np.stack([nf.ravel() for nf in ns], axis=1),
        (x_interior - zp).ravel(),
        rcond=None,
    )

    rho = 4.0 * max(1.0, float(np.trace(x_interior)), float(abs(np.trace(zp))))
    tau0 = float(np.linalg.eigvalsh(cbar).max()) + 1.0
    history = []
    for attempt in range(4):
        size = d + 1
        f0 = np.zeros((size, size))
        f0[:d, :d] = zp
        f0[d, d] = rho - float(np.trace(zp))
        fs = []
        bvec = []
        for nf in ns:
            fi = np.zeros((size, size))
            fi[:d, :d] = nf
            fi[d, d] = -float(np.trace(nf))
            fs.append(fi)
            bvec.append(float(np.tensordot(cbar, nf)))
        bvec = np.array(bvec) if fs else np.zeros(0)

        y0 = np.zeros((size, size))
        y0[:d, :d] = -cbar + tau0 * np.eye(d)
        y0[d, d] = tau0

        s_probe = f0.copy()
        for ui, fi in zip(u0, fs):
            s_probe = s_probe + ui * fi
        if float(np.linalg.eigvalsh(s_probe).min()) <= 0:
            rho *= 4.0
            continue

        res = _solve_pencil(
            f0, fs, bvec, np.array(u0, dtype=float), y0,
            max_iters=tol.max_iters, gap_tol=tol.gap * max(1.0, np.linalg.norm(cbar)),
        )
        z_final = res.S[:d, :d]
        tau = float(res.Y[d, d])
        primal = float(np.tensordot(cbar, z_final))
        # Value of the Lagrange dual at the multipliers recovered from Y:
        # sum_i y_i b_i = <Y_main + C - tau*I, Z_particular>.
        dual = float(np.tensordot(zp, res.Y[:d, :d])) + float(np.tensordot(cbar, zp)) \
            - tau * float(np.trace(zp))
        history.append({
            "rho": rho, "tau": tau, "primal": primal, "dual": dual,
            "ipm_status": res.status, "ipm_iterations": res.iterations,
        })
        if tau <= max(1e-8, 1e-8 * abs(primal)):
            return {
                "status": "optimal",
                "primal": primal,
                "dual": dual,
                "gap": abs(primal - dual),
                "history": history,
            }
        rho *= 16.0
    return {"status": "unbounded", "history": history}
