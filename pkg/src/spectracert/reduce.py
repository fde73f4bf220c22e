"""Conversion of semidefinite feasibility systems into staircase form.

The driver :func:`convert` iterates one face-reduction step at a time:
each step replaces an equation by an exactly verified combination whose
lower block is psd, then rotates all constraint matrices so that block
becomes a positive diagonal.  Every decision taken on floating-point solver
output is re-validated in exact rational arithmetic before it is applied, so
an emitted certificate never depends on float reasoning.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import ratmat, sdpsolve
from .ratmat import Matrix, SymMatrix
from .sdpsolve import (
    DUAL_RAY,
    NUMERIC_FAILURE,
    STRICTLY_FEASIBLE,
    FaceDescriptor,
    SubproblemOutcome,
    ToleranceProfile,
)

INFEASIBLE = "infeasible"
FEASIBLE = "feasible"
UNDECIDED = "undecided"

STYLE_IDENTITY = "identity"
STYLE_DIAGONAL = "positive-diagonal"

DENOMINATOR_RUNGS = (10**2, 10**4, 10**8, 10**12)


class ReduceError(Exception):
    """Base class for conversion failures."""


class DegenerateComboError(ReduceError):
    """The multiplier vector cannot produce an invertible row operation."""


class ExactValidationError(ReduceError):
    """Rounded solver output failed its exact re-verification."""


@dataclass(frozen=True)
class SdpSystem:
    """The system: m symmetric n x n rational matrices with rational rhs."""

    a: tuple[SymMatrix, ...]
    b: tuple[Fraction, ...]

    def __init__(self, a: Sequence, b: Sequence):
        mats = tuple(mat if isinstance(mat, SymMatrix) else SymMatrix(mat) for mat in a)
        rhs = tuple(ratmat.as_fraction(x) for x in b)
        if len(mats) != len(rhs):
            raise ValueError("need one right-hand side per matrix")
        if mats:
            n = mats[0].order
            if n < 1:
                raise ValueError("matrix order must be at least 1")
            if any(mat.order != n for mat in mats):
                raise ValueError("all matrices must share one order")
        object.__setattr__(self, "a", mats)
        object.__setattr__(self, "b", rhs)

    @property
    def n(self) -> int:
        return self.a[0].order if self.a else 0

    @property
    def m(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class Transcript:
    """Composed row operations T and rotation V relating source to result.

    ``result.A_i == V^T (sum_j T_ij source.A_j) V`` and ``result.b == T b``.
    V is rational in exact mode and a float array in float mode.
    """

    t: Matrix
    v: Matrix | np.ndarray
    mode: str = "exact"

    def __post_init__(self):
        if self.t.det() == 0:
            raise ValueError("row-operation matrix must be invertible")
        if isinstance(self.v, Matrix):
            if self.v.det() == 0:
                raise ValueError("rotation matrix must be invertible")
        elif abs(np.linalg.det(np.asarray(self.v, dtype=float))) < 1e-12:
            raise ValueError("rotation matrix must be invertible")

    def v_float(self) -> np.ndarray:
        return self.v.to_float() if isinstance(self.v, Matrix) else np.asarray(self.v)


@dataclass(frozen=True)
class StaircaseForm:
    """A reformulated system together with its staircase block sizes.

    ``block_sizes`` lists r_1..r_k for the feasible variant and additionally
    r_{k+1} (possibly 0) for the infeasible variant.
    """

    system: SdpSystem
    k: int
    block_sizes: tuple[int, ...]
    block_style: str = STYLE_DIAGONAL

    def offsets(self) -> list[int]:
        """Partial sums s_0..s_len of the block sizes."""
        out = [0]
        for r in self.block_sizes:
            out.append(out[-1] + r)
        return out


@dataclass(frozen=True)
class Certificate:
    tag: str
    staircase: StaircaseForm | None = None
    transcript: Transcript | None = None
    strength: str | None = None
    p: int | None = None
    witness: SymMatrix | None = None
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# elementary operations

def apply_eros(
    system: SdpSystem,
    y: Sequence,
    target_row: int,
    position: int | None = None,
) -> tuple[SdpSystem, Matrix]:
    """Replace one equation by the combination y and optionally swap it.

    Equation ``target_row`` becomes ``(sum y_i A_i, sum y_i b_i)``, which
    requires ``y[target_row] != 0`` so the operation is invertible; when
    ``position`` is given the replaced row is then exchanged into that slot.
    Returns the new system and the composed elementary factor.
    """
    yv = [ratmat.as_fraction(x) for x in y]
    m = system.m
    if len(yv) != m:
        raise ValueError("multiplier length mismatch")
    if not 0 <= target_row < m:
        raise ValueError("target row out of range")
    if yv[target_row] == 0:
        raise DegenerateComboError("zero coefficient on the replaced equation")

    combo_a = SymMatrix.zeros(system.n, system.n)
    for yi, ai in zip(yv, system.a):
        if yi != 0:
            combo_a = combo_a + ai.scale(yi)
    combo_b = sum(yi * bi for yi, bi in zip(yv, system.b))

    mats = list(system.a)
    rhs = list(system.b)
    mats[target_row] = SymMatrix.from_matrix(combo_a)
    rhs[target_row] = combo_b
    factor_rows = [
        [Fraction(int(i == j)) for j in range(m)] if i != target_row else list(yv)
        for i in range(m)
    ]
    if position is not None and position != target_row:
        mats[position], mats[target_row] = mats[target_row], mats[position]
        rhs[position], rhs[target_row] = rhs[target_row], rhs[position]
        factor_rows[position], factor_rows[target_row] = (
            factor_rows[target_row],
            factor_rows[position],
        )
    return SdpSystem(mats, rhs), Matrix(factor_rows)


@dataclass
class _State:
    system: SdpSystem
    t: Matrix
    v: Matrix
    level: int
    block_sizes: list[int]
    log: list = field(default_factory=list)

    @property
    def r(self) -> int:
        return sum(self.block_sizes)


def _embed_rotation(q: Matrix, n: int, r: int) -> Matrix:
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(q.nrows):
        for j in range(q.ncols):
            rows[r + i][r + j] = q[(i, j)]
    return Matrix(rows)


def reduction_step(
    state: _State,
    y: Sequence,
    rhs_target: Fraction | int = Fraction(0),
    q_hint: Matrix | None = None,
) -> _State:
    """One reduction: verified eros, block diagonalization, rotation.

    Preconditions are re-verified exactly: ``sum y_i b_i`` must equal
    ``rhs_target`` (0 for an interior reduction, -1 for the closing
    equation), the lower block of the combination must be exactly psd, and
    for the 0 target it must be nonzero.
    """
    rhs_target = ratmat.as_fraction(rhs_target)
    if rhs_target not in (Fraction(0), Fraction(-1)):
        raise ExactValidationError(f"unsupported combination rhs {rhs_target}")
    yv = [ratmat.as_fraction(x) for x in y]
    sys0 = state.system
    level, r, n = state.level, state.r, sys0.n

    rhs_val = sum(yi * bi for yi, bi in zip(yv, sys0.b))
    if rhs_val != rhs_target:
        raise ExactValidationError(
            f"combination rhs is {rhs_val}, expected {rhs_target}"
        )
    combo = SymMatrix.zeros(n, n)
    for yi, ai in zip(yv, sys0.a):
        if yi != 0:
            combo = combo + ai.scale(yi)
    combo = SymMatrix.from_matrix(combo)
    lower = combo.lower_right(r)
    if not ratmat.is_psd(lower):
        raise ExactValidationError("lower block of the combination is not psd")
    if rhs_target == 0 and lower.is_zero():
        raise ExactValidationError("interior reduction needs a nonzero lower block")

    target_row = next(
        (j for j in range(level, sys0.m) if yv[j] != 0), None
    )
    if target_row is None:
        raise DegenerateComboError("combination is supported on fixed equations only")

    new_system, factor = apply_eros(sys0, yv, target_row, position=level)

    if q_hint is not None:
        diag = ratmat.congruence(lower, q_hint)
        r_new = 0
        seen_zero = False
        for i in range(diag.order):
            for j in range(diag.order):
                if i != j and diag[(i, j)] != 0:
                    raise ExactValidationError("hinted rotation does not diagonalize")
            v = diag[(i, i)]
            if v > 0:
                if seen_zero:
                    raise ExactValidationError("hinted rotation interleaves zeros")
                r_new += 1
            elif v == 0:
                seen_zero = True
            else:
                raise ExactValidationError("hinted rotation yields a negative entry")
        q = q_hint
    else:
        q, r_new = ratmat.psd_block_diagonalize(lower)
    if rhs_target == 0 and r_new == 0:
        raise ExactValidationError("interior reduction produced an empty block")

    v_step = _embed_rotation(q, n, r)
    mats = [ratmat.congruence(a, v_step) for a in new_system.a]
    rotated = SdpSystem(mats, new_system.b)
    return _State(
        system=rotated,
        t=factor @ state.t,
        v=state.v @ v_step,
        level=level + 1,
        block_sizes=state.block_sizes + [r_new],
        log=state.log,
    )


# ---------------------------------------------------------------------------
# rounding ladder: float multipliers -> exact multipliers

def _denominator_rungs(max_denominator: int) -> list[int]:
    rungs = [d for d in DENOMINATOR_RUNGS if d <= max_denominator]
    if not rungs or rungs[-1] != max_denominator:
        rungs.append(max_denominator)
    return rungs


def _exactify_ray(
    system: SdpSystem,
    level: int,
    r: int,
    y_float: np.ndarray,
    rhs_target: Fraction,
    max_denominator: int,
) -> tuple[Fraction, ...] | None:
    """Round, project and exactly re-verify a dual multiplier vector.

    Coordinates of already-fixed equations are zeroed (their rhs entries are
    zero, so this changes nothing that matters), the tail is projected onto
    the exact rhs constraint, and the psd condition is checked exactly.
    Returns None when every rung fails.
    """
    m = system.m
    y = np.array(y_float, dtype=float)
    if len(y) != m:
        return None
    y[:level] = 0.0
    b_tail = list(system.b[level:])
    if rhs_target == 0:
        scale = float(np.abs(y).max())
        if scale == 0.0:
            return None
        y = y / scale
    else:
        s = float(sum(float(bi) * yi for bi, yi in zip(b_tail, y[level:])))
        if abs(s) < 1e-14:
            return None
        y = y * (float(rhs_target) / s)

    lowers = [a.lower_right(r) for a in system.a]
    for denom in _denominator_rungs(max_denominator):
        cand_tail = [ratmat.rationalize(v, denom) for v in y[level:]]
        try:
            proj = ratmat.project_affine(cand_tail, [(b_tail, rhs_target)])
        except ratmat.InfeasibleProjectionError:
            return None
        cand = [Fraction(0)] * level + list(proj)
        if sum(yi * bi for yi, bi in zip(cand, system.b)) != rhs_target:
            continue
        w = SymMatrix.zeros(system.n - r, system.n - r)
        for yi, li in zip(cand, lowers):
            if yi != 0:
                w = w + li.scale(yi)
        w = SymMatrix.from_matrix(w)
        if rhs_target == 0 and w.is_zero():
            continue
        if not ratmat.is_psd(w):
            continue
        if all(x == 0 for x in cand[level:]):
            continue
        return tuple(cand)
    return None


def _candidate_rays(outcome: SubproblemOutcome) -> list[np.ndarray]:
    cands = []
    if outcome.y is not None:
        cands.append(np.asarray(outcome.y, dtype=float))
    raw = outcome.diagnostics.get("candidate_y")
    if raw is not None:
        cands.append(np.asarray(raw, dtype=float))
    return cands


# ---------------------------------------------------------------------------
# maximum-rank witness construction

def max_rank_witness(
    state: _State,
    primal: tuple[np.ndarray, float],
    strict_primal: tuple[np.ndarray, float],
    max_denominator: int = DENOMINATOR_RUNGS[-1],
) -> SymMatrix:
    """Exact interior feasible point of the face from two float solutions.

    Blends the feasible direction with the strictly feasible one, scales by
    the homogenizing coordinate, rounds the lower block to rationals,
    projects onto the exact equality constraints and verifies positive
    definiteness.  Shrinks the blend weight and raises the denominator cap
    until the exact checks pass.
    """
    sys0 = state.system
    n, r = sys0.n, state.r
    d = n - r
    if d == 0:
        witness = SymMatrix.zeros(n, n)
        for a, bi in zip(sys0.a, sys0.b):
            if bi != 0:
                raise ExactValidationError("zero witness fails an equation")
        return witness

    x_feas, x0_feas = np.asarray(primal[0], dtype=float), float(primal[1])
    x_strict, x0_strict = (
        np.asarray(strict_primal[0], dtype=float),
        float(strict_primal[1]),
    )
    lows = [a.lower_right(r) for a in sys0.a]
    constraint_rows = [sdpsolve._functional_row(low) for low in lows]
    rhs = list(sys0.b)

    eps = Fraction(1, 4)
    eps_values = []
    for _ in range(15):
        eps_values.append(eps)
        eps /= 2

    pairs = sdpsolve._upper_pairs(d)
    for denom in _denominator_rungs(max_denominator):
        for eps in eps_values:
            e = float(eps)
            denom_x0 = x0_feas + e * x0_strict
            if denom_x0 <= 0:
                continue
            blend = (x_feas + e * x_strict)[r:, r:] / denom_x0
            coords = [
                ratmat.rationalize(float(blend[i, j]), denom) for i, j in pairs
            ]
            try:
                proj = ratmat.project_affine(
                    coords, list(zip(constraint_rows, rhs))
                )
            except ratmat.InfeasibleProjectionError:
                raise ExactValidationError("face equalities are inconsistent")
            z = sdpsolve._coords_to_sym(proj, d)
            if not ratmat.is_pd(z):
                continue
            if any(
                low.dot(z) != bi for low, bi in zip(lows, rhs)
            ):
                continue
            rows = [[Fraction(0)] * n for _ in range(n)]
            for i in range(d):
                for j in range(d):
                    rows[r + i][r + j] = z[(i, j)]
            return SymMatrix(rows)
    raise ExactValidationError("could not round the witness to an exact interior point")


# ---------------------------------------------------------------------------
# the conversion driver

def _normalize_hints(hints, n: int, level_count: int) -> list[dict]:
    if hints is None:
        return []
    out = []
    for item in hints:
        entry = {"y": [ratmat.as_fraction(x) for x in item["y"]], "q": None}
        qdata = item.get("q")
        vdata = item.get("v")
        if vdata is not None:
            vmat = Matrix(vdata)
            entry["q"] = vmat
            entry["full_v"] = True
        elif qdata is not None:
            entry["q"] = Matrix(qdata)
            entry["full_v"] = False
        out.append(entry)
    return out


def _hint_rotation(entry: dict, n: int, r: int) -> Matrix | None:
    q = entry.get("q")
    if q is None:
        return None
    if entry.get("full_v"):
        for i in range(n):
            for j in range(n):
                if i < r or j < r:
                    want = Fraction(int(i == j))
                    if q[(i, j)] != want:
                        raise ExactValidationError(
                            "hinted rotation must fix the staircase rows"
                        )
        return Matrix([[q[(r + i, r + j)] for j in range(n - r)] for i in range(n - r)])
    if q.nrows == n - r:
        return q
    if q.nrows == n:
        return _hint_rotation({**entry, "full_v": True}, n, r)
    raise ExactValidationError("hinted rotation has the wrong size")


def _feasible_terminal(state: _State, diagnostics: dict) -> Certificate:
    """All equations are staircase rows: the trailing identity is feasible."""
    n, r = state.system.n, state.r
    p = n - r
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(r, n):
        rows[i][i] = Fraction(1)
    witness = SymMatrix(rows)
    for a, bi in zip(state.system.a, state.system.b):
        if a.dot(witness) != bi:
            raise ExactValidationError("terminal witness fails an equation")
    form = StaircaseForm(
        state.system, state.level, tuple(state.block_sizes), STYLE_DIAGONAL
    )
    return Certificate(
        FEASIBLE,
        staircase=form,
        transcript=Transcript(state.t, state.v, "exact"),
        p=p,
        witness=witness,
        diagnostics=diagnostics,
    )


def _finish_infeasible(state: _State, diagnostics: dict) -> Certificate:
    form = StaircaseForm(
        state.system, state.level - 1, tuple(state.block_sizes), STYLE_DIAGONAL
    )
    return Certificate(
        INFEASIBLE,
        staircase=form,
        transcript=Transcript(state.t, state.v, "exact"),
        diagnostics=diagnostics,
    )


def _finish_feasible(
    state: _State, witness: SymMatrix, diagnostics: dict
) -> Certificate:
    form = StaircaseForm(
        state.system, state.level, tuple(state.block_sizes), STYLE_DIAGONAL
    )
    return Certificate(
        FEASIBLE,
        staircase=form,
        transcript=Transcript(state.t, state.v, "exact"),
        p=state.system.n - state.r,
        witness=witness,
        diagnostics=diagnostics,
    )


def convert(
    system: SdpSystem,
    mode: str = "exact",
    tol: ToleranceProfile | None = None,
    hints: Sequence[dict] | None = None,
    max_denominator: int = DENOMINATOR_RUNGS[-1],
    classify: bool = True,
) -> Certificate:
    """Run the full reduction loop and emit a self-contained certificate.

    Returns an infeasibility certificate (staircase with a -1 row), a
    feasibility certificate with a maximum-rank witness, or an undecided
    verdict with diagnostics when exact validation keeps failing.
    """
    if mode not in ("exact", "float"):
        raise ValueError("mode must be 'exact' or 'float'")
    tol = tol or ToleranceProfile()
    diagnostics: dict = {"iterations": []}

    cert = _convert_exact(system, tol, hints, max_denominator, diagnostics)
    if cert.tag == INFEASIBLE and classify:
        strength = classify_strength(system, cert, tol, max_denominator)
        cert = dataclasses.replace(cert, strength=strength)
    if mode == "float" and cert.tag != UNDECIDED:
        cert = _to_float_certificate(cert)
    return cert


def _convert_exact(
    system: SdpSystem,
    tol: ToleranceProfile,
    hints,
    max_denominator: int,
    diagnostics: dict,
) -> Certificate:
    n, m = system.n, system.m
    if m == 0:
        ident = SymMatrix.identity(n) if n else SymMatrix.zeros(0, 0)
        form = StaircaseForm(system, 0, (), STYLE_DIAGONAL)
        return Certificate(
            FEASIBLE,
            staircase=form,
            transcript=Transcript(Matrix.identity(0), Matrix.identity(n), "exact"),
            p=n,
            witness=ident,
            diagnostics=diagnostics,
        )

    state = _State(system, Matrix.identity(m), Matrix.identity(n), 0, [])
    hint_list = _normalize_hints(hints, n, min(n, m))
    tighter = dataclasses.replace(
        tol, gap=tol.gap * 1e-3, max_iters=tol.max_iters * 2
    )

    if all(a.is_zero() for a in system.a):
        if all(x == 0 for x in system.b):
            rows = SymMatrix.identity(n)
            form = StaircaseForm(system, 0, (), STYLE_DIAGONAL)
            return Certificate(
                FEASIBLE,
                staircase=form,
                transcript=Transcript(Matrix.identity(m), Matrix.identity(n), "exact"),
                p=n,
                witness=rows,
                diagnostics=diagnostics,
            )
        y = ratmat.solve_linear([list(system.b)], [Fraction(-1)])
        state = reduction_step(state, y, rhs_target=Fraction(-1))
        diagnostics["iterations"].append({"path": "zero_matrices"})
        return _finish_infeasible(state, diagnostics)

    max_rounds = min(n, m) + 2
    for _ in range(max_rounds):
        level, r = state.level, state.r
        d = n - r
        itinfo: dict = {"level": level, "r": r}
        diagnostics["iterations"].append(itinfo)

        if level == m:
            return _feasible_terminal(state, diagnostics)

        if level < len(hint_list):
            entry = hint_list[level]
            y = entry["y"]
            rhs = sum(yi * bi for yi, bi in zip(y, state.system.b))
            q = _hint_rotation(entry, n, r)
            itinfo["path"] = "hinted"
            state = reduction_step(state, y, rhs_target=rhs, q_hint=q)
            if rhs == Fraction(-1):
                return _finish_infeasible(state, diagnostics)
            continue

        aux_interior: tuple[np.ndarray, float] | None = None
        skip_aux = d <= 1 or level == m - 1
        stepped = False
        if not skip_aux:
            for attempt_tol in (tol, tighter):
                aux = sdpsolve.solve_aux(state.system, FaceDescriptor(n, r), attempt_tol)
                itinfo["aux"] = aux.diagnostics
                if aux.tag == STRICTLY_FEASIBLE:
                    aux_interior = (aux.X, aux.x0)
                    break
                if aux.y_exact is not None:
                    try:
                        state = reduction_step(
                            state, aux.y_exact, rhs_target=Fraction(0)
                        )
                        stepped = True
                    except (ExactValidationError, DegenerateComboError) as exc:
                        itinfo["exact_ray_error"] = str(exc)
                        continue
                    break
                for cand in _candidate_rays(aux):
                    got = _exactify_ray(
                        state.system, level, r, cand, Fraction(0), max_denominator
                    )
                    if got is not None:
                        state = reduction_step(state, got, rhs_target=Fraction(0))
                        stepped = True
                        break
                if stepped:
                    break
        if stepped:
            continue

        finished = None
        for attempt_tol in (tol, tighter):
            hom = sdpsolve.solve_hom(state.system, FaceDescriptor(n, r), attempt_tol)
            itinfo["hom"] = hom.diagnostics
            if hom.tag == STRICTLY_FEASIBLE:
                strict = aux_interior or (hom.X, hom.x0)
                try:
                    witness = max_rank_witness(
                        state, (hom.X, hom.x0), strict, max_denominator
                    )
                except ExactValidationError as exc:
                    itinfo["witness_error"] = str(exc)
                    continue
                finished = _finish_feasible(state, witness, diagnostics)
                break
            if hom.y_exact is not None:
                rhs_exact = sum(
                    yi * bi for yi, bi in zip(hom.y_exact, state.system.b)
                )
                try:
                    state = reduction_step(state, hom.y_exact, rhs_target=rhs_exact)
                except (ExactValidationError, DegenerateComboError) as exc:
                    itinfo["exact_ray_error"] = str(exc)
                    continue
                if rhs_exact == Fraction(-1):
                    finished = _finish_infeasible(state, diagnostics)
                else:
                    stepped = True
                break
            done = False
            for cand in _candidate_rays(hom):
                got = _exactify_ray(
                    state.system, level, r, cand, Fraction(-1), max_denominator
                )
                if got is not None:
                    state = reduction_step(state, got, rhs_target=Fraction(-1))
                    finished = _finish_infeasible(state, diagnostics)
                    done = True
                    break
                got = _exactify_ray(
                    state.system, level, r, cand, Fraction(0), max_denominator
                )
                if got is not None:
                    state = reduction_step(state, got, rhs_target=Fraction(0))
                    stepped = True
                    done = True
                    break
            if done:
                break
        if finished is not None:
            return finished
        if stepped:
            continue
        diagnostics["failure"] = {
            "level": state.level,
            "r": state.r,
            "reason": "no exactly verifiable step",
        }
        return Certificate(UNDECIDED, diagnostics=diagnostics)

    diagnostics["failure"] = {"reason": "iteration guard exceeded"}
    return Certificate(UNDECIDED, diagnostics=diagnostics)


def classify_strength(
    system: SdpSystem,
    cert: Certificate,
    tol: ToleranceProfile | None = None,
    max_denominator: int = DENOMINATOR_RUNGS[-1],
) -> str:
    """Decide strong versus weak infeasibility for a certificate.

    Strong when the staircase closes immediately (k = 0) or when an exactly
    verified multiplier vector y with ``sum y_i A_i`` psd and
    ``sum y_i b_i = -1`` is found; otherwise weak, with an "unconfirmed" mark
    when the search itself failed numerically.
    """
    if cert.tag != INFEASIBLE:
        raise ValueError("strength is only defined for infeasibility certificates")
    if cert.staircase is not None and cert.staircase.k == 0:
        return "strong"
    tol = tol or ToleranceProfile()
    outcome = sdpsolve.solve_farkas(system, tol)
    if outcome.tag == DUAL_RAY:
        got = _exactify_ray(
            system, 0, 0, np.asarray(outcome.y), Fraction(-1), max_denominator
        )
        if got is not None:
            return "strong"
        return "weak (unconfirmed)"
    if outcome.tag == NUMERIC_FAILURE:
        return "weak (unconfirmed)"
    return "weak"


# ---------------------------------------------------------------------------
# float-mode normalization to identity blocks

def _to_float_certificate(cert: Certificate) -> Certificate:
    """Rescale staircase columns so the diagonal blocks become identities.

    The scaling needs square roots, so the resulting transcript and system
    live in floating point; certificates in this mode are toleranced, not
    exact.
    """
    form = cert.staircase
    sys0 = form.system
    n = sys0.n
    offsets = form.offsets()
    scale = np.ones(n)
    for blk, (lo, hi) in enumerate(zip(offsets, offsets[1:])):
        mat = sys0.a[blk]
        for pos in range(lo, hi):
            scale[pos] = 1.0 / np.sqrt(float(mat[(pos, pos)]))
    dmat = np.diag(scale)

    new_a = []
    for a in sys0.a:
        af = dmat @ a.to_float() @ dmat
        new_a.append(SymMatrix([[Fraction(v) for v in row] for row in af]))
    new_system = SdpSystem(new_a, sys0.b)
    new_form = StaircaseForm(new_system, form.k, form.block_sizes, STYLE_IDENTITY)

    v_old = cert.transcript.v_float()
    new_transcript = Transcript(cert.transcript.t, v_old @ dmat, "float")

    new_witness = None
    if cert.witness is not None:
        inv = np.diag(1.0 / scale)
        wf = inv @ cert.witness.to_float() @ inv
        new_witness = SymMatrix([[Fraction(v) for v in row] for row in wf])
    return dataclasses.replace(
        cert,
        staircase=new_form,
        transcript=new_transcript,
        witness=new_witness,
    )
