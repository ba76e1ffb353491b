"""Dense primal-dual interior-point solver for block-diagonal semidefinite
programs, plus an LP feasibility front end with Farkas certificates.

The program form is

    maximize    <A, X>                 minimize    <b, y>
    subject to  <Phi_i, X> = b_i       subject to  Z = sum_i y_i Phi_i - A
                X >= 0 (per block)                 Z >= 0 (per block)

with all operators Hermitian and block diagonal. Constraints are carried as
real coordinate rows in the fixed orthonormal Hermitian basis, which makes
the whole problem a real optimization problem without a doubled real
embedding.

The search direction is the HKM direction of primal-dual path following; a
Mehrotra-style predictor-corrector is available but off by default. When the
problem carries strictly feasible primal/dual starting points (every program
built by this package does), all iterates remain exactly feasible and the
logged primal value never exceeds the dual value beyond roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    coords_to_herm,
    herm_to_coords,
    hermitian_basis_matrix,
    require_hermitian,
)

DEFAULT_GAP_TOL = 1e-9
DEFAULT_FEAS_TOL = 1e-10
ACCEPT_GAP_TOL = 1e-7
ACCEPT_FEAS_TOL = 1e-8
ROW_DROP_TOL = 1e-10
FARKAS_THRESHOLD = 1e-6
MAX_ITERATIONS = 200
BOUNDARY_FRACTION = 0.98

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible-detected"
STATUS_MAX_ITERATIONS = "max-iterations"


class IllPosedProblemError(ValueError):
    """Constraints are inconsistent (a dependent row with a mismatched rhs)."""


class ConvergenceError(RuntimeError):
    """The solver stopped without reaching the requested tolerances."""

    def __init__(self, message: str, solution: "SDPSolution | None" = None):
        super().__init__(message)
        self.solution = solution


@dataclass(frozen=True)
class IterateRecord:
    index: int
    primal: float
    dual: float
    gap: float
    primal_residual: float
    dual_residual: float


def format_iterate_log(records: list[IterateRecord]) -> str:
    """Tab-separated log, one line per iteration."""
    lines = ["iter\tprimal\tdual\tgap\tprimal_residual\tdual_residual"]
    for r in records:
        lines.append(
            f"{r.index}\t{r.primal!r}\t{r.dual!r}\t{r.gap!r}"
            f"\t{r.primal_residual!r}\t{r.dual_residual!r}"
        )
    return "\n".join(lines) + "\n"


def weak_duality_ok(records: list[IterateRecord], slack: float = 10.0) -> tuple[bool, float]:
    """Check primal <= dual + slack * eps * scale on every logged iterate.

    Returns (ok, worst margin); the margin is primal - dual - tolerance, so
    any positive value is a violation.
    """
    eps = float(np.finfo(float).eps)
    worst = -math.inf
    for r in records:
        tol = slack * eps * (1.0 + abs(r.primal) + abs(r.dual))
        worst = max(worst, r.primal - r.dual - tol)
    return worst <= 0.0, worst


@dataclass(frozen=True)
class DualCertificate:
    """Dual feasible operator H; Tr(H) upper-bounds the success probability
    for the measurement class named by ``cone_tag``."""

    matrix: np.ndarray
    cone_tag: str  # "sep-dual", "ppt-dual" or "psd-dual"
    claimed_value: float = field(default=math.nan)

    def __post_init__(self) -> None:
        h = require_hermitian(self.matrix)
        object.__setattr__(self, "matrix", h)
        object.__setattr__(self, "claimed_value", float(np.trace(h).real))


@dataclass(frozen=True)
class SDPProblem:
    """Block-diagonal SDP data.

    ``rows`` holds the constraint operators as real Hermitian-basis
    coordinates, one row per scalar equality; block coordinates are laid out
    consecutively (d_b^2 reals per block). ``primal_start`` / ``dual_start``
    are optional strictly feasible starting points; they are verified before
    use and ignored if invalid.
    """

    block_dims: tuple[int, ...]
    objective: tuple[np.ndarray, ...]
    rows: np.ndarray
    rhs: np.ndarray
    primal_start: tuple[np.ndarray, ...] | None = None
    dual_start: np.ndarray | None = None

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.block_dims)
        obj = tuple(require_hermitian(a) for a in self.objective)
        if len(obj) != len(dims) or any(a.shape[0] != d for a, d in zip(obj, dims)):
            raise ValueError("objective blocks must match block_dims")
        rows = np.asarray(self.rows, dtype=float)
        rhs = np.asarray(self.rhs, dtype=float)
        n = sum(d * d for d in dims)
        if rows.ndim != 2 or rows.shape[1] != n or rows.shape[0] != rhs.size:
            raise ValueError("rows must be (m, sum of block dim^2) with matching rhs")
        object.__setattr__(self, "block_dims", dims)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", rhs)

    @property
    def n_coords(self) -> int:
        return sum(d * d for d in self.block_dims)

    def block_slices(self) -> list[slice]:
        out, ofs = [], 0
        for d in self.block_dims:
            out.append(slice(ofs, ofs + d * d))
            ofs += d * d
        return out


@dataclass
class SDPSolution:
    x_blocks: list[np.ndarray]
    y: np.ndarray
    z_blocks: list[np.ndarray]
    primal_value: float
    dual_value: float
    gap: float
    status: str
    iterations: int
    log: list[IterateRecord]
    kept_rows: np.ndarray


# ---------------------------------------------------------------------------
# Preprocessing
# ---------------------------------------------------------------------------


def independent_rows(rows: np.ndarray, tol: float = ROW_DROP_TOL) -> np.ndarray:
    """Indices of a maximal linearly independent subset of rows, chosen
    greedily in order (Gram-Schmidt semantics: a row is dropped when its
    residual against the earlier kept rows falls below ``tol`` relative to
    the row norm).

    Works chunkwise: each chunk is projected off the accumulated orthonormal
    basis, and within the chunk the QR factor's diagonal supplies the
    sequential residual norms.
    """
    m, n = rows.shape
    q = np.zeros((0, n))
    kept: list[int] = []
    # The R diagonal only covers as many rows as there are coordinates, so a
    # chunk must never be wider than n.
    block = max(1, min(256, n))
    for start in range(0, m, block):
        chunk = rows[start : start + block].copy()
        if q.shape[0]:
            chunk -= (chunk @ q.T) @ q
            chunk -= (chunk @ q.T) @ q
        r_mat = np.linalg.qr(chunk.T, mode="r")
        resid = np.abs(np.diag(r_mat))
        scale = np.maximum(1.0, np.linalg.norm(rows[start : start + chunk.shape[0]], axis=1))
        keep_local = np.flatnonzero(resid >= tol * scale[: resid.size])
        if keep_local.size:
            q_new, _ = np.linalg.qr(chunk[keep_local].T)
            q = np.vstack([q, q_new.T])
            kept.extend(int(start + j) for j in keep_local)
    return np.asarray(kept, dtype=int)


def _check_consistency(rows, rhs, kept, tol=1e-8) -> None:
    dropped = np.setdiff1d(np.arange(rows.shape[0]), kept)
    if dropped.size == 0:
        return
    coeff, *_ = np.linalg.lstsq(rows[kept].T, rows[dropped].T, rcond=None)
    predicted = coeff.T @ rhs[kept]
    scale = 1.0 + np.abs(rhs).max(initial=0.0)
    worst = np.abs(predicted - rhs[dropped]).max(initial=0.0)
    if worst > tol * scale:
        raise IllPosedProblemError(
            f"dependent constraint with inconsistent rhs (mismatch {worst:.3e})"
        )


# ---------------------------------------------------------------------------
# Solver core
# ---------------------------------------------------------------------------


def _coords_of_blocks(blocks) -> np.ndarray:
    return np.concatenate([herm_to_coords(b) for b in blocks])


def _blocks_from_coords(c, dims, slices) -> list[np.ndarray]:
    return [coords_to_herm(c[sl], d) for d, sl in zip(dims, slices)]


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2.0


def _hs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(a.conj() * b).real)


def _chol_or_none(a: np.ndarray):
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return None


def _max_step(blocks, dblocks, fraction: float) -> float:
    """fraction times the distance to the PSD boundary along the direction,
    capped at 1. Uses the Cholesky factors of the current blocks."""
    alpha = 1.0
    for s, ds in zip(blocks, dblocks):
        ell = _chol_or_none(s)
        if ell is None:
            return 0.0
        w = np.linalg.solve(ell, ds)
        t = np.linalg.solve(ell, w.conj().T).conj().T
        lam = float(np.linalg.eigvalsh(_sym(t))[0])
        if lam < 0.0:
            alpha = min(alpha, -fraction / lam)
    return alpha


def _verify_primal_start(problem, c_rows, b) -> tuple[list[np.ndarray], bool]:
    if problem.primal_start is None:
        return [], False
    try:
        blocks = [require_hermitian(x) for x in problem.primal_start]
    except ValueError:
        return [], False
    if len(blocks) != len(problem.block_dims):
        return [], False
    if any(_chol_or_none(x) is None for x in blocks):
        return [], False
    coords = _coords_of_blocks(blocks)
    resid = np.linalg.norm(c_rows @ coords - b)
    if resid > 1e-10 * (1.0 + np.linalg.norm(b)):
        return [], False
    return blocks, True


def _verify_dual_start(problem, c_rows, kept, slices) -> tuple[np.ndarray, list[np.ndarray], bool]:
    if problem.dual_start is None:
        return np.zeros(0), [], False
    y_full = np.asarray(problem.dual_start, dtype=float)
    if y_full.size != problem.rows.shape[0]:
        return np.zeros(0), [], False
    if kept.size == problem.rows.shape[0]:
        y = y_full.copy()
    else:
        # Project the intended dual slack onto the kept rows.
        target = problem.rows.T @ y_full
        y, *_ = np.linalg.lstsq(c_rows.T, target, rcond=None)
    slack = c_rows.T @ y - _coords_of_blocks(problem.objective)
    z = _blocks_from_coords(slack, problem.block_dims, slices)
    if any(_chol_or_none(zb) is None for zb in z):
        return np.zeros(0), [], False
    return y, z, True


def solve_sdp(
    problem: SDPProblem,
    *,
    max_iterations: int = MAX_ITERATIONS,
    gap_tol: float = DEFAULT_GAP_TOL,
    feas_tol: float = DEFAULT_FEAS_TOL,
    sigma: float = 0.25,
    boundary_fraction: float = BOUNDARY_FRACTION,
    use_corrector: bool = False,
) -> SDPSolution:
    """Solve a block-diagonal SDP by primal-dual path following.

    Deterministic: identical inputs produce identical iterate logs. Raises
    IllPosedProblemError for inconsistent constraints; non-convergence is
    reported through ``status`` rather than an exception.
    """
    dims = problem.block_dims
    slices = problem.block_slices()
    kept = independent_rows(problem.rows)
    _check_consistency(problem.rows, problem.rhs, kept)
    c_rows = problem.rows[kept]
    b = problem.rhs[kept]
    a_blocks = list(problem.objective)
    a_coords = _coords_of_blocks(a_blocks)
    t_mats = [hermitian_basis_matrix(d) for d in dims]

    # Rows touching each block, and the dense per-block submatrices.
    touch = []
    subs = []
    for sl in slices:
        tb = np.flatnonzero(np.abs(c_rows[:, sl]).max(axis=1) > 0.0)
        touch.append(tb)
        subs.append(c_rows[np.ix_(tb, range(sl.start, sl.stop))])

    x_blocks, have_primal = _verify_primal_start(problem, c_rows, b)
    y, z_blocks, have_dual = _verify_dual_start(problem, c_rows, kept, slices)
    eta = 1.0 + float(np.linalg.norm(a_coords)) + float(np.abs(b).max(initial=0.0))
    if not have_primal:
        x_blocks = [eta * np.eye(d, dtype=complex) for d in dims]
    if not have_dual:
        y = np.zeros(b.size)
        z_blocks = [eta * np.eye(d, dtype=complex) for d in dims]

    b_scale = 1.0 + float(np.linalg.norm(b))
    a_scale = 1.0 + float(np.linalg.norm(a_coords))
    total_dim = sum(dims)
    records: list[IterateRecord] = []
    status = STATUS_MAX_ITERATIONS
    it = 0

    for it in range(max_iterations + 1):
        x_coords = _coords_of_blocks(x_blocks)
        rp = b - c_rows @ x_coords
        rd_coords = c_rows.T @ y - a_coords - _coords_of_blocks(z_blocks)
        rd_blocks = _blocks_from_coords(rd_coords, dims, slices)
        pv = sum(_hs(a, x) for a, x in zip(a_blocks, x_blocks))
        dv = float(b @ y)
        mu_total = sum(_hs(x, z) for x, z in zip(x_blocks, z_blocks))
        rp_norm = float(np.linalg.norm(rp))
        rd_norm = float(np.linalg.norm(rd_coords))
        records.append(IterateRecord(it, pv, dv, pv - dv, rp_norm, rd_norm))

        if (
            mu_total <= gap_tol * (1.0 + abs(dv))
            and abs(pv - dv) <= gap_tol * (1.0 + abs(dv))
            and rp_norm <= feas_tol * b_scale
            and rd_norm <= feas_tol * a_scale
        ):
            status = STATUS_OPTIMAL
            break
        if it == max_iterations:
            break
        if float(np.linalg.norm(y)) > 1e12 * eta:
            status = STATUS_INFEASIBLE
            break

        mu = mu_total / total_dim
        try:
            zinv_blocks = []
            for zb in z_blocks:
                ell = np.linalg.cholesky(zb)
                linv = np.linalg.solve(ell, np.eye(zb.shape[0], dtype=complex))
                zinv_blocks.append(linv.conj().T @ linv)

            m_mat = np.zeros((b.size, b.size))
            for xb, zinv, tm, tb, cb in zip(x_blocks, zinv_blocks, t_mats, touch, subs):
                k_vec = np.kron(xb, zinv.T)  # row-major vec rep of E -> X E Z^-1
                w_real = (tm.conj().T @ k_vec @ tm).real
                w_real = (w_real + w_real.T) / 2.0
                m_mat[np.ix_(tb, tb)] += cb @ w_real @ cb.T

            def newton(sig_mu: float, corr_blocks):
                rhs_vec = sig_mu * (c_rows @ _coords_of_blocks(zinv_blocks)) - b
                extra = [
                    _sym(x @ rd @ zi)
                    for x, rd, zi in zip(x_blocks, rd_blocks, zinv_blocks)
                ]
                if corr_blocks is not None:
                    extra = [
                        e + _sym(dx @ dz @ zi)
                        for e, dx, dz, zi in zip(extra, *corr_blocks, zinv_blocks)
                    ]
                rhs_vec -= c_rows @ _coords_of_blocks(extra)
                try:
                    dy = np.linalg.solve(m_mat, rhs_vec)
                except np.linalg.LinAlgError:
                    ridge = 1e-14 * (1.0 + np.trace(m_mat) / b.size)
                    dy = np.linalg.solve(m_mat + ridge * np.eye(b.size), rhs_vec)
                dz_coords = c_rows.T @ dy + rd_coords
                dz = _blocks_from_coords(dz_coords, dims, slices)
                dx = []
                for xb, zinv, dzb in zip(x_blocks, zinv_blocks, dz):
                    core = sig_mu * zinv - xb - _sym(xb @ dzb @ zinv)
                    if corr_blocks is not None:
                        i = len(dx)
                        core = core - _sym(corr_blocks[0][i] @ corr_blocks[1][i] @ zinv)
                    dx.append(_sym(core))
                return dx, dy, dz

            if use_corrector:
                dx_aff, _, dz_aff = newton(0.0, None)
                ap = _max_step(x_blocks, dx_aff, boundary_fraction)
                ad = _max_step(z_blocks, dz_aff, boundary_fraction)
                mu_aff = sum(
                    _hs(x + ap * dx, z + ad * dz)
                    for x, dx, z, dz in zip(x_blocks, dx_aff, z_blocks, dz_aff)
                )
                sig = min(1.0, max(0.0, (mu_aff / mu_total) ** 3))
                dx_blocks, dy, dz_blocks = newton(sig * mu, (dx_aff, dz_aff))
            else:
                dx_blocks, dy, dz_blocks = newton(sigma * mu, None)
        except np.linalg.LinAlgError:
            break

        alpha_p = _max_step(x_blocks, dx_blocks, boundary_fraction)
        alpha_d = _max_step(z_blocks, dz_blocks, boundary_fraction)
        if max(alpha_p, alpha_d) < 1e-10:
            break
        x_blocks = [_sym(x + alpha_p * dx) for x, dx in zip(x_blocks, dx_blocks)]
        y = y + alpha_d * dy
        z_blocks = [_sym(z + alpha_d * dz) for z, dz in zip(z_blocks, dz_blocks)]

    last = records[-1]
    if status != STATUS_OPTIMAL and status != STATUS_INFEASIBLE:
        # Accept a numerically stalled point that still meets the published
        # solution tolerances.
        if (
            abs(last.gap) <= ACCEPT_GAP_TOL * (1.0 + abs(last.dual))
            and last.primal_residual <= ACCEPT_FEAS_TOL * b_scale
            and last.dual_residual <= ACCEPT_FEAS_TOL * a_scale
        ):
            status = STATUS_OPTIMAL

    y_full = np.zeros(problem.rows.shape[0])
    y_full[kept] = y
    return SDPSolution(
        x_blocks=[_sym(x) for x in x_blocks],
        y=y_full,
        z_blocks=[_sym(z) for z in z_blocks],
        primal_value=last.primal,
        dual_value=last.dual,
        gap=last.gap,
        status=status,
        iterations=it,
        log=records,
        kept_rows=kept,
    )


# ---------------------------------------------------------------------------
# LP feasibility (diagonal special case) with Farkas certificates
# ---------------------------------------------------------------------------


@dataclass
class LPFeasibilityResult:
    """Exactly one of ``weights`` (nonnegative, sum_i w_i col_i = target) and
    ``farkas`` (Hermitian W with <W, col_i> >= 0 and <W, target> < 0) is set."""

    feasible: bool
    weights: np.ndarray | None
    farkas: np.ndarray | None
    phase1_value: float
    solution: SDPSolution


def span_residual(columns: list[np.ndarray], target: np.ndarray) -> float:
    """Frobenius distance from ``target`` to the real span of ``columns``."""
    c = np.stack([herm_to_coords(require_hermitian(col)) for col in columns], axis=1)
    t = herm_to_coords(require_hermitian(target))
    sol, *_ = np.linalg.lstsq(c, t, rcond=None)
    return float(np.linalg.norm(c @ sol - t))


def verify_farkas(columns, target, w, col_tol=1e-10, target_tol=1e-6) -> bool:
    wn = float(np.linalg.norm(w))
    for col in columns:
        if _hs(w, col) < -col_tol * float(np.linalg.norm(col)) * wn:
            return False
    return _hs(w, target) <= -target_tol * wn * float(np.linalg.norm(target))


def solve_lp_feasibility(
    columns: list[np.ndarray],
    target: np.ndarray,
    *,
    farkas_threshold: float = FARKAS_THRESHOLD,
    residual_tol: float = 1e-8,
) -> LPFeasibilityResult:
    """Decide whether ``target`` is a nonnegative combination of ``columns``.

    Solved as a phase-1 problem on the SDP engine with 1x1 blocks: minimize
    the weight t of an artificial column R = target - sum(columns), starting
    from the strictly feasible point (1, ..., 1). A phase-1 optimum above
    ``farkas_threshold`` yields a Farkas witness read from the dual
    multipliers; either certificate is re-verified by direct recomputation.
    """
    if not columns:
        raise ValueError("empty column list")
    cols = [require_hermitian(c) for c in columns]
    tgt = require_hermitian(target)
    d = tgt.shape[0]
    if any(c.shape != (d, d) for c in cols):
        raise ValueError("columns and target must act on the same space")

    ncol = len(cols)
    artificial = tgt - sum(cols)
    col_coords = np.stack([herm_to_coords(c) for c in cols + [artificial]], axis=1)
    rhs = herm_to_coords(tgt)

    objective = [np.zeros((1, 1), dtype=complex) for _ in range(ncol)]
    objective.append(-np.ones((1, 1), dtype=complex))

    # Dual start: slack from Y = c * identity is strictly positive when c is
    # small against the artificial column's trace.
    c0 = 1.0 / (2.0 * (1.0 + abs(float(np.trace(artificial).real))))
    y_full = herm_to_coords(c0 * np.eye(d, dtype=complex))

    problem = SDPProblem(
        block_dims=(1,) * (ncol + 1),
        objective=tuple(objective),
        rows=col_coords,
        rhs=rhs,
        primal_start=tuple(np.ones((1, 1), dtype=complex) for _ in range(ncol + 1)),
        dual_start=y_full,
    )
    sol = solve_sdp(problem)
    if sol.status != STATUS_OPTIMAL:
        raise ConvergenceError(f"phase-1 solve ended with status {sol.status}", sol)

    t_star = float(sol.x_blocks[-1][0, 0].real)
    if t_star > farkas_threshold:
        w = coords_to_herm(sol.y, d)
        w = w / np.linalg.norm(w)
        if not verify_farkas(cols, tgt, w):
            raise ConvergenceError(
                "phase-1 reported infeasibility but the Farkas witness failed "
                "direct verification",
                sol,
            )
        return LPFeasibilityResult(False, None, w, t_star, sol)

    weights = np.array([float(x[0, 0].real) for x in sol.x_blocks[:-1]])
    weights = np.maximum(weights, 0.0)
    fit = sum(wk * ck for wk, ck in zip(weights, cols))
    resid = float(np.linalg.norm(fit - tgt))
    if resid > residual_tol:
        raise ConvergenceError(
            f"phase-1 optimum {t_star:.2e} is ambiguous: weight residual {resid:.2e}",
            sol,
        )
    return LPFeasibilityResult(True, weights, None, t_star, sol)
