"""Dense LP/QP solver contracts used by region projection and max-velocity search.

Problems are immutable and solves are pure, so independent solves may run in
parallel. The LP is backed by scipy's HiGHS interface; the QP is a primal
active-set method working in the null space of the equality constraints,
which identifies active constraints exactly (solutions sit on their
constraints to machine precision, not interior-point distance).
"""

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import InvalidInput


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NUMERICAL_FAILURE = "numerical_failure"


# Phase-one feasibility residual above this counts as infeasible.
FEAS_TOL = 1e-8


def _mat(a, cols=None):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise InvalidInput(f"expected a matrix, got ndim={a.ndim}")
    if cols is not None and a.shape[1] != cols:
        raise InvalidInput(f"expected {cols} columns, got {a.shape[1]}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix contains non-finite entries")
    return a


def _vec(a, size=None):
    a = np.asarray(a, dtype=float).reshape(-1)
    if size is not None and a.shape[0] != size:
        raise InvalidInput(f"expected length {size}, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("vector contains non-finite entries")
    return a


@dataclass(frozen=True)
class LpProblem:
    """Maximize c @ x subject to A_in x <= b_in, A_eq x = d, optional bounds."""

    c: np.ndarray
    a_in: np.ndarray | None = None
    b_in: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    bounds: list | None = None  # per-variable (lo, hi), None entries = free

    def __post_init__(self):
        c = _vec(self.c)
        object.__setattr__(self, "c", c)
        n = c.shape[0]
        if (self.a_in is None) != (self.b_in is None):
            raise InvalidInput("a_in and b_in must be given together")
        if (self.a_eq is None) != (self.b_eq is None):
            raise InvalidInput("a_eq and b_eq must be given together")
        if self.a_in is not None:
            a = _mat(self.a_in, n)
            b = _vec(self.b_in, a.shape[0])
            object.__setattr__(self, "a_in", a)
            object.__setattr__(self, "b_in", b)
        if self.a_eq is not None:
            a = _mat(self.a_eq, n)
            b = _vec(self.b_eq, a.shape[0])
            object.__setattr__(self, "a_eq", a)
            object.__setattr__(self, "b_eq", b)
        if self.bounds is not None and len(self.bounds) != n:
            raise InvalidInput("bounds length must match variable count")


@dataclass(frozen=True)
class QpProblem:
    """Minimize 0.5 x'Qx + q'x subject to A_in x <= b_in, A_eq x = b_eq."""

    Q: np.ndarray
    q: np.ndarray
    a_in: np.ndarray | None = None
    b_in: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None

    def __post_init__(self):
        Q = _mat(self.Q)
        q = _vec(self.q, Q.shape[0])
        if Q.shape[0] != Q.shape[1]:
            raise InvalidInput("Q must be square")
        if np.max(np.abs(Q - Q.T)) > 1e-10:
            raise InvalidInput("Q must be symmetric within 1e-10")
        eigs = np.linalg.eigvalsh(0.5 * (Q + Q.T))
        if eigs.min() < -1e-9:
            raise InvalidInput(f"Q must be positive semidefinite (min eig {eigs.min():.3e})")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "q", q)
        n = Q.shape[0]
        if (self.a_in is None) != (self.b_in is None):
            raise InvalidInput("a_in and b_in must be given together")
        if (self.a_eq is None) != (self.b_eq is None):
            raise InvalidInput("a_eq and b_eq must be given together")
        if self.a_in is not None:
            a = _mat(self.a_in, n)
            b = _vec(self.b_in, a.shape[0])
            object.__setattr__(self, "a_in", a)
            object.__setattr__(self, "b_in", b)
        if self.a_eq is not None:
            a = _mat(self.a_eq, n)
            b = _vec(self.b_eq, a.shape[0])
            object.__setattr__(self, "a_eq", a)
            object.__setattr__(self, "b_eq", b)

    @property
    def n(self):
        return self.Q.shape[0]


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    x: np.ndarray | None = None
    objective: float | None = None
    kkt_residual: float = np.inf
    message: str = ""
    active_set: tuple = field(default=())

    @property
    def optimal(self):
        return self.status is SolveStatus.OPTIMAL


def _primal_residual(p, x):
    r = 0.0
    if p.a_in is not None:
        r = max(r, float(np.max(p.a_in @ x - p.b_in, initial=0.0)))
    if p.a_eq is not None:
        r = max(r, float(np.max(np.abs(p.a_eq @ x - p.b_eq), initial=0.0)))
    return r


def solve_lp(p: LpProblem) -> SolveResult:
    """Solve max c'x via HiGHS. Any optimizer on a degenerate optimal face is accepted."""
    bounds = p.bounds if p.bounds is not None else [(None, None)] * len(p.c)
    res = scipy.optimize.linprog(
        -p.c,
        A_ub=p.a_in,
        b_ub=p.b_in,
        A_eq=p.a_eq,
        b_eq=p.b_eq,
        bounds=bounds,
        method="highs",
    )
    if res.status == 2:
        return SolveResult(SolveStatus.INFEASIBLE, message=res.message)
    if res.status == 3:
        return SolveResult(SolveStatus.UNBOUNDED, message=res.message)
    if res.status != 0 or res.x is None:
        return SolveResult(SolveStatus.NUMERICAL_FAILURE, message=res.message)
    x = np.asarray(res.x, dtype=float)
    kkt = _lp_kkt_residual(p, res, x)
    return SolveResult(SolveStatus.OPTIMAL, x=x, objective=float(p.c @ x), kkt_residual=kkt)


def _lp_kkt_residual(p, res, x):
    """Stationarity + feasibility + complementarity residual from HiGHS marginals."""
    grad = -p.c.copy()  # gradient of the minimized objective
    comp = 0.0
    if p.a_in is not None:
        lam = -np.asarray(res.ineqlin.marginals)  # >= 0
        grad += p.a_in.T @ lam
        comp = max(comp, float(np.max(np.abs(lam * (p.b_in - p.a_in @ x)), initial=0.0)))
    if p.a_eq is not None:
        grad += p.a_eq.T @ (-np.asarray(res.eqlin.marginals))
    # bound multipliers: pi = lower.marginals >= 0 enters as -pi,
    # rho = -upper.marginals >= 0 enters as +rho
    grad += -np.asarray(res.lower.marginals) - np.asarray(res.upper.marginals)
    stat = float(np.max(np.abs(grad)))
    return max(stat, _primal_residual(p, x), comp)


def _feasible_start(p: QpProblem):
    """Phase one: any feasible point, or None when infeasible beyond FEAS_TOL."""
    if p.a_in is None and p.a_eq is None:
        return np.zeros(p.n)
    lp = LpProblem(np.zeros(p.n), p.a_in, p.b_in, p.a_eq, p.b_eq)
    res = solve_lp(lp)
    if res.status is SolveStatus.INFEASIBLE:
        return None
    if res.x is None:
        return None
    if _primal_residual(p, res.x) > FEAS_TOL:
        return None
    return res.x


def _nullspace(A, n):
    if A is None or A.shape[0] == 0:
        return np.eye(n)
    return scipy.linalg.null_space(A)


def _qp_kkt_residual(p, x, lam_in, nu_eq):
    grad = p.Q @ x + p.q
    comp = 0.0
    if p.a_in is not None and lam_in is not None:
        grad = grad + p.a_in.T @ lam_in
        comp = float(np.max(np.abs(lam_in * (p.b_in - p.a_in @ x)), initial=0.0))
    if p.a_eq is not None and nu_eq is not None:
        grad = grad + p.a_eq.T @ nu_eq
    return max(float(np.max(np.abs(grad))), _primal_residual(p, x), comp)


def solve_qp(p: QpProblem, max_iter: int = 500) -> SolveResult:
    """Primal active-set method for convex QPs.

    Each subproblem is solved in the null space of the working constraints;
    a singular reduced Hessian with descent along its kernel is either cut
    by a blocking constraint or reported as unbounded.
    """
    n = p.n
    x = _feasible_start(p)
    if x is None:
        return SolveResult(SolveStatus.INFEASIBLE, message="phase-one residual above 1e-8")

    m_in = 0 if p.a_in is None else p.a_in.shape[0]
    working: list[int] = []
    tol = 1e-10

    for _ in range(max_iter):
        rows = [p.a_eq] if p.a_eq is not None else []
        if working:
            rows.append(p.a_in[working])
        N = np.vstack(rows) if rows else None
        Z = _nullspace(N, n)
        g = p.Q @ x + p.q

        if Z.shape[1] == 0:
            step = np.zeros(n)
            predicted = 0.0
        else:
            H = Z.T @ p.Q @ Z
            gz = Z.T @ g
            pz, *_ = np.linalg.lstsq(H, -gz, rcond=None)
            resid = H @ pz + gz
            if np.linalg.norm(resid) > 1e-9 * (1.0 + np.linalg.norm(gz)):
                # reduced problem is linear along ker(H): descent ray
                w, V = np.linalg.eigh(H)
                kernel = V[:, np.abs(w) <= 1e-10 * max(1.0, np.abs(w).max())]
                proj = kernel @ (kernel.T @ gz)
                if np.linalg.norm(proj) <= 1e-12:
                    return SolveResult(SolveStatus.NUMERICAL_FAILURE, message="inconsistent reduced system")
                ray = -Z @ proj
                alpha, block = _max_step(p, x, ray, working, np.inf)
                if not np.isfinite(alpha):
                    return SolveResult(SolveStatus.UNBOUNDED, message="descent ray never blocked")
                x = x + alpha * ray
                working.append(block)
                continue
            step = Z @ pz
            predicted = -(g @ step + 0.5 * step @ (p.Q @ step))

        obj = 0.5 * x @ p.Q @ x + p.q @ x
        # at the working-set minimizer the model predicts no decrease; the
        # step-norm test alone stalls on ill-conditioned flat directions
        at_subproblem_optimum = (
            np.linalg.norm(step) <= tol * (1.0 + np.linalg.norm(x))
            or predicted <= 1e-13 * (1.0 + abs(obj))
        )
        if at_subproblem_optimum:
            lam = _multipliers(p, x, working)
            if lam is None:
                return SolveResult(SolveStatus.NUMERICAL_FAILURE, message="multiplier solve failed")
            lam_in_w, nu_eq = lam
            if len(working) == 0 or np.min(lam_in_w, initial=0.0) >= -1e-9:
                lam_in = np.zeros(m_in)
                for k, idx in enumerate(working):
                    lam_in[idx] = max(lam_in_w[k], 0.0)
                kkt = _qp_kkt_residual(p, x, lam_in if m_in else None, nu_eq)
                obj = float(0.5 * x @ p.Q @ x + p.q @ x)
                return SolveResult(
                    SolveStatus.OPTIMAL, x=x, objective=obj, kkt_residual=kkt,
                    active_set=tuple(sorted(working)),
                )
            working.pop(int(np.argmin(lam_in_w)))
            continue

        alpha, block = _max_step(p, x, step, working, 1.0)
        x = x + alpha * step
        if block is not None and alpha < 1.0:
            working.append(block)

    return SolveResult(SolveStatus.NUMERICAL_FAILURE, message="active-set iteration limit")


def _max_step(p, x, direction, working, cap):
    """Largest alpha <= cap keeping feasibility; returns (alpha, blocking row)."""
    if p.a_in is None:
        return cap, None
    s = p.a_in @ direction
    r = p.b_in - p.a_in @ x
    alpha, block = cap, None
    for i in range(len(s)):
        if i in working or s[i] <= 1e-13:
            continue
        a_i = max(r[i], 0.0) / s[i]
        if a_i < alpha - 1e-15:
            alpha, block = a_i, i
    return alpha, block


def _multipliers(p, x, working):
    """Solve A_act' lam + A_eq' nu = -(Qx + q) in the least-squares sense."""
    g = -(p.Q @ x + p.q)
    cols = []
    if working:
        cols.append(p.a_in[working].T)
    n_eq = 0 if p.a_eq is None else p.a_eq.shape[0]
    if n_eq:
        cols.append(p.a_eq.T)
    if not cols:
        return np.zeros(0), None
    M = np.hstack(cols)
    sol, *_ = np.linalg.lstsq(M, g, rcond=None)
    lam_w = sol[: len(working)]
    nu = sol[len(working):] if n_eq else None
    return lam_w, nu
