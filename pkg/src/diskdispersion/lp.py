"""Minimal linear-program representation and solvers.

Models maximize a linear objective over real variables subject to linear
``<=`` / ``>=`` constraints and optional per-variable bounds (variables are
free by default). The built-in solver is a self-contained dense two-phase
simplex: Dantzig pricing for speed, with a permanent switch to Bland's rule
once degenerate stalling is detected, which guarantees termination. A
scipy/HiGHS backend can be swapped in behind the same interface; ``"auto"``
picks the dense simplex for small models and scipy for large ones.

Tolerances: a solution is accepted when every constraint holds within
``FEASIBILITY_TOL`` (1e-7) and the reported objective is within 1e-7 of the
true optimum for bounded feasible models. Exceeding the iteration cap
raises ``IterationLimitError`` rather than returning a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

FEASIBILITY_TOL = 1e-7
_COST_TOL = 1e-9
_PIVOT_TOL = 1e-10
_STALL_LIMIT = 40

#: standard-form tableau cell count above which "auto" defers to scipy
AUTO_SIZE_LIMIT = 200_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class MalformedModelError(ValueError):
    """The model has inconsistent shapes or non-finite coefficients."""


class IterationLimitError(RuntimeError):
    """The simplex hit its iteration cap before proving optimality."""


@dataclass
class LPModel:
    """maximize objective . x subject to rows and bounds.

    Rows are (coefficients, sense, rhs) with sense "<=" or ">=";
    bounds are (lo, hi) pairs where None means unbounded. Variables are
    free unless bounded explicitly.
    """

    n_vars: int
    objective: np.ndarray = None
    rows: list = field(default_factory=list)
    bounds: list = None

    def __post_init__(self):
        self.n_vars = int(self.n_vars)
        if self.n_vars < 1:
            raise MalformedModelError("a model needs at least one variable")
        if self.objective is None:
            self.objective = np.zeros(self.n_vars)
        self.objective = np.asarray(self.objective, dtype=float)
        if self.bounds is None:
            self.bounds = [(None, None)] * self.n_vars

    @classmethod
    def maximize_variable(cls, n_vars: int, index: int) -> "LPModel":
        obj = np.zeros(n_vars)
        obj[index] = 1.0
        return cls(n_vars=n_vars, objective=obj)

    def add_constraint(self, coeffs, sense: str, rhs: float) -> None:
        coeffs = np.asarray(coeffs, dtype=float)
        self.rows.append((coeffs, sense, float(rhs)))

    def set_bound(self, index: int, lo: Optional[float], hi: Optional[float]) -> None:
        self.bounds[index] = (lo, hi)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def validate(self) -> None:
        if self.objective.shape != (self.n_vars,):
            raise MalformedModelError(f"objective has shape {self.objective.shape}, expected ({self.n_vars},)")
        if not np.all(np.isfinite(self.objective)):
            raise MalformedModelError("objective has non-finite coefficients")
        if len(self.bounds) != self.n_vars:
            raise MalformedModelError("one bound pair per variable required")
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and lo > hi:
                raise MalformedModelError(f"empty bound interval [{lo}, {hi}]")
        for k, (coeffs, sense, rhs) in enumerate(self.rows):
            if coeffs.shape != (self.n_vars,):
                raise MalformedModelError(f"row {k} has {coeffs.shape[0]} coefficients, expected {self.n_vars}")
            if sense not in ("<=", ">="):
                raise MalformedModelError(f"row {k} has unknown sense {sense!r}")
            if not np.all(np.isfinite(coeffs)) or not np.isfinite(rhs):
                raise MalformedModelError(f"row {k} has non-finite data")


@dataclass(frozen=True)
class LPSolution:
    status: str
    objective: float
    x: Optional[np.ndarray]


def solve_lp(model: LPModel, backend: str = "simplex") -> LPSolution:
    """Solve the model with the requested backend ("simplex", "scipy", "auto")."""
    model.validate()
    if backend == "auto":
        backend = "simplex" if _standard_size(model) <= AUTO_SIZE_LIMIT else "scipy"
    if backend == "simplex":
        return _solve_simplex(model)
    if backend == "scipy":
        return _solve_scipy(model)
    raise ValueError(f"unknown LP backend {backend!r}")


def _standard_size(model: LPModel) -> int:
    n_cols = 0
    extra_rows = 0
    for lo, hi in model.bounds:
        n_cols += 2 if (lo is None and hi is None) else 1
        if lo is not None and hi is not None:
            extra_rows += 1
    m = model.n_rows + extra_rows
    return m * (n_cols + m)


# ---------------------------------------------------------------------------
# dense two-phase simplex


class _StandardForm:
    """Substitution of the model into nonnegative variables.

    x_orig = M @ u + shift, with extra rows for two-sided bounds.
    """

    def __init__(self, model: LPModel):
        n = model.n_vars
        cols = []
        shift = np.zeros(n)
        signs = []
        extra = []  # (std col, upper bound on u)
        for j, (lo, hi) in enumerate(model.bounds):
            if lo is None and hi is None:
                cols.append((j, +1.0))
                cols.append((j, -1.0))
            elif lo is not None:
                shift[j] = lo
                cols.append((j, +1.0))
                if hi is not None:
                    extra.append((len(cols) - 1, hi - lo))
            else:
                shift[j] = hi
                cols.append((j, -1.0))
        self.n_std = len(cols)
        M = np.zeros((n, self.n_std))
        for col, (j, sgn) in enumerate(cols):
            M[j, col] = sgn
        self.M = M
        self.shift = shift
        self.extra = extra

    def to_original(self, u: np.ndarray) -> np.ndarray:
        return self.M @ u + self.shift


def _build_tableau(A_ext: np.ndarray, b: np.ndarray, costs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Fresh tableau for the given basis, straight from the original data.

    Rebuilding at phase boundaries discards the roundoff that rank-1 pivot
    updates accumulate on long runs.
    """
    m, total = A_ext.shape
    T = np.empty((m + 1, total + 1))
    if m:
        B = A_ext[:, basis]
        T[1:, :total] = np.linalg.solve(B, A_ext)
        T[1:, -1] = np.linalg.solve(B, b)
        c_b = costs[basis]
        T[0, :total] = costs - c_b @ T[1:, :total]
        T[0, -1] = -float(c_b @ T[1:, -1])
    else:
        T[0, :total] = costs
        T[0, -1] = 0.0
    return T


def _solve_simplex(model: LPModel) -> LPSolution:
    sf = _StandardForm(model)
    n_std = sf.n_std

    rows = []
    rhs = []
    for coeffs, sense, b in model.rows:
        a_std = coeffs @ sf.M
        b_std = b - float(coeffs @ sf.shift)
        if sense == ">=":
            a_std, b_std = -a_std, -b_std
        rows.append(a_std)
        rhs.append(b_std)
    for col, ub in sf.extra:
        a = np.zeros(n_std)
        a[col] = 1.0
        rows.append(a)
        rhs.append(float(ub))

    A = np.array(rows, dtype=float) if rows else np.zeros((0, n_std))
    b = np.array(rhs, dtype=float)
    m = A.shape[0]

    c_std = model.objective @ sf.M

    # Equalities with slacks; flip rows so b >= 0, then rows whose slack got
    # flipped need an artificial for the initial basis.
    neg = b < 0
    A = np.where(neg[:, None], -A, A)
    b = np.where(neg, -b, b)
    need_art = np.nonzero(neg)[0]
    n_art = len(need_art)

    slacks = np.where(neg, -1.0, 1.0)
    A_ext = np.hstack([A, np.diag(slacks), np.zeros((m, n_art))])
    for k, i in enumerate(need_art):
        A_ext[i, n_std + m + k] = 1.0
    basis = n_std + np.arange(m, dtype=np.int64)
    basis[need_art] = n_std + m + np.arange(n_art)

    cap = max(2000, 50 * (m + A_ext.shape[1]))

    if n_art:
        # Phase 1: minimize the sum of artificials.
        phase1_costs = np.zeros(A_ext.shape[1])
        phase1_costs[n_std + m :] = 1.0
        status, _ = _run_phase(A_ext, b, phase1_costs, basis, usable=n_std + m, cap=cap)
        if status == UNBOUNDED:
            raise ArithmeticError("phase-1 objective cannot be unbounded")
        # refresh before reading the verdict: long pivot runs drift
        T = _build_tableau(A_ext, b, phase1_costs, basis)
        if -T[0, -1] > FEASIBILITY_TOL:
            return LPSolution(INFEASIBLE, float("nan"), None)
        _drive_out_artificials(T, basis, n_std + m)
        keep = basis < n_std + m
        if not np.all(keep):
            # rows still pivoted on an artificial are 0 = 0 identities
            A_ext = A_ext[keep]
            b = b[keep]
            basis = basis[keep]
            m = len(basis)

    # Phase 2: minimize -c (i.e. maximize c), artificials dropped.
    A_ext = A_ext[:, : n_std + A.shape[0]]
    total = A_ext.shape[1]
    phase2_costs = np.zeros(total)
    phase2_costs[:n_std] = -c_std
    status, T = _run_phase(A_ext, b, phase2_costs, basis, usable=total, cap=cap)
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, float("inf"), None)

    u = np.zeros(total)
    u[basis] = T[1:, -1]
    x = sf.to_original(u[:n_std])
    value = float(model.objective @ x)

    _check_feasible(model, x)
    return LPSolution(OPTIMAL, value, x)


def _drive_out_artificials(T, basis, n_real):
    """Pivot basic artificials onto real columns where possible."""
    m = len(basis)
    for r in range(m):
        if basis[r] < n_real:
            continue
        row = T[1 + r, :n_real]
        cands = np.nonzero(np.abs(row) > _PIVOT_TOL)[0]
        if cands.size == 0:
            continue
        j = int(cands[0])
        _pivot(T, r, j)
        basis[r] = j


def _pivot(T, r, j):
    T[1 + r, :] /= T[1 + r, j]
    col = T[:, j].copy()
    col[1 + r] = 0.0
    T -= np.outer(col, T[1 + r, :])


_REFACTOR_EVERY = 500
_NEEDS_REBUILD = "needs_rebuild"


class _PivotState:
    """Pricing-rule state that survives tableau rebuilds."""

    def __init__(self):
        self.bland = False
        self.stall = 0
        self.pivots = 0


def _iterate(T, basis, usable: int, state: _PivotState, budget: int) -> str:
    """Run up to ``budget`` simplex pivots on the tableau.

    Dantzig pricing by default (ratio ties resolved toward the largest
    pivot element, which keeps the rank-1 updates tame); switches
    permanently to Bland's rule after _STALL_LIMIT pivots without objective
    improvement, which rules out cycling. Returns OPTIMAL, UNBOUNDED, or
    _NEEDS_REBUILD when the budget is spent.
    """
    m = T.shape[0] - 1
    if m == 0:
        if np.any(T[0, :usable] < -_COST_TOL):
            return UNBOUNDED
        return OPTIMAL
    in_basis = np.zeros(T.shape[1] - 1, dtype=bool)
    in_basis[basis] = True
    last_obj = T[0, -1]
    for _ in range(budget):
        # basic columns are never priced: their reduced costs are zero by
        # construction and only numerical drift could suggest otherwise
        costs = np.where(in_basis[:usable], np.inf, T[0, :usable])
        if state.bland:
            negs = np.nonzero(costs < -_COST_TOL)[0]
            if negs.size == 0:
                return OPTIMAL
            j = int(negs[0])
        else:
            j = int(np.argmin(costs))
            if costs[j] >= -_COST_TOL:
                return OPTIMAL
        col = T[1:, j]
        pos = col > _PIVOT_TOL
        if not np.any(pos):
            return UNBOUNDED
        ratios = np.full(m, np.inf)
        ratios[pos] = np.maximum(T[1:, -1][pos], 0.0) / col[pos]
        best = float(np.min(ratios))
        ties = np.nonzero(ratios == best)[0]
        if state.bland:
            r = int(ties[np.argmin(basis[ties])])
        else:
            r = int(ties[np.argmax(col[ties])])
        _pivot(T, r, j)
        in_basis[basis[r]] = False
        in_basis[j] = True
        basis[r] = j

        state.pivots += 1
        obj = T[0, -1]
        if not state.bland:
            if obj > last_obj + 1e-12:
                state.stall = 0
            else:
                state.stall += 1
                if state.stall >= _STALL_LIMIT:
                    state.bland = True
        last_obj = obj
    return _NEEDS_REBUILD


def _run_phase(A_ext, b, costs, basis, usable: int, cap: int):
    """Iterate with periodic refactorization until optimal or unbounded.

    Returns (status, final tableau).
    """
    state = _PivotState()
    while True:
        T = _build_tableau(A_ext, b, costs, basis)
        status = _iterate(T, basis, usable, state, _REFACTOR_EVERY)
        if status != _NEEDS_REBUILD:
            return status, T
        if state.pivots > cap:
            raise IterationLimitError(f"simplex exceeded {cap} pivots")


def _check_feasible(model: LPModel, x: np.ndarray) -> None:
    scale = 1.0 + float(np.max(np.abs(x), initial=0.0))
    for k, (coeffs, sense, rhs) in enumerate(model.rows):
        val = float(coeffs @ x)
        err = val - rhs if sense == "<=" else rhs - val
        if err > FEASIBILITY_TOL * scale:
            raise ArithmeticError(f"solver returned a point violating row {k} by {err:.3e}")
    for j, (lo, hi) in enumerate(model.bounds):
        if lo is not None and x[j] < lo - FEASIBILITY_TOL * scale:
            raise ArithmeticError(f"solver returned x[{j}] below its lower bound")
        if hi is not None and x[j] > hi + FEASIBILITY_TOL * scale:
            raise ArithmeticError(f"solver returned x[{j}] above its upper bound")


# ---------------------------------------------------------------------------
# scipy backend


def _solve_scipy(model: LPModel) -> LPSolution:
    from scipy.optimize import linprog

    n = model.n_vars
    A_ub = []
    b_ub = []
    for coeffs, sense, rhs in model.rows:
        if sense == "<=":
            A_ub.append(coeffs)
            b_ub.append(rhs)
        else:
            A_ub.append(-coeffs)
            b_ub.append(-rhs)
    res = linprog(
        c=-model.objective,
        A_ub=np.asarray(A_ub) if A_ub else None,
        b_ub=np.asarray(b_ub) if b_ub else None,
        bounds=model.bounds,
        method="highs",
    )
    if res.status == 0:
        x = np.asarray(res.x, dtype=float)
        _check_feasible(model, x)
        return LPSolution(OPTIMAL, float(model.objective @ x), x)
    if res.status == 2:
        return LPSolution(INFEASIBLE, float("nan"), None)
    if res.status == 3:
        return LPSolution(UNBOUNDED, float("inf"), None)
    raise RuntimeError(f"scipy backend failed: {res.message}")


# ---------------------------------------------------------------------------
# debug dump


def lp_format(model: LPModel, name: str = "model") -> str:
    """Render the model in CPLEX-LP-style text.

    Layout: a ``Maximize`` section with the objective, ``Subject To`` with
    one named row per line (``c<k>: <terms> <= <rhs>``), a ``Bounds``
    section (``x<j> free`` or ``lo <= x<j> <= hi``; one-sided bounds omit
    the missing side), and ``End``. Variables are named x0..x{n-1}.
    """

    def terms(coeffs) -> str:
        parts = []
        for j, v in enumerate(coeffs):
            if v == 0:
                continue
            sign = "-" if v < 0 else ("+" if parts else "")
            mag = abs(v)
            parts.append(f"{sign} {mag:g} x{j}".strip())
        return " ".join(parts) if parts else "0"

    lines = [f"\\ {name}", "Maximize", f" obj: {terms(model.objective)}", "Subject To"]
    for k, (coeffs, sense, rhs) in enumerate(model.rows):
        lines.append(f" c{k}: {terms(coeffs)} {sense} {rhs:g}")
    lines.append("Bounds")
    for j, (lo, hi) in enumerate(model.bounds):
        if lo is None and hi is None:
            lines.append(f" x{j} free")
        elif lo is None:
            lines.append(f" x{j} <= {hi:g}")
        elif hi is None:
            lines.append(f" x{j} >= {lo:g}")
        else:
            lines.append(f" {lo:g} <= x{j} <= {hi:g}")
    lines.append("End")
    return "\n".join(lines) + "\n"
