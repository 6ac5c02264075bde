"""Dense two-phase tableau simplex with Bland's rule.

The programs solved here are small (tens of variables, at most a few
thousand rows), so the engine favours determinism over speed: a full dense
tableau, no presolve, and Bland's lowest-index rule for both the entering
and the leaving variable so that degenerate programs cannot cycle.

Variables are free unless flagged nonnegative; free variables are split
into a difference of two nonnegative columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvariantError, NumericalError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# reduced costs above -OPT_TOL count as nonnegative
OPT_TOL = 1e-9
# entries at or below PIVOT_TOL never become pivots
PIVOT_TOL = 1e-9
# pivots this small mean the tableau has lost precision
TINY_PIVOT = 1e-11
PHASE_ONE_TOL = 1e-8
FEAS_TOL = 1e-8
MAX_PIVOTS = 100_000

_RELATIONS = {"<=": "<=", "≤": "<=", "le": "<=",
              ">=": ">=", "≥": ">=", "ge": ">=",
              "==": "==", "=": "==", "eq": "=="}


@dataclass(frozen=True)
class Constraint:
    coeffs: np.ndarray
    bound: float
    relation: str

    @classmethod
    def make(cls, coeffs, bound, relation):
        rel = _RELATIONS.get(relation)
        if rel is None:
            raise InvariantError(f"unknown relation {relation!r}", "relation")
        return cls(np.asarray(coeffs, dtype=float), float(bound), rel)

    def residual(self, x):
        """Amount by which ``x`` violates the constraint (0 when satisfied)."""
        lhs = float(self.coeffs @ x)
        if self.relation == "<=":
            return max(0.0, lhs - self.bound)
        if self.relation == ">=":
            return max(0.0, self.bound - lhs)
        return abs(lhs - self.bound)


class LinearProgram:
    """Minimize ``c @ x`` subject to a list of linear constraints.

    ``constraints`` holds ``(coeffs, bound, relation)`` triples or
    :class:`Constraint` objects. ``nonneg`` optionally marks variables
    restricted to ``x >= 0``; every other variable is free.
    """

    def __init__(self, objective, constraints=(), nonneg=None):
        self.objective = np.asarray(objective, dtype=float).ravel()
        n = self.objective.size
        cons = []
        for con in constraints:
            if not isinstance(con, Constraint):
                con = Constraint.make(*con)
            if con.coeffs.shape != (n,):
                raise InvariantError(
                    f"constraint has {con.coeffs.size} coefficients, expected {n}",
                    "shape")
            cons.append(con)
        self.constraints = tuple(cons)
        if nonneg is None:
            nonneg = np.zeros(n, dtype=bool)
        self.nonneg = np.asarray(nonneg, dtype=bool).ravel()
        if self.nonneg.shape != (n,):
            raise InvariantError("nonneg mask has the wrong length", "shape")
        if not np.all(np.isfinite(self.objective)) or not all(
                np.all(np.isfinite(c.coeffs)) and np.isfinite(c.bound)
                for c in self.constraints):
            raise InvariantError("non-finite coefficient", "finite")

    @property
    def num_vars(self):
        return self.objective.size

    @classmethod
    def from_arrays(cls, c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
                    A_lb=None, b_lb=None, nonneg=None):
        """Build from stacked matrices: ``A_ub x <= b_ub``, ``A_lb x >= b_lb``,
        ``A_eq x == b_eq``."""
        cons = []
        for A, b, rel in ((A_ub, b_ub, "<="), (A_lb, b_lb, ">="), (A_eq, b_eq, "==")):
            if A is None:
                continue
            for row, rhs in zip(np.atleast_2d(A), np.atleast_1d(b)):
                cons.append(Constraint(np.asarray(row, dtype=float), float(rhs), rel))
        return cls(c, cons, nonneg)


@dataclass
class LpOutcome:
    status: str
    value: float = float("nan")
    x: np.ndarray | None = None
    pivots: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def optimal(self):
        return self.status == OPTIMAL


def _bland_pivot_row(T, col, basis, m):
    column = T[:m, col]
    rows = np.nonzero(column > PIVOT_TOL)[0]
    if rows.size == 0:
        if np.any(column > TINY_PIVOT):
            raise NumericalError(
                f"only tiny pivots (<= {PIVOT_TOL:g}) available in column {col}")
        return -1
    ratios = T[rows, -1] / column[rows]
    best = ratios.min()
    tied = rows[ratios <= best + 1e-12 * (1.0 + abs(best))]
    # Bland: among tied rows leave the lowest-indexed basic variable
    return int(tied[np.argmin(basis[tied])])


def _pivot(T, row, col, basis):
    piv = T[row, col]
    if abs(piv) < TINY_PIVOT:
        raise NumericalError(f"pivot {piv:.3e} below {TINY_PIVOT:g}")
    T[row] /= piv
    factor = T[:, col].copy()
    factor[row] = 0.0
    T -= np.outer(factor, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _run_simplex(T, basis, m, allowed, count):
    """Iterate Bland pivots on tableau ``T`` (objective in the last row).

    Returns (status, pivots). ``allowed`` masks columns that may enter.
    """
    ncols = T.shape[1] - 1
    cost = T[m, :ncols]
    while True:
        candidates = np.nonzero((cost < -OPT_TOL) & allowed)[0]
        if candidates.size == 0:
            return OPTIMAL, count
        col = int(candidates[0])
        row = _bland_pivot_row(T, col, basis, m)
        if row < 0:
            return UNBOUNDED, count
        _pivot(T, row, col, basis)
        count += 1
        if count > MAX_PIVOTS:
            raise NumericalError(f"no convergence after {MAX_PIVOTS} pivots")


def solve_lp(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` by the two-phase simplex method.

    Infeasibility is declared when the phase-one optimum exceeds 1e-8.
    Every optimal witness is re-checked against the original constraints;
    a residual above 1e-8 raises :class:`NumericalError` instead of
    returning a wrong answer.
    """
    n = lp.num_vars
    # column map: each original variable -> (plus column, minus column or -1)
    plus = np.arange(n)
    minus = np.full(n, -1)
    ncol = n
    for j in range(n):
        if not lp.nonneg[j]:
            minus[j] = ncol
            ncol += 1
    n_struct = ncol

    cons = lp.constraints
    m = len(cons)
    A = np.zeros((m, n_struct))
    b = np.zeros(m)
    rel = []
    for i, con in enumerate(cons):
        row = np.zeros(n_struct)
        row[plus] = con.coeffs
        free = minus >= 0
        row[minus[free]] = -con.coeffs[free]
        r, rhs = con.relation, con.bound
        if rhs < 0:
            row, rhs = -row, -rhs
            r = {"<=": ">=", ">=": "<=", "==": "=="}[r]
        A[i], b[i] = row, rhs
        rel.append(r)

    n_slack = sum(1 for r in rel if r != "==")
    art_rows = [i for i, r in enumerate(rel) if r != "<="]
    n_art = len(art_rows)
    total = n_struct + n_slack + n_art
    T = np.zeros((m + 1, total + 1))
    T[:m, :n_struct] = A
    T[:m, -1] = b
    basis = np.zeros(m, dtype=int)
    s = n_struct
    a = n_struct + n_slack
    for i, r in enumerate(rel):
        if r == "<=":
            T[i, s] = 1.0
            basis[i] = s
            s += 1
        elif r == ">=":
            T[i, s] = -1.0
            s += 1
            T[i, a] = 1.0
            basis[i] = a
            a += 1
        else:
            T[i, a] = 1.0
            basis[i] = a
            a += 1

    pivots = 0
    art_start = n_struct + n_slack
    if n_art:
        T[m, :art_start] = -T[art_rows, :art_start].sum(axis=0)
        T[m, -1] = -T[art_rows, -1].sum()
        allowed = np.ones(total, dtype=bool)
        _, pivots = _run_simplex(T, basis, m, allowed, pivots)
        if -T[m, -1] > PHASE_ONE_TOL:
            return LpOutcome(INFEASIBLE, pivots=pivots,
                             extra={"phase_one": float(-T[m, -1])})
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if basis[i] >= art_start:
                row = T[i, :art_start]
                nz = np.nonzero(np.abs(row) > PIVOT_TOL)[0]
                if nz.size == 0:
                    continue
                _pivot(T, i, int(nz[0]), basis)
                pivots += 1
            keep.append(i)
        if len(keep) < m:
            T = np.vstack([T[keep], T[m:]])
            basis = basis[keep]
            m = len(keep)
        T = np.hstack([T[:, :art_start], T[:, -1:]])
        total = art_start

    # phase two objective row
    c_std = np.zeros(total)
    c_std[plus] = lp.objective
    free = minus >= 0
    c_std[minus[free]] = -lp.objective[free]
    T[m, :total] = c_std - c_std[basis] @ T[:m, :total]
    T[m, -1] = -c_std[basis] @ T[:m, -1]
    allowed = np.ones(total, dtype=bool)
    status, pivots = _run_simplex(T, basis, m, allowed, pivots)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED, pivots=pivots)

    x_std = np.zeros(total)
    x_std[basis] = T[:m, -1]
    x_std = _refine(A, b, rel, basis, x_std, n_struct, total)
    x = x_std[plus].copy()
    x[free] -= x_std[minus[free]]
    worst = max((con.residual(x) / max(1.0, abs(con.bound)) for con in cons),
                default=0.0)
    if worst > FEAS_TOL:
        raise NumericalError(f"witness violates a constraint by {worst:.3e}")
    return LpOutcome(OPTIMAL, float(lp.objective @ x), x, pivots)


def _refine(A, b, rel, basis, x_std, n_struct, total):
    """Recompute basic values from the original columns to shed pivot drift."""
    m = len(basis)
    if m == 0:
        return x_std
    cols = np.zeros((A.shape[0], total))
    cols[:, :n_struct] = A
    s = n_struct
    for i, r in enumerate(rel):
        if r == "<=":
            cols[i, s] = 1.0
            s += 1
        elif r == ">=":
            cols[i, s] = -1.0
            s += 1
    B = cols[:, basis]
    if B.shape[0] != B.shape[1]:
        return x_std
    try:
        xb = np.linalg.solve(B, b)
    except np.linalg.LinAlgError:
        return x_std
    if not np.all(np.isfinite(xb)) or np.max(np.abs(xb - x_std[basis])) > 1e-6:
        return x_std
    out = x_std.copy()
    out[basis] = np.maximum(xb, 0.0)
    return out


def min_gauge_subject_to(gauge, constraints: Sequence = ()) -> LpOutcome:
    """Minimize the polyhedral gauge ``||p||_K`` under extra linear constraints.

    Solves ``min t`` over ``(p, t)`` with ``a_i . p <= t`` for every facet
    normal of ``K`` together with the caller's constraints on ``p``.
    The outcome's ``x`` is the minimizing point ``p`` and ``value`` is ``t``.
    """
    normals = getattr(gauge, "normals", None)
    if normals is None:
        raise InvariantError("min_gauge_subject_to needs a polyhedral gauge", "polyhedral")
    d = normals.shape[1]
    obj = np.zeros(d + 1)
    obj[d] = 1.0
    rows = [Constraint(np.append(a, -1.0), 0.0, "<=") for a in normals]
    for con in constraints:
        if isinstance(con, Constraint):
            coeffs, bound, rel = con.coeffs, con.bound, con.relation
        else:
            coeffs, bound, rel = con
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (d,):
            raise InvariantError("constraint dimension does not match gauge", "dimension")
        rows.append(Constraint.make(np.append(coeffs, 0.0), bound, rel))
    res = solve_lp(LinearProgram(obj, rows))
    if res.optimal:
        p = res.x[:d]
        p[np.abs(p) < 1e-13] = 0.0
        return LpOutcome(OPTIMAL, float(res.x[d]), p, res.pivots)
    return res
