"""Self-contained dense linear-program solver.

Two-phase tableau simplex sized for problems with tens of variables and
constraints.  Bland's rule is used for both the entering and leaving
choices, so the iteration cannot cycle; dense numpy row operations keep
each pivot cheap at this scale.  Free variables are handled internally by
sign-splitting and shifted bounds; callers only ever see values for their
original variables.

``linearize_abs`` lifts a sum-of-absolute-values objective into this pure
LP form with one auxiliary variable per lifted term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np


class UnknownVariable(KeyError):
    """A referenced variable name is not part of the problem."""


class NumericalBreakdown(RuntimeError):
    """The pivoting loop could not complete: the iteration cap was exhausted
    or a phase produced a numerically impossible outcome.  Matrix entries at
    or below the pivot threshold are treated as exact zeros, so problems
    whose meaningful coefficients approach that threshold are outside the
    solver's conditioning envelope."""


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    """min objective . x  subject to  eq_matrix x = eq_rhs,
    row . x <= bound for each inequality row, and per-variable bounds."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    ineq_rows: tuple[tuple[np.ndarray, float], ...]
    variable_bounds: tuple[tuple[float, float], ...]
    variable_names: tuple[str, ...]

    def __post_init__(self):
        n = len(self.variable_names)
        if len(set(self.variable_names)) != n:
            raise ValueError("variable names must be unique")
        objective = np.asarray(self.objective, dtype=float).reshape(-1)
        if objective.shape != (n,):
            raise ValueError(f"objective has {objective.shape[0]} entries for {n} variables")
        eq_matrix = np.asarray(self.eq_matrix, dtype=float).reshape(-1, n) \
            if np.size(self.eq_matrix) else np.zeros((0, n))
        eq_rhs = np.asarray(self.eq_rhs, dtype=float).reshape(-1)
        if eq_matrix.shape[0] != eq_rhs.shape[0]:
            raise ValueError("eq_matrix and eq_rhs row counts differ")
        rows = []
        for coeffs, bound in self.ineq_rows:
            coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
            if coeffs.shape != (n,):
                raise ValueError("inequality row length does not match variable count")
            rows.append((coeffs, float(bound)))
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.variable_bounds)
        if len(bounds) != n:
            raise ValueError("variable_bounds length does not match variable count")
        for name, (lo, hi) in zip(self.variable_names, bounds):
            if lo > hi:
                raise ValueError(f"variable {name!r} has lower bound {lo} > upper bound {hi}")
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "eq_matrix", eq_matrix)
        object.__setattr__(self, "eq_rhs", eq_rhs)
        object.__setattr__(self, "ineq_rows", tuple(rows))
        object.__setattr__(self, "variable_bounds", bounds)
        object.__setattr__(self, "variable_names", tuple(self.variable_names))

    @classmethod
    def build(cls, objective, variable_names: Sequence[str], *, eq_matrix=None,
              eq_rhs=None, ineq_rows=(), variable_bounds=None) -> "LpProblem":
        """Convenience constructor with free variables by default."""
        names = tuple(variable_names)
        n = len(names)
        if eq_matrix is None:
            eq_matrix = np.zeros((0, n))
            eq_rhs = np.zeros(0)
        if variable_bounds is None:
            variable_bounds = ((-math.inf, math.inf),) * n
        return cls(objective=objective, eq_matrix=eq_matrix, eq_rhs=eq_rhs,
                   ineq_rows=tuple(ineq_rows), variable_bounds=tuple(variable_bounds),
                   variable_names=names)

    def index_of(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise UnknownVariable(name) from None


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    values: np.ndarray | None       # aligned with the problem's variable_names
    objective_value: float | None
    iterations: int

    def value_of(self, problem: LpProblem, name: str) -> float:
        if self.values is None:
            raise ValueError(f"no solution values available (status {self.status.value})")
        return float(self.values[problem.index_of(name)])


def linearize_abs(problem: LpProblem, abs_variables: Sequence[str]) -> LpProblem:
    """Lift |v| terms: for each named v add t_v with t_v >= v, t_v >= -v.

    Each lifted variable's own cost entry is replaced by a unit cost on its
    auxiliary, so minimizing the lifted objective minimizes the sum of the
    absolute values of the named variables.
    """
    for name in abs_variables:
        if name not in problem.variable_names:
            raise UnknownVariable(name)

    n = len(problem.variable_names)
    extra = len(abs_variables)
    aux_names = []
    for name in abs_variables:
        aux = f"abs_{name}"
        if aux in problem.variable_names or aux in aux_names:
            raise ValueError(f"auxiliary name {aux!r} collides with an existing variable")
        aux_names.append(aux)

    objective = np.concatenate([problem.objective, np.ones(extra)])
    eq_matrix = np.hstack([problem.eq_matrix, np.zeros((problem.eq_matrix.shape[0], extra))])

    rows = [(np.concatenate([coeffs, np.zeros(extra)]), bound)
            for coeffs, bound in problem.ineq_rows]
    for k, name in enumerate(abs_variables):
        idx = problem.index_of(name)
        objective[idx] = 0.0
        up = np.zeros(n + extra)
        up[idx] = 1.0
        up[n + k] = -1.0
        rows.append((up, 0.0))          # v - t <= 0
        down = np.zeros(n + extra)
        down[idx] = -1.0
        down[n + k] = -1.0
        rows.append((down, 0.0))        # -v - t <= 0

    bounds = problem.variable_bounds + ((0.0, math.inf),) * extra
    return LpProblem(objective=objective, eq_matrix=eq_matrix, eq_rhs=problem.eq_rhs,
                     ineq_rows=tuple(rows), variable_bounds=bounds,
                     variable_names=problem.variable_names + tuple(aux_names))


# Internal per-variable transforms into nonnegative standard-form columns.
_SHIFT = "shift"      # x = y + lo
_FLIP = "flip"        # x = hi - y
_SPLIT = "split"      # x = y_pos - y_neg


def _standardize(problem: LpProblem):
    """Rewrite the problem over nonnegative variables.

    Returns (columns-per-original-variable transform list, constraint rows)
    where every row is (coefficients, rhs, is_equality) over the new
    variables.  Doubly-bounded variables contribute an extra upper-bound
    row; shifts and flips fold the bound constants into each row's rhs.
    """
    transforms = []     # (kind, column index or (pos, neg), constant)
    ncols = 0
    extra_rows = []     # (column, upper value) for doubly-bounded variables
    for lo, hi in problem.variable_bounds:
        lo_finite, hi_finite = math.isfinite(lo), math.isfinite(hi)
        if lo_finite:
            transforms.append((_SHIFT, ncols, lo))
            if hi_finite:
                extra_rows.append((ncols, hi - lo))
            ncols += 1
        elif hi_finite:
            transforms.append((_FLIP, ncols, hi))
            ncols += 1
        else:
            transforms.append((_SPLIT, (ncols, ncols + 1), 0.0))
            ncols += 2

    def convert(coeffs):
        row = np.zeros(ncols)
        shift = 0.0
        for a, (kind, where, const) in zip(coeffs, transforms):
            if a == 0.0:
                continue
            if kind == _SHIFT:
                row[where] = a
                shift += a * const
            elif kind == _FLIP:
                row[where] = -a
                shift += a * const
            else:
                row[where[0]] = a
                row[where[1]] = -a
        return row, shift

    rows = []
    for i in range(problem.eq_matrix.shape[0]):
        row, shift = convert(problem.eq_matrix[i])
        rows.append((row, problem.eq_rhs[i] - shift, True))
    for coeffs, bound in problem.ineq_rows:
        row, shift = convert(coeffs)
        rows.append((row, bound - shift, False))
    for colidx, upper in extra_rows:
        row = np.zeros(ncols)
        row[colidx] = 1.0
        rows.append((row, upper, False))

    cost, _ = convert(problem.objective)
    return transforms, ncols, rows, cost


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def _iterate(tableau: np.ndarray, basis: list[int], allowed: int, opt_tol: float,
             pivot_tol: float, max_iterations: int, iteration_start: int) -> tuple[str, int]:
    """Run Bland-rule simplex on the tableau until optimal or unbounded.

    ``allowed`` restricts entering columns to indices below it (used to bar
    artificial columns during phase 2).  Returns (outcome, iterations).
    """
    iterations = iteration_start
    while True:
        reduced = tableau[-1, :allowed]
        candidates = np.nonzero(reduced < -opt_tol)[0]
        if candidates.size == 0:
            return "optimal", iterations
        if iterations >= max_iterations:
            raise NumericalBreakdown(f"iteration limit {max_iterations} exceeded")
        entering = int(candidates[0])               # Bland: lowest index
        column = tableau[:-1, entering]
        rhs = tableau[:-1, -1]
        # entries at or below the pivot threshold count as zero, so a column
        # with no eligible pivot is an unbounded ray
        eligible = column > pivot_tol
        if not eligible.any():
            return "unbounded", iterations
        ratios = np.full(column.shape, np.inf)
        ratios[eligible] = rhs[eligible] / column[eligible]
        best = ratios.min()
        tied = np.nonzero(ratios <= best)[0]
        leaving = int(min(tied, key=lambda r: basis[r]))   # Bland on ties
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering
        iterations += 1


def solve_lp(problem: LpProblem, *, feasibility_tol: float = 1e-9,
             pivot_tol: float = 1e-12, max_iterations: int | None = None) -> LpSolution:
    """Two-phase dense simplex.

    Returns an optimal vertex solution, or Infeasible/Unbounded.  The
    solution point is one representative of a possibly non-unique optimal
    face; the objective value is the contract.
    """
    transforms, ncols, rows, cost = _standardize(problem)
    m = len(rows)
    if max_iterations is None:
        max_iterations = max(1000, 200 * (m + ncols))

    # Orient every row to a nonnegative rhs, then attach slack / surplus /
    # artificial columns.  kinds: 'le' gets a slack; 'ge' a surplus and an
    # artificial; 'eq' an artificial.
    oriented = []
    for row, rhs, is_eq in rows:
        if rhs < 0.0:
            row, rhs = -row, -rhs
            kind = "eq" if is_eq else "ge"
        else:
            kind = "eq" if is_eq else "le"
        oriented.append((row, rhs, kind))

    n_slack = sum(1 for _, _, kind in oriented if kind == "le")
    n_surplus = sum(1 for _, _, kind in oriented if kind == "ge")
    n_art = sum(1 for _, _, kind in oriented if kind in ("ge", "eq"))
    slack0 = ncols
    surplus0 = slack0 + n_slack
    art0 = surplus0 + n_surplus
    total = art0 + n_art

    tableau = np.zeros((m + 1, total + 1))
    basis: list[int] = []
    si = ui = ai = 0
    for i, (row, rhs, kind) in enumerate(oriented):
        tableau[i, :ncols] = row
        tableau[i, -1] = rhs
        if kind == "le":
            tableau[i, slack0 + si] = 1.0
            basis.append(slack0 + si)
            si += 1
        else:
            if kind == "ge":
                tableau[i, surplus0 + ui] = -1.0
                ui += 1
            tableau[i, art0 + ai] = 1.0
            basis.append(art0 + ai)
            ai += 1

    iterations = 0
    if n_art:
        # Phase 1: minimize the sum of artificials.
        tableau[-1, art0:art0 + n_art] = 1.0
        for r, b in enumerate(basis):
            if b >= art0:
                tableau[-1] -= tableau[r]
        outcome, iterations = _iterate(tableau, basis, total, feasibility_tol,
                                       pivot_tol, max_iterations, iterations)
        if outcome == "unbounded":    # cannot happen for a sum of nonnegatives
            raise NumericalBreakdown("phase 1 reported an unbounded artificial objective")
        if -tableau[-1, -1] > feasibility_tol:
            return LpSolution(status=LpStatus.INFEASIBLE, values=None,
                              objective_value=None, iterations=iterations)
        # Drive leftover artificials out of the basis; rows that cannot
        # pivot on any real column are redundant and are dropped.
        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if basis[r] < art0:
                continue
            real = np.abs(tableau[r, :art0])
            pivot_col = int(np.argmax(real))
            if real[pivot_col] > pivot_tol:
                _pivot(tableau, r, pivot_col)
                basis[r] = pivot_col
            else:
                keep[r] = False
        if not keep.all():
            tableau = np.vstack([tableau[:-1][keep], tableau[-1:]])
            basis = [b for b, k in zip(basis, keep) if k]
            m = len(basis)

    # Phase 2 over the real columns only.
    tableau[-1, :] = 0.0
    tableau[-1, :ncols] = cost
    for r, b in enumerate(basis):
        if b < ncols and cost[b] != 0.0:
            tableau[-1] -= cost[b] * tableau[r]
    outcome, iterations = _iterate(tableau, basis, art0, feasibility_tol,
                                   pivot_tol, max_iterations, iterations)
    if outcome == "unbounded":
        return LpSolution(status=LpStatus.UNBOUNDED, values=None,
                          objective_value=None, iterations=iterations)

    y = np.zeros(total)
    for r, b in enumerate(basis):
        y[b] = tableau[r, -1]
    values = np.empty(len(problem.variable_names))
    for j, (kind, where, const) in enumerate(transforms):
        if kind == _SHIFT:
            values[j] = y[where] + const
        elif kind == _FLIP:
            values[j] = const - y[where]
        else:
            values[j] = y[where[0]] - y[where[1]]
    objective = float(problem.objective @ values)
    return LpSolution(status=LpStatus.OPTIMAL, values=values,
                      objective_value=objective, iterations=iterations)
