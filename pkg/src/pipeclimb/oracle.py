"""Brute-force verifier for the constrained torque optimization.

Every solution of the equality system A x = b is a particular solution
plus a combination of null-space basis vectors, so the optimization
collapses to a low-dimensional box search: walk a uniform grid of basis
coefficients, keep the points that satisfy the inequality rows, and take
the smallest objective.  The result upper-bounds the true optimum and
converges as the grid refines, which makes it an independent check on the
simplex solver (this module deliberately never imports the LP code).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .statics import EqualitySystem, InequalitySet

_CHUNK = 200_000    # grid points evaluated per batch, keeps memory modest


class InconsistentSystem(ValueError):
    """The equality system has no solution at the requested tolerance."""


class NoFeasiblePoint(RuntimeError):
    """No grid point satisfied the inequality rows (widen or refine the box)."""


@dataclass(frozen=True)
class AffineBasis:
    """Affine parametrization x = particular + coefficients @ basis_vectors.

    ``basis_vectors`` holds one orthonormal null-space vector per row, so a
    coefficient vector c of length ``dimension`` maps to the full state
    ``particular_solution + basis_vectors.T @ c``.
    """

    particular_solution: np.ndarray     # (n,), minimum-norm solution of A x = b
    basis_vectors: np.ndarray           # (dimension, n), orthonormal rows
    dimension: int

    def __post_init__(self):
        particular = np.asarray(self.particular_solution, dtype=float)
        vectors = np.asarray(self.basis_vectors, dtype=float)
        if vectors.shape != (self.dimension, particular.shape[0]):
            raise ValueError(f"basis shape {vectors.shape} does not match "
                             f"dimension {self.dimension} x {particular.shape[0]}")
        particular.flags.writeable = False
        vectors.flags.writeable = False
        object.__setattr__(self, "particular_solution", particular)
        object.__setattr__(self, "basis_vectors", vectors)

    def point(self, coefficients: Sequence[float]) -> np.ndarray:
        c = np.asarray(coefficients, dtype=float)
        return self.particular_solution + self.basis_vectors.T @ c

    def coefficients_of(self, x: Sequence[float]) -> np.ndarray:
        """Null-space coefficients of a state (its projection onto the basis)."""
        delta = np.asarray(x, dtype=float) - self.particular_solution
        return self.basis_vectors @ delta


def parametrize_solution_space(system: EqualitySystem, *,
                               tol: float = 1e-10) -> AffineBasis:
    """Affine description of all solutions of the equality system.

    Runs Gauss-Jordan elimination with partial pivoting on the augmented
    matrix to find the rank, check consistency, and read off a particular
    solution plus raw null-space vectors; the raw vectors are then
    orthonormalized and the particular solution projected to minimum norm.
    """
    a = np.array(system.matrix, dtype=float)
    b = np.array(system.rhs, dtype=float)
    m, n = a.shape
    aug = np.hstack([a, b[:, None]])

    pivot_cols: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        pivot = row + int(np.argmax(np.abs(aug[row:, col])))
        if abs(aug[pivot, col]) <= tol:
            continue
        aug[[row, pivot]] = aug[[pivot, row]]
        aug[row] /= aug[row, col]
        others = np.concatenate([np.arange(row), np.arange(row + 1, m)])
        aug[others] -= np.outer(aug[others, col], aug[row])
        pivot_cols.append(col)
        row += 1

    for r in range(row, m):
        if abs(aug[r, -1]) > tol:
            raise InconsistentSystem(
                f"row {r} reduces to 0 = {aug[r, -1]:.3e}; no solution at tolerance {tol}")

    rank = len(pivot_cols)
    free_cols = [c for c in range(n) if c not in pivot_cols]

    particular = np.zeros(n)
    for r, col in enumerate(pivot_cols):
        particular[col] = aug[r, -1]

    raw = np.zeros((len(free_cols), n))
    for k, free in enumerate(free_cols):
        raw[k, free] = 1.0
        for r, col in enumerate(pivot_cols):
            raw[k, col] = -aug[r, free]

    if raw.shape[0]:
        q, _ = np.linalg.qr(raw.T)          # orthonormal columns spanning the kernel
        basis = q.T
        particular = particular - basis.T @ (basis @ particular)
    else:
        basis = np.zeros((0, n))

    if np.max(np.abs(a @ particular - b), initial=0.0) > 100 * tol:
        raise InconsistentSystem("particular solution failed the residual check")
    return AffineBasis(particular_solution=particular, basis_vectors=basis,
                       dimension=n - rank)


@dataclass(frozen=True)
class OracleResult:
    """Outcome of one grid search over the solution space."""

    best_objective: float
    best_point: np.ndarray              # full state at the best grid point
    best_coefficients: np.ndarray
    feasible_count: int
    evaluated_count: int
    grid_step: float
    cell_lipschitz_bound: float         # max objective variation across one grid cell
    half_width: float
    points_per_axis: int


def cell_lipschitz_bound(basis: AffineBasis, torque_index: Sequence[int],
                         grid_step: float) -> float:
    """Bound on how much the torque-sum objective varies across one grid cell.

    The objective is 1-Lipschitz in each |tau_j| term, so its variation over
    a displacement delta is at most sum_j |v_j . delta| with v_j the torque
    rows of the basis; maximizing over a full cell diagonal of side
    ``grid_step`` gives (sum_j ||v_j||) * grid_step * sqrt(dimension).
    """
    torque_rows = basis.basis_vectors[:, list(torque_index)].T    # (n_tau, dim)
    norms = np.linalg.norm(torque_rows, axis=1).sum()
    return float(norms * grid_step * math.sqrt(max(basis.dimension, 1)))


def grid_search_optimum(basis: AffineBasis, ineqs: InequalitySet,
                        torque_index: Sequence[int], half_width: float,
                        points_per_axis: int, *,
                        feasibility_tol: float = 1e-9) -> OracleResult:
    """Exhaustive search of the coefficient box [-half_width, half_width]^dim.

    Every grid point satisfies the equality system by construction, so
    feasibility reduces to the inequality rows.  ``points_per_axis`` must
    be odd (the box center, i.e. the particular solution, is then always a
    grid point and nested refinements reuse coarser grids) and at least 11.
    Raises NoFeasiblePoint when the whole grid violates the inequalities.
    """
    if basis.dimension > 4:
        raise ValueError(f"grid search is limited to dimension <= 4, got {basis.dimension}")
    if points_per_axis < 11:
        raise ValueError(f"points_per_axis must be at least 11, got {points_per_axis}")
    if points_per_axis % 2 == 0:
        raise ValueError(f"points_per_axis must be odd, got {points_per_axis}")
    if not half_width > 0:
        raise ValueError(f"half_width must be positive, got {half_width}")

    dim = basis.dimension
    torque_index = list(torque_index)
    axis = np.linspace(-half_width, half_width, points_per_axis)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij") if dim else []
    coeffs = (np.stack([m.ravel() for m in mesh], axis=1)
              if dim else np.zeros((1, 0)))

    g_matrix = ineqs.matrix()
    g_bounds = ineqs.bounds()
    g_basis = g_matrix @ basis.basis_vectors.T          # (m, dim)
    g_slack = g_bounds - g_matrix @ basis.particular_solution

    tau_particular = basis.particular_solution[torque_index]
    tau_basis = basis.basis_vectors[:, torque_index]    # (dim, n_tau)

    best = math.inf
    best_coeff = None
    feasible = 0
    for start in range(0, coeffs.shape[0], _CHUNK):
        block = coeffs[start:start + _CHUNK]
        ok = np.all(block @ g_basis.T <= g_slack + feasibility_tol, axis=1) \
            if len(ineqs) else np.ones(block.shape[0], dtype=bool)
        count = int(ok.sum())
        if not count:
            continue
        feasible += count
        tau = tau_particular + block[ok] @ tau_basis
        objective = np.abs(tau).sum(axis=1)
        at = int(np.argmin(objective))
        if objective[at] < best:
            best = float(objective[at])
            best_coeff = block[ok][at].copy()

    if best_coeff is None:
        raise NoFeasiblePoint(
            f"none of the {coeffs.shape[0]} grid points satisfied the inequalities; "
            f"widen the box or refine the grid")

    step = 2.0 * half_width / (points_per_axis - 1)
    return OracleResult(
        best_objective=best,
        best_point=basis.point(best_coeff),
        best_coefficients=best_coeff,
        feasible_count=feasible,
        evaluated_count=int(coeffs.shape[0]),
        grid_step=step,
        cell_lipschitz_bound=cell_lipschitz_bound(basis, torque_index, step),
        half_width=float(half_width),
        points_per_axis=int(points_per_axis),
    )
