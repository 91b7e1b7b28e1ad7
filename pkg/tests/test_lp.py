import math

import numpy as np
import pytest

from pipeclimb import statics
from pipeclimb.lp import (
    LpProblem,
    LpStatus,
    NumericalBreakdown,
    UnknownVariable,
    linearize_abs,
    solve_lp,
)


def abs_problem(eq=None, rhs=None, rows=()):
    problem = LpProblem.build([0.0], ["x"],
                              eq_matrix=eq, eq_rhs=rhs, ineq_rows=rows)
    return linearize_abs(problem, ["x"])


def robot_problem(params, scenario):
    posture = statics.posture_from_geometry(params, scenario)
    system = statics.assemble_equalities(params, scenario, posture)
    ineqs = statics.assemble_inequalities(params, scenario)
    problem = LpProblem.build(np.zeros(10), statics.VARIABLE_NAMES,
                              eq_matrix=system.matrix, eq_rhs=system.rhs,
                              ineq_rows=[(r.coefficients, r.bound) for r in ineqs.rows])
    return linearize_abs(problem, ["tau1", "tau2", "tau3", "tau4"])


class TestLinearizeAbs:
    def test_pinned_positive(self):
        solution = solve_lp(abs_problem(eq=[[1.0]], rhs=[3.0]))
        assert solution.status is LpStatus.OPTIMAL
        assert solution.objective_value == pytest.approx(3.0)

    def test_pinned_negative(self):
        solution = solve_lp(abs_problem(eq=[[1.0]], rhs=[-2.0]))
        assert solution.objective_value == pytest.approx(2.0)

    def test_interior_zero(self):
        rows = [(np.array([1.0]), 1.0), (np.array([-1.0]), 1.0)]
        solution = solve_lp(abs_problem(rows=rows))
        assert solution.objective_value == pytest.approx(0.0, abs=1e-12)

    def test_unknown_variable(self):
        problem = LpProblem.build([0.0], ["x"])
        with pytest.raises(UnknownVariable):
            linearize_abs(problem, ["y"])

    def test_lifted_shape(self):
        problem = LpProblem.build([0.0, 0.0], ["x", "y"], eq_matrix=[[1.0, 1.0]], eq_rhs=[1.0])
        lifted = linearize_abs(problem, ["x", "y"])
        assert lifted.variable_names == ("x", "y", "abs_x", "abs_y")
        assert len(lifted.ineq_rows) == 4
        np.testing.assert_array_equal(lifted.objective, [0.0, 0.0, 1.0, 1.0])


class TestSolveLp:
    def test_degenerate_optimal_face(self):
        problem = LpProblem.build([1.0, 1.0], ["x1", "x2"],
                                  eq_matrix=[[1.0, 1.0]], eq_rhs=[1.0],
                                  variable_bounds=[(0.0, math.inf)] * 2)
        solution = solve_lp(problem)
        assert solution.status is LpStatus.OPTIMAL
        # the vertex is non-unique; only the objective is contractual
        assert solution.objective_value == pytest.approx(1.0)

    def test_unbounded(self):
        problem = LpProblem.build([-1.0], ["x"], variable_bounds=[(0.0, math.inf)])
        solution = solve_lp(problem)
        assert solution.status is LpStatus.UNBOUNDED
        assert solution.values is None

    def test_infeasible_equalities(self):
        problem = LpProblem.build([0.0], ["x"], eq_matrix=[[1.0], [1.0]], eq_rhs=[1.0, 2.0])
        solution = solve_lp(problem)
        assert solution.status is LpStatus.INFEASIBLE

    def test_infeasible_bounds(self):
        problem = LpProblem.build([0.0], ["x"], eq_matrix=[[1.0]], eq_rhs=[10.0],
                                  variable_bounds=[(0.0, 5.0)])
        assert solve_lp(problem).status is LpStatus.INFEASIBLE

    def test_upper_bound_only(self):
        problem = LpProblem.build([-1.0], ["x"], variable_bounds=[(-math.inf, 5.0)])
        solution = solve_lp(problem)
        assert solution.objective_value == pytest.approx(-5.0)
        assert solution.values[0] == pytest.approx(5.0)

    def test_boxed_variable(self):
        problem = LpProblem.build([1.0], ["x"], variable_bounds=[(-2.0, 7.0)])
        solution = solve_lp(problem)
        assert solution.values[0] == pytest.approx(-2.0)

    def test_free_variable_shift_split(self):
        # min x + y with x free via equality, y >= -3
        problem = LpProblem.build([1.0, 1.0], ["x", "y"],
                                  eq_matrix=[[1.0, 0.0]], eq_rhs=[-11.5],
                                  variable_bounds=[(-math.inf, math.inf), (-3.0, math.inf)])
        solution = solve_lp(problem)
        assert solution.values[0] == pytest.approx(-11.5)
        assert solution.values[1] == pytest.approx(-3.0)

    def test_greater_than_row_via_negative_bound(self):
        # -x <= -3 is x >= 3; exercises the surplus/artificial path
        problem = LpProblem.build([1.0], ["x"],
                                  ineq_rows=[(np.array([-1.0]), -3.0)],
                                  variable_bounds=[(0.0, math.inf)])
        solution = solve_lp(problem)
        assert solution.status is LpStatus.OPTIMAL
        assert solution.values[0] == pytest.approx(3.0)

    def test_redundant_equality_rows_dropped(self):
        # duplicated equality leaves an artificial basic at zero; the row
        # must be recognized as redundant, not reported infeasible
        problem = LpProblem.build([1.0, 1.0], ["x", "y"],
                                  eq_matrix=[[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]],
                                  eq_rhs=[4.0, 4.0, 8.0],
                                  variable_bounds=[(0.0, math.inf)] * 2)
        solution = solve_lp(problem)
        assert solution.status is LpStatus.OPTIMAL
        assert solution.objective_value == pytest.approx(4.0)

    def test_iteration_limit_raises(self):
        problem = LpProblem.build([1.0, 1.0], ["x1", "x2"],
                                  eq_matrix=[[1.0, 1.0]], eq_rhs=[1.0],
                                  variable_bounds=[(0.0, math.inf)] * 2)
        with pytest.raises(NumericalBreakdown, match="iteration limit"):
            solve_lp(problem, max_iterations=0)

    def test_validation_errors(self):
        with pytest.raises(ValueError, match="unique"):
            LpProblem.build([0.0, 0.0], ["x", "x"])
        with pytest.raises(ValueError, match="lower bound"):
            LpProblem.build([0.0], ["x"], variable_bounds=[(1.0, 0.0)])
        with pytest.raises(ValueError, match="objective"):
            LpProblem.build([0.0, 1.0], ["x"])


class TestSolutionQuality:
    def test_constraints_satisfied_at_optimum(self, params, scenario):
        lifted = robot_problem(params, scenario)
        solution = solve_lp(lifted)
        assert solution.status is LpStatus.OPTIMAL
        x = solution.values
        eq_residual = np.max(np.abs(lifted.eq_matrix @ x - lifted.eq_rhs))
        assert eq_residual <= 1e-8
        for coeffs, bound in lifted.ineq_rows:
            assert coeffs @ x <= bound + 1e-8

    def test_determinism(self, params, scenario):
        lifted = robot_problem(params, scenario)
        first = solve_lp(lifted)
        second = solve_lp(lifted)
        assert first.status is second.status
        assert first.objective_value == second.objective_value
        assert first.iterations == second.iterations
        np.testing.assert_array_equal(first.values, second.values)

    def test_positive_homogeneity(self, params, scenario):
        lifted = robot_problem(params, scenario)
        base = solve_lp(lifted)
        alpha = 3.75
        scaled = LpProblem(
            objective=lifted.objective,
            eq_matrix=lifted.eq_matrix,
            eq_rhs=alpha * lifted.eq_rhs,
            ineq_rows=tuple((coeffs, alpha * bound) for coeffs, bound in lifted.ineq_rows),
            variable_bounds=lifted.variable_bounds,
            variable_names=lifted.variable_names)
        assert solve_lp(scaled).objective_value == pytest.approx(
            alpha * base.objective_value, rel=1e-10)

    def test_weak_duality_against_oracle_samples(self, params, scenario):
        """Any feasible point found by the grid oracle costs at least the optimum."""
        from pipeclimb import oracle

        posture = statics.posture_from_geometry(params, scenario)
        system = statics.assemble_equalities(params, scenario, posture)
        ineqs = statics.assemble_inequalities(params, scenario)
        basis = oracle.parametrize_solution_space(system)
        result = oracle.grid_search_optimum(basis, ineqs, statics.TORQUE_INDICES,
                                            half_width=8.0, points_per_axis=21)
        optimum = solve_lp(robot_problem(params, scenario)).objective_value
        assert result.best_objective >= optimum - 1e-9
