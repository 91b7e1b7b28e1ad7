import math
from dataclasses import replace

import numpy as np
import pytest

from pipeclimb import statics
from pipeclimb.statics import (
    EquationVariant,
    FrictionSidedness,
    GeometryInfeasible,
    PipeScenario,
    RobotParams,
)

TOTAL_WEIGHT = 0.49 * 9.81      # 3 modules at 0.150 kg + 2 links at 0.020 kg


def scenario_at(diameter, mu=0.7, **kwargs):
    return PipeScenario(pipe_diameter=diameter, friction_coefficient=mu, **kwargs)


class TestRobotParams:
    def test_rejects_nonpositive_values(self):
        with pytest.raises(ValueError, match="module_mass"):
            RobotParams(module_mass=0.0, link_mass=0.02, module_lengths=(0.14,) * 3,
                        module_diameter=0.05, link_lengths=(0.06,) * 2, motor_torque_max=1.0)
        with pytest.raises(ValueError, match="link_lengths"):
            RobotParams(module_mass=0.15, link_mass=0.02, module_lengths=(0.14,) * 3,
                        module_diameter=0.05, link_lengths=(0.06, -0.06), motor_torque_max=1.0)

    def test_rejects_wrong_arity(self):
        with pytest.raises(ValueError, match="three"):
            RobotParams(module_mass=0.15, link_mass=0.02, module_lengths=(0.14, 0.14),
                        module_diameter=0.05, link_lengths=(0.06,) * 2, motor_torque_max=1.0)

    def test_derived_weights(self, params):
        assert params.module_weight == pytest.approx(0.150 * 9.81)
        assert params.link_weight == pytest.approx(0.020 * 9.81)
        assert params.total_weight == pytest.approx(TOTAL_WEIGHT)
        assert params.traction_limit == pytest.approx(80.0)

    def test_scenario_validation(self):
        with pytest.raises(ValueError, match="pipe_diameter"):
            PipeScenario(pipe_diameter=0.0, friction_coefficient=0.7)
        with pytest.raises(ValueError, match="friction_coefficient"):
            PipeScenario(pipe_diameter=0.075, friction_coefficient=-0.1)


class TestPosture:
    def test_reference_bore(self, params):
        posture = statics.posture_from_geometry(params, scenario_at(0.075))
        expected = math.degrees(math.acos(0.025 / 0.060))
        assert posture.theta1_deg == pytest.approx(180.0 - expected, abs=1e-10)
        assert posture.theta2_deg == pytest.approx(expected, abs=1e-10)

    def test_bore_equal_to_module_diameter(self, params):
        posture = statics.posture_from_geometry(params, scenario_at(0.050))
        assert posture.theta1_deg == pytest.approx(90.0)
        assert posture.theta2_deg == pytest.approx(90.0)

    def test_fully_extended_chain(self, params):
        posture = statics.posture_from_geometry(params, scenario_at(0.110))
        assert posture.theta1_deg == pytest.approx(180.0)
        assert posture.theta2_deg == pytest.approx(0.0)

    def test_pipe_narrower_than_module(self, params):
        with pytest.raises(GeometryInfeasible, match="narrower"):
            statics.posture_from_geometry(params, scenario_at(0.049))

    def test_pipe_too_wide(self, params):
        with pytest.raises(GeometryInfeasible, match="span"):
            statics.posture_from_geometry(params, scenario_at(0.1101))

    def test_angle_sum_identity_for_equal_links(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            link = rng.uniform(0.03, 0.12)
            d = rng.uniform(0.02, 0.08)
            bore = d + rng.uniform(0.0, 1.0) * link
            params = RobotParams(module_mass=0.15, link_mass=0.02,
                                 module_lengths=(0.14,) * 3, module_diameter=d,
                                 link_lengths=(link, link), motor_torque_max=1.0)
            posture = statics.posture_from_geometry(params, scenario_at(bore))
            assert posture.theta1 + posture.theta2 == pytest.approx(math.pi, abs=1e-12)

    def test_angle_quadrants_for_unequal_links(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            links = rng.uniform(0.03, 0.12, 2)
            d = rng.uniform(0.02, 0.08)
            bore = d + rng.uniform(0.0, 1.0) * links.min()
            params = RobotParams(module_mass=0.15, link_mass=0.02,
                                 module_lengths=(0.14,) * 3, module_diameter=d,
                                 link_lengths=tuple(links), motor_torque_max=1.0)
            posture = statics.posture_from_geometry(params, scenario_at(bore))
            assert math.pi / 2 <= posture.theta1 <= math.pi
            assert 0.0 <= posture.theta2 <= math.pi / 2


class TestEqualities:
    def test_lateral_balance_row(self, params, scenario, posture):
        system = statics.assemble_equalities(params, scenario, posture)
        expected = np.array([0, 0, 0, 1, -1, 1, 0, 0, 0, 0], dtype=float)
        np.testing.assert_array_equal(system.row("sum_fx"), expected)
        assert system.rhs[0] == 0.0

    def test_vertical_balance_rhs(self, params, scenario, posture):
        system = statics.assemble_equalities(params, scenario, posture)
        assert system.rhs[1] == pytest.approx(4.8069, abs=1e-12)

    def test_bottom_joint_moment_row(self, params, scenario, posture):
        system = statics.assemble_equalities(params, scenario, posture)
        row = system.row("M_J1")
        assert row[system.column("F1")] == pytest.approx(0.025)
        assert row[system.column("N1")] == pytest.approx(0.07)
        assert row[system.column("tau1")] == -1.0
        others = [i for i in range(10) if i not in
                  (system.column("F1"), system.column("N1"), system.column("tau1"))]
        assert np.all(row[others] == 0.0)
        assert system.rhs[2] == 0.0

    def test_rhs_linear_in_masses(self, params, scenario, posture):
        system = statics.assemble_equalities(params, scenario, posture)
        heavier = replace(params, module_mass=params.module_mass * 3.5,
                          link_mass=params.link_mass * 3.5)
        scaled = statics.assemble_equalities(heavier, scenario, posture)
        np.testing.assert_array_equal(scaled.matrix, system.matrix)
        np.testing.assert_allclose(scaled.rhs, 3.5 * system.rhs, rtol=1e-14)

    def test_matrix_independent_of_friction_and_motor(self, params, scenario, posture):
        base = statics.assemble_equalities(params, scenario, posture)
        other = statics.assemble_equalities(
            replace(params, motor_torque_max=17.0),
            replace(scenario, friction_coefficient=0.11), posture)
        np.testing.assert_array_equal(base.matrix, other.matrix)
        np.testing.assert_array_equal(base.rhs, other.rhs)

    def test_shape_and_labels(self, params, scenario, posture):
        system = statics.assemble_equalities(params, scenario, posture)
        assert system.matrix.shape == (7, 10)
        assert system.row_labels == statics.ROW_LABELS
        assert system.variable_index == statics.VARIABLE_NAMES
        assert not system.matrix.flags.writeable

    def test_corrected_variant_notes_substitutions(self, params, scenario, posture):
        corrected = statics.assemble_equalities(
            params, replace(scenario, equation_variant=EquationVariant.SYMMETRY_CORRECTED),
            posture)
        labels_with_notes = [label for label, notes
                             in zip(corrected.row_labels, corrected.row_notes) if notes]
        assert labels_with_notes == ["M_J3", "M_J4a"]
        printed = statics.assemble_equalities(params, scenario, posture)
        assert all(notes == () for notes in printed.row_notes)


class TestVariantDiff:
    def test_diff_confined_to_suspect_rows(self, params, scenario, posture):
        diffs = statics.variant_row_diff(params, scenario, posture)
        assert diffs
        assert {d.row_label for d in diffs} <= {"M_J3", "M_J4a"}

    def test_diff_swaps_module_quantities(self, params, scenario, posture):
        diffs = {(d.row_label, d.variable): d
                 for d in statics.variant_row_diff(params, scenario, posture)}
        swap = diffs[("M_J3", "N1")]
        counterpart = diffs[("M_J3", "N2")]
        assert swap.as_printed == pytest.approx(counterpart.symmetry_corrected)
        assert swap.symmetry_corrected == 0.0


class TestInequalities:
    def test_row_count_two_sided(self, params, scenario):
        ineqs = statics.assemble_inequalities(params, scenario)
        assert len(ineqs) == 15     # 6 friction + 6 motor + 3 normal

    def test_row_count_one_sided(self, params, scenario):
        ineqs = statics.assemble_inequalities(
            params, replace(scenario, friction_sidedness=FrictionSidedness.ONE_SIDED_AS_PRINTED))
        assert len(ineqs) == 12

    def test_row_count_without_normal_rows(self, params, scenario):
        ineqs = statics.assemble_inequalities(
            params, replace(scenario, normals_nonnegative=False))
        assert len(ineqs) == 12

    def test_motor_rows_dropped_for_unbounded_motor(self, params, scenario):
        ineqs = statics.assemble_inequalities(
            replace(params, motor_torque_max=math.inf), scenario)
        assert len(ineqs) == 9
        assert not any("motor" in label for label in ineqs.labels())

    def test_motor_bound_value(self, params, scenario):
        ineqs = statics.assemble_inequalities(params, scenario)
        motor = [row for row in ineqs.rows if row.label == "motor_M1"]
        assert len(motor) == 1
        assert motor[0].bound == pytest.approx(80.0)

    def test_zero_friction_pins_traction(self, params):
        ineqs = statics.assemble_inequalities(params, scenario_at(0.075, mu=0.0))
        up = next(r for r in ineqs.rows if r.label == "no_slip_M2")
        down = next(r for r in ineqs.rows if r.label == "no_slip_neg_M2")
        # F2 <= 0 and -F2 <= 0 leave only F2 = 0.
        assert up.bound == down.bound == 0.0
        assert up.coefficients[statics.VARIABLE_NAMES.index("N2")] == 0.0
        assert down.coefficients[statics.VARIABLE_NAMES.index("N2")] == 0.0

    def test_matrix_helpers(self, params, scenario):
        ineqs = statics.assemble_inequalities(params, scenario)
        assert ineqs.matrix().shape == (15, 10)
        assert ineqs.bounds().shape == (15,)
        assert len(ineqs.labels()) == 15


class TestCheckState:
    def test_zero_state_fails_on_weight(self, params, scenario, posture):
        system = statics.assemble_equalities(params, scenario, posture)
        ineqs = statics.assemble_inequalities(params, scenario)
        report = statics.check_state(np.zeros(10), system, ineqs, tol=1e-8)
        assert not report.passed
        assert report.max_equality_residual == pytest.approx(4.8069, abs=1e-12)
        assert report.equality_residuals["sum_fy"] == pytest.approx(-4.8069, abs=1e-12)

    def test_perturbed_normal_trips_lateral_balance(self, params, scenario, reference_solution):
        system = statics.assemble_equalities(params, scenario, reference_solution.posture)
        ineqs = statics.assemble_inequalities(params, scenario)
        vec = reference_solution.to_vector().copy()
        vec[statics.VARIABLE_NAMES.index("N1")] += 1.0
        report = statics.check_state(vec, system, ineqs, tol=1e-8)
        assert report.equality_residuals["sum_fx"] == pytest.approx(1.0)
        assert not report.passed

    def test_solution_passes(self, params, scenario, reference_solution):
        system = statics.assemble_equalities(params, scenario, reference_solution.posture)
        ineqs = statics.assemble_inequalities(params, scenario)
        report = statics.check_state(reference_solution, system, ineqs, tol=1e-8)
        assert report.passed

    def test_dimension_mismatch(self, params, scenario, posture):
        system = statics.assemble_equalities(params, scenario, posture)
        ineqs = statics.assemble_inequalities(params, scenario)
        with pytest.raises(statics.DimensionMismatch):
            statics.check_state(np.zeros(9), system, ineqs)

    def test_slacks_reported_per_row(self, params, scenario, posture):
        system = statics.assemble_equalities(params, scenario, posture)
        ineqs = statics.assemble_inequalities(params, scenario)
        report = statics.check_state(np.zeros(10), system, ineqs)
        assert set(report.inequality_slacks) == set(ineqs.labels())
        assert report.inequality_slacks["motor_M1"] == pytest.approx(80.0)
