"""Design workflows: optimal clamping torques, spring sizing, margins, sweeps.

These functions glue the statics model to the LP solver and the
brute-force oracle.  All angle values crossing these interfaces are in
degrees and stiffness in N*m/deg, matching how the prototype's design
point is specified; radians stay internal to the statics layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np

from . import lp, oracle
from .statics import (
    TORQUE_INDICES,
    VARIABLE_NAMES,
    EquationVariant,
    GeometryInfeasible,
    PipeScenario,
    Posture,
    RobotParams,
    RowCoefficientDiff,
    assemble_equalities,
    assemble_inequalities,
    check_state,
    posture_from_geometry,
    variant_row_diff,
)


class NoStaticEquilibrium(RuntimeError):
    """No force/torque state balances the robot for this pipe and friction."""


class ZeroDeflection(ValueError):
    """A spring deflection is too small to divide a torque by."""


#: Reference design point of the built prototype: 75 mm bore, acrylic pipe.
REFERENCE_BORE_M = 0.075
REFERENCE_FRICTION = 0.7

#: Joint torques (N*m) and spring rates (N*m/deg) of the reference
#: design point.  The rest angles shipped as defaults are back-solved from
#: these two lists (deflection = torque / stiffness) and are therefore
#: derived values, not an independently specified preload.
REFERENCE_JOINT_TORQUES_NM = (0.2359, 0.3683, 0.2760, 0.1310)
REFERENCE_STIFFNESS_NM_PER_DEG = (0.0096, 0.0056, 0.0042, 0.0053)

#: How each joint's "current angle" is read off the straight-pipe posture.
JOINT_ANGLE_MAP = (
    "J1: theta1 - 90 deg (module/link angle at the bottom module)",
    "J2: theta1 (link 1 angle from horizontal)",
    "J3: theta2 (link 2 angle from horizontal)",
    "J4: 90 deg - theta2 (module/link angle at the top module)",
)


def reference_robot() -> RobotParams:
    """Design parameters of the built prototype."""
    return RobotParams(
        module_mass=0.150,
        link_mass=0.020,
        module_lengths=(0.14, 0.14, 0.14),
        module_diameter=0.050,
        link_lengths=(0.060, 0.060),
        motor_torque_max=1.0,
    )


def current_joint_angles_deg(posture: Posture) -> np.ndarray:
    """Joint angles J1..J4 in degrees, per JOINT_ANGLE_MAP."""
    t1, t2 = posture.theta1_deg, posture.theta2_deg
    return np.array([t1 - 90.0, t1, t2, 90.0 - t2])


def derived_rest_angles_deg(params: RobotParams | None = None) -> np.ndarray:
    """Default spring rest angles, back-solved from the reference design point.

    Rest angle = posture angle at the reference bore minus the deflection
    implied by the reference torque and stiffness lists.  Derived, not an
    independently measured preload.
    """
    params = params or reference_robot()
    posture = posture_from_geometry(
        params, PipeScenario(pipe_diameter=REFERENCE_BORE_M,
                             friction_coefficient=REFERENCE_FRICTION))
    deflection = (np.array(REFERENCE_JOINT_TORQUES_NM)
                  / np.array(REFERENCE_STIFFNESS_NM_PER_DEG))
    return current_joint_angles_deg(posture) - deflection


@dataclass(frozen=True)
class StaticSolution:
    """Optimal quasi-static state: contact forces plus joint torques."""

    friction_forces: np.ndarray     # (3,) N, positive upward
    normal_forces: np.ndarray       # (3,) N
    joint_torques: np.ndarray       # (4,) N*m
    objective: float                # sum of |tau_j|, N*m
    posture: Posture
    scenario: PipeScenario

    def __post_init__(self):
        for name in ("friction_forces", "normal_forces", "joint_torques"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def to_vector(self) -> np.ndarray:
        """State in the canonical [F, N, tau] variable order."""
        return np.concatenate([self.friction_forces, self.normal_forces,
                               self.joint_torques])

    @classmethod
    def from_vector(cls, vector, posture: Posture, scenario: PipeScenario,
                    objective: float | None = None) -> "StaticSolution":
        vec = np.asarray(vector, dtype=float).reshape(-1)
        if vec.shape != (len(VARIABLE_NAMES),):
            raise ValueError(f"expected {len(VARIABLE_NAMES)} components, got {vec.shape[0]}")
        if objective is None:
            objective = float(np.abs(vec[list(TORQUE_INDICES)]).sum())
        return cls(friction_forces=vec[0:3], normal_forces=vec[3:6],
                   joint_torques=vec[6:10], objective=float(objective),
                   posture=posture, scenario=scenario)


def optimize_torques(params: RobotParams, scenario: PipeScenario) -> StaticSolution:
    """Minimal-|tau| state that balances the robot in the given pipe.

    Assembles the posture and constraint blocks, lifts the
    sum-of-absolute-torques objective, and solves the LP.  Raises
    GeometryInfeasible when the chain cannot span the pipe and
    NoStaticEquilibrium when no balancing state exists (for example at
    zero friction).
    """
    posture = posture_from_geometry(params, scenario)
    system = assemble_equalities(params, scenario, posture)
    ineqs = assemble_inequalities(params, scenario)

    problem = lp.LpProblem.build(
        np.zeros(len(VARIABLE_NAMES)), VARIABLE_NAMES,
        eq_matrix=system.matrix, eq_rhs=system.rhs,
        ineq_rows=[(row.coefficients, row.bound) for row in ineqs.rows])
    lifted = lp.linearize_abs(problem, [VARIABLE_NAMES[i] for i in TORQUE_INDICES])
    solved = lp.solve_lp(lifted)

    if solved.status is lp.LpStatus.INFEASIBLE:
        raise NoStaticEquilibrium(
            f"no static equilibrium at D={scenario.pipe_diameter} m, "
            f"mu={scenario.friction_coefficient} "
            f"({scenario.equation_variant.value} equations)")
    if solved.status is not lp.LpStatus.OPTIMAL:
        raise lp.NumericalBreakdown(
            f"solver returned {solved.status.value} for a nonnegative objective")

    state = solved.values[:len(VARIABLE_NAMES)]
    solution = StaticSolution.from_vector(state, posture, scenario,
                                          objective=solved.objective_value)
    report = check_state(solution, system, ineqs, tol=1e-8)
    if not report.passed:
        raise lp.NumericalBreakdown(
            f"optimal state failed verification: max equality residual "
            f"{report.max_equality_residual:.2e}")
    return solution


@dataclass(frozen=True)
class MarginReport:
    """Per-module distance to the slip and drive-torque limits."""

    slip_margins: np.ndarray        # (3,) N: mu*N_i - |F_i|
    motor_margins: np.ndarray       # (3,) N: 2*tau_max/(d/2) - |F_i|
    utilizations: np.ndarray        # (3,): |F_i| / (mu*N_i)

    @property
    def min_slip_margin(self) -> float:
        return float(self.slip_margins.min())


def climb_margin(solution: StaticSolution, params: RobotParams,
                 scenario: PipeScenario) -> MarginReport:
    """Slack of each module against slipping and against motor saturation."""
    traction = np.abs(solution.friction_forces)
    grip = scenario.friction_coefficient * solution.normal_forces
    slip = grip - traction
    motor = np.full(3, math.inf)
    if math.isfinite(params.motor_torque_max):
        motor = params.traction_limit - traction
    utilization = np.empty(3)
    for i in range(3):
        if grip[i] > 0.0:
            utilization[i] = traction[i] / grip[i]
        else:
            utilization[i] = 0.0 if traction[i] == 0.0 else math.inf
    return MarginReport(slip_margins=slip, motor_margins=motor,
                        utilizations=utilization)


@dataclass(frozen=True)
class StiffnessDesign:
    """Linear torsion-spring rates sized from a torque solution."""

    stiffness: np.ndarray           # (4,) N*m/deg
    rest_angles: np.ndarray         # (4,) deg
    deflections: np.ndarray         # (4,) deg, current - rest
    current_angles: np.ndarray      # (4,) deg
    joint_angle_map: tuple[str, ...] = JOINT_ANGLE_MAP


def stiffness_from_torques(solution: StaticSolution, rest_angles: Sequence[float],
                           *, min_deflection_deg: float = 1e-6) -> StiffnessDesign:
    """Spring rate per joint: torque divided by deflection from rest.

    ``rest_angles`` are the preload angles in degrees, in J1..J4 order
    against the mapping in JOINT_ANGLE_MAP.  Raises ZeroDeflection when any
    |deflection| falls below ``min_deflection_deg``.
    """
    rest = np.asarray(rest_angles, dtype=float).reshape(-1)
    if rest.shape != (4,):
        raise ValueError(f"expected four rest angles, got {rest.shape[0]}")
    current = current_joint_angles_deg(solution.posture)
    deflection = current - rest
    small = np.abs(deflection) <= min_deflection_deg
    if small.any():
        joints = ", ".join(f"J{i + 1}" for i in np.nonzero(small)[0])
        raise ZeroDeflection(
            f"deflection below {min_deflection_deg} deg at {joints}; "
            f"choose rest angles away from the loaded posture")
    stiffness = solution.joint_torques / deflection
    return StiffnessDesign(stiffness=stiffness, rest_angles=rest,
                           deflections=deflection, current_angles=current)


class CellStatus(Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    GEOMETRY_INFEASIBLE = "GeometryInfeasible"


@dataclass(frozen=True)
class CellResult:
    status: CellStatus
    objective: float | None = None          # N*m, feasible cells only
    min_slip_margin: float | None = None    # N, feasible cells only


@dataclass(frozen=True)
class FeasibilityMap:
    """Grid of climb-feasibility outcomes over (pipe diameter, friction)."""

    d_axis: np.ndarray
    mu_axis: np.ndarray
    cells: tuple[tuple[CellResult, ...], ...]   # indexed [d][mu]

    def __post_init__(self):
        d_axis = np.asarray(self.d_axis, dtype=float)
        mu_axis = np.asarray(self.mu_axis, dtype=float)
        if len(self.cells) != d_axis.shape[0] or any(
                len(row) != mu_axis.shape[0] for row in self.cells):
            raise ValueError("cell grid does not match the axis lengths")
        d_axis.flags.writeable = False
        mu_axis.flags.writeable = False
        object.__setattr__(self, "d_axis", d_axis)
        object.__setattr__(self, "mu_axis", mu_axis)

    def cell(self, d_index: int, mu_index: int) -> CellResult:
        return self.cells[d_index][mu_index]

    def iter_cells(self):
        """Yield (pipe diameter, friction coefficient, cell) row-major."""
        for i, d in enumerate(self.d_axis):
            for j, mu in enumerate(self.mu_axis):
                yield float(d), float(mu), self.cells[i][j]


def feasibility_sweep(params: RobotParams, d_range: tuple[float, float, int],
                      mu_range: tuple[float, float, int],
                      scenario_flags: PipeScenario | None = None) -> FeasibilityMap:
    """Solve every (D, mu) grid cell independently and map the outcomes.

    ``d_range`` and ``mu_range`` are (start, stop, count) with count >= 2.
    ``scenario_flags`` supplies the equation variant and friction flags;
    its diameter and friction entries are replaced cell by cell.  Per-cell
    failures are recorded in the map, never raised.
    """
    flags = scenario_flags or PipeScenario(pipe_diameter=REFERENCE_BORE_M,
                                           friction_coefficient=REFERENCE_FRICTION)
    axes = []
    for name, (start, stop, count) in (("d_range", d_range), ("mu_range", mu_range)):
        if count < 2:
            raise ValueError(f"{name} needs at least 2 points, got {count}")
        if start <= 0 and name == "d_range":
            raise ValueError(f"{name} must cover positive values, got start {start}")
        if start < 0:
            raise ValueError(f"{name} must be nonnegative, got start {start}")
        if stop < start:
            raise ValueError(f"{name} must be increasing, got ({start}, {stop})")
        axes.append(np.linspace(start, stop, count))
    d_axis, mu_axis = axes

    rows = []
    for d in d_axis:
        row = []
        for mu in mu_axis:
            scenario = replace(flags, pipe_diameter=float(d), friction_coefficient=float(mu))
            try:
                solution = optimize_torques(params, scenario)
            except GeometryInfeasible:
                row.append(CellResult(status=CellStatus.GEOMETRY_INFEASIBLE))
            except NoStaticEquilibrium:
                row.append(CellResult(status=CellStatus.INFEASIBLE))
            else:
                margin = climb_margin(solution, params, scenario)
                row.append(CellResult(status=CellStatus.FEASIBLE,
                                      objective=solution.objective,
                                      min_slip_margin=margin.min_slip_margin))
        rows.append(tuple(row))
    return FeasibilityMap(d_axis=d_axis, mu_axis=mu_axis, cells=tuple(rows))


@dataclass(frozen=True)
class VariantComparison:
    """Side-by-side outcome of the two equation transcriptions."""

    posture: Posture
    as_printed: StaticSolution | None
    symmetry_corrected: StaticSolution | None
    as_printed_failure: str | None
    symmetry_corrected_failure: str | None
    row_diffs: tuple[RowCoefficientDiff, ...]

    @property
    def objective_difference(self) -> float | None:
        if self.as_printed is None or self.symmetry_corrected is None:
            return None
        return self.symmetry_corrected.objective - self.as_printed.objective

    @property
    def torque_differences(self) -> np.ndarray | None:
        if self.as_printed is None or self.symmetry_corrected is None:
            return None
        return self.symmetry_corrected.joint_torques - self.as_printed.joint_torques


def compare_variants(params: RobotParams, scenario: PipeScenario) -> VariantComparison:
    """Solve both equation variants for one scenario and report the differences."""
    posture = posture_from_geometry(params, scenario)
    solutions: dict[EquationVariant, StaticSolution | None] = {}
    failures: dict[EquationVariant, str | None] = {}
    for variant in EquationVariant:
        try:
            solutions[variant] = optimize_torques(
                params, replace(scenario, equation_variant=variant))
            failures[variant] = None
        except NoStaticEquilibrium as exc:
            solutions[variant] = None
            failures[variant] = str(exc)
    return VariantComparison(
        posture=posture,
        as_printed=solutions[EquationVariant.AS_PRINTED],
        symmetry_corrected=solutions[EquationVariant.SYMMETRY_CORRECTED],
        as_printed_failure=failures[EquationVariant.AS_PRINTED],
        symmetry_corrected_failure=failures[EquationVariant.SYMMETRY_CORRECTED],
        row_diffs=variant_row_diff(params, scenario, posture),
    )


@dataclass(frozen=True)
class OracleCheck:
    """LP-versus-grid-search comparison for one scenario."""

    lp_objective: float
    oracle_best: float
    gap: float                      # oracle_best - lp_objective
    tolerance: float                # relative term + grid-cell bound
    cell_lipschitz_bound: float
    feasible_count: int
    evaluated_count: int
    half_width: float
    points_per_axis: int
    lower_bound_ok: bool            # oracle never beats the LP beyond 1e-6
    upper_bound_ok: bool            # gap within tolerance
    dimension: int
    attempts: int = 1               # boxes tried before this result

    @property
    def passed(self) -> bool:
        return self.lower_bound_ok and self.upper_bound_ok


def _candidate_half_widths(coefficients: np.ndarray) -> tuple[float, ...]:
    """Box half-widths to try, widest first.

    The primary box is five times the norm of the LP solution's coefficient
    vector, which keeps the answer comfortably interior.  Because the
    uniform grid may land awkwardly against the constraint cone around the
    optimal vertex, two tighter boxes (still strictly containing the
    answer) are tried as fallbacks; they shrink the grid cell and with it
    the achievable gap.  A falsely low LP objective fails every box, so
    the fallback never masks a solver bug.
    """
    norm = float(np.linalg.norm(coefficients)) if coefficients.size else 0.0
    peak = float(np.max(np.abs(coefficients))) if coefficients.size else 0.0
    if peak == 0.0:
        return (1.0,)
    return (5.0 * norm, 1.5 * peak, 1.25 * peak)


def oracle_check(params: RobotParams, scenario: PipeScenario, *,
                 points_per_axis: int = 101, half_width: float | None = None,
                 relative_tol: float = 0.01) -> OracleCheck:
    """Verify the LP optimum against the brute-force grid search.

    The grid-search best is a feasible objective value, so it can never
    undercut a correct LP optimum beyond numerical slack (lower check); and
    it must come within ``relative_tol * |LP|`` plus the grid-cell
    variation bound of the LP value (upper check), otherwise the solver
    under- or over-shot.  With no explicit ``half_width`` the candidate
    boxes from ``_candidate_half_widths`` are tried until the upper check
    passes; a lower-check violation is reported immediately, whatever the
    box, since a feasible point below the claimed optimum is conclusive.
    """
    solution = optimize_torques(params, scenario)
    system = assemble_equalities(params, scenario, solution.posture)
    ineqs = assemble_inequalities(params, scenario)
    basis = oracle.parametrize_solution_space(system)

    if half_width is not None:
        widths = (float(half_width),)
    else:
        widths = _candidate_half_widths(basis.coefficients_of(solution.to_vector()))

    best_check: OracleCheck | None = None
    for attempt, width in enumerate(widths, start=1):
        result = oracle.grid_search_optimum(basis, ineqs, TORQUE_INDICES,
                                            width, points_per_axis)
        gap = result.best_objective - solution.objective
        tolerance = relative_tol * abs(solution.objective) + result.cell_lipschitz_bound
        check = OracleCheck(
            lp_objective=solution.objective,
            oracle_best=result.best_objective,
            gap=gap,
            tolerance=tolerance,
            cell_lipschitz_bound=result.cell_lipschitz_bound,
            feasible_count=result.feasible_count,
            evaluated_count=result.evaluated_count,
            half_width=result.half_width,
            points_per_axis=result.points_per_axis,
            lower_bound_ok=result.best_objective >= solution.objective - 1e-6,
            upper_bound_ok=gap <= tolerance,
            dimension=basis.dimension,
            attempts=attempt,
        )
        if not check.lower_bound_ok or check.passed:
            return check
        if best_check is None or check.gap / check.tolerance < best_check.gap / best_check.tolerance:
            best_check = check
    return best_check
