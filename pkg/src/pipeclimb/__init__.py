"""Quasi-static design toolkit for a three-module wall-press pipe climber.

Computes the minimal joint moments that balance the robot in a straight
vertical pipe, sizes the torsion springs that realize them, and maps
climb feasibility over pipe diameter and friction coefficient.

Typical use:

    from pipeclimb import design, statics

    params = design.reference_robot()
    scenario = statics.PipeScenario(pipe_diameter=0.075, friction_coefficient=0.7)
    solution = design.optimize_torques(params, scenario)
    springs = design.stiffness_from_torques(solution, design.derived_rest_angles_deg())

Or from the command line: ``pipeclimb solve --config configs/reference.toml``.
"""

from .design import (
    CellResult,
    CellStatus,
    FeasibilityMap,
    MarginReport,
    NoStaticEquilibrium,
    OracleCheck,
    StaticSolution,
    StiffnessDesign,
    VariantComparison,
    ZeroDeflection,
    climb_margin,
    compare_variants,
    derived_rest_angles_deg,
    feasibility_sweep,
    optimize_torques,
    oracle_check,
    reference_robot,
    stiffness_from_torques,
)
from .lp import (
    LpProblem,
    LpSolution,
    LpStatus,
    NumericalBreakdown,
    UnknownVariable,
    linearize_abs,
    solve_lp,
)
from .oracle import (
    AffineBasis,
    InconsistentSystem,
    NoFeasiblePoint,
    OracleResult,
    grid_search_optimum,
    parametrize_solution_space,
)
from .statics import (
    ROW_LABELS,
    TORQUE_INDICES,
    VARIABLE_NAMES,
    DimensionMismatch,
    EqualitySystem,
    EquationVariant,
    FrictionSidedness,
    GeometryInfeasible,
    InequalitySet,
    PipeScenario,
    Posture,
    ResidualReport,
    RobotParams,
    assemble_equalities,
    assemble_inequalities,
    check_state,
    posture_from_geometry,
    variant_row_diff,
)

__version__ = "0.1.0"

__all__ = [
    "AffineBasis", "CellResult", "CellStatus", "DimensionMismatch",
    "EqualitySystem", "EquationVariant", "FeasibilityMap", "FrictionSidedness",
    "GeometryInfeasible", "InconsistentSystem", "InequalitySet", "LpProblem",
    "LpSolution", "LpStatus", "MarginReport", "NoFeasiblePoint",
    "NoStaticEquilibrium", "NumericalBreakdown", "OracleCheck", "OracleResult",
    "PipeScenario", "Posture", "ResidualReport", "RobotParams", "ROW_LABELS",
    "StaticSolution", "StiffnessDesign", "TORQUE_INDICES", "UnknownVariable",
    "VARIABLE_NAMES", "VariantComparison", "ZeroDeflection",
    "assemble_equalities", "assemble_inequalities", "check_state",
    "climb_margin", "compare_variants", "derived_rest_angles_deg",
    "feasibility_sweep", "grid_search_optimum", "linearize_abs",
    "optimize_torques", "oracle_check", "parametrize_solution_space",
    "posture_from_geometry", "reference_robot", "solve_lp",
    "stiffness_from_torques", "variant_row_diff",
]
