"""Quasi-static model of a three-module wall-press pipe-climbing robot.

The robot is a planar chain: module 1 - link 1 - module 2 - link 2 -
module 3, with sprung joints J1..J4 at the module/link interfaces.  In a
straight vertical pipe the modules press alternating walls; each contact
carries a normal force N_i and a traction (friction) force F_i, and each
joint carries a spring moment tau_j.  This module assembles the force and
moment balance of that configuration as a linear system over the ten
unknowns [F1, F2, F3, N1, N2, N3, tau1, tau2, tau3, tau4], together with
the friction-cone and drive-torque inequality rows.

Sign conventions: traction forces are positive upward (they carry the
weight), N1/N3 press one wall and N2 the opposite wall (hence the
N1 - N2 + N3 = 0 lateral balance), and angles are stored in radians with
theta1 in the second quadrant and theta2 in the first.

Two transcriptions of the moment balances are provided.  The source
derivation of rows M_J3 and M_J4a mixes module-1 and module-2 quantities
in a way that looks like a copy slip (N1 where the adjacent-module N2 is
expected, and likewise F1/F2).  ``AS_PRINTED`` keeps the original text
verbatim; ``SYMMETRY_CORRECTED`` substitutes the module-2 quantities and
records every substitution in the row notes.  Neither is silently
preferred; see ``variant_row_diff`` for the side-by-side comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

#: Canonical unknown ordering used by every matrix in the package.
VARIABLE_NAMES = ("F1", "F2", "F3", "N1", "N2", "N3", "tau1", "tau2", "tau3", "tau4")

#: Positions of the joint torques within VARIABLE_NAMES.
TORQUE_INDICES = (6, 7, 8, 9)

#: Row labels of the equality system, in assembly order.
ROW_LABELS = ("sum_fx", "sum_fy", "M_J1", "M_J2", "M_J3", "M_J4a", "M_J4b")


class GeometryInfeasible(ValueError):
    """The chain cannot span the pipe (or the pipe is narrower than a module)."""


class DimensionMismatch(ValueError):
    """A state vector does not match the model's variable ordering."""


class EquationVariant(Enum):
    """Which transcription of the M_J3 / M_J4a moment rows to assemble."""

    AS_PRINTED = "as_printed"
    SYMMETRY_CORRECTED = "symmetry_corrected"


class FrictionSidedness(Enum):
    """One-sided traction limit (F <= mu N) or the physical |F| <= mu N."""

    ONE_SIDED_AS_PRINTED = "one_sided_as_printed"
    TWO_SIDED_PHYSICAL = "two_sided_physical"


@dataclass(frozen=True)
class RobotParams:
    """Physical design parameters of the robot.

    All lengths in metres, masses in kilograms, torques in newton-metres.
    ``motor_torque_max`` may be ``math.inf`` to drop the drive-torque rows
    entirely (useful for scale-invariance studies).
    """

    module_mass: float          # m_m, per module
    link_mass: float            # m_l, per link
    module_lengths: tuple[float, float, float]   # l1, l2, l3
    module_diameter: float      # d
    link_lengths: tuple[float, float]            # L1, L2
    motor_torque_max: float     # saturation torque of one drive motor
    gravity: float = 9.81       # m/s^2

    def __post_init__(self):
        object.__setattr__(self, "module_lengths", tuple(float(v) for v in self.module_lengths))
        object.__setattr__(self, "link_lengths", tuple(float(v) for v in self.link_lengths))
        if len(self.module_lengths) != 3:
            raise ValueError("module_lengths must hold exactly three lengths")
        if len(self.link_lengths) != 2:
            raise ValueError("link_lengths must hold exactly two lengths")
        scalars = {
            "module_mass": self.module_mass,
            "link_mass": self.link_mass,
            "module_diameter": self.module_diameter,
            "motor_torque_max": self.motor_torque_max,
            "gravity": self.gravity,
        }
        for name, value in scalars.items():
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        for name, values in (("module_lengths", self.module_lengths),
                             ("link_lengths", self.link_lengths)):
            if any(not v > 0 for v in values):
                raise ValueError(f"all {name} must be strictly positive, got {values!r}")

    @property
    def module_weight(self) -> float:
        """Weight of one module in newtons."""
        return self.module_mass * self.gravity

    @property
    def link_weight(self) -> float:
        """Weight of one link in newtons."""
        return self.link_mass * self.gravity

    @property
    def total_weight(self) -> float:
        """Combined weight of the three modules and two links in newtons."""
        return 3.0 * self.module_weight + 2.0 * self.link_weight

    @property
    def traction_limit(self) -> float:
        """Drive-torque bound on each module's traction force, 2*tau_max/(d/2)."""
        return 2.0 * self.motor_torque_max / (self.module_diameter / 2.0)


@dataclass(frozen=True)
class PipeScenario:
    """One pipe environment plus the model flags used to analyse it."""

    pipe_diameter: float        # D, metres
    friction_coefficient: float  # mu, dimensionless
    equation_variant: EquationVariant = EquationVariant.AS_PRINTED
    friction_sidedness: FrictionSidedness = FrictionSidedness.TWO_SIDED_PHYSICAL
    normals_nonnegative: bool = True

    def __post_init__(self):
        if not self.pipe_diameter > 0:
            raise ValueError(f"pipe_diameter must be positive, got {self.pipe_diameter!r}")
        if self.friction_coefficient < 0:
            raise ValueError(
                f"friction_coefficient must be nonnegative, got {self.friction_coefficient!r}")


@dataclass(frozen=True)
class Posture:
    """Link angles of the chain in a straight pipe, radians from horizontal."""

    theta1: float   # link 1, second quadrant: pi/2 <= theta1 <= pi
    theta2: float   # link 2, first quadrant: 0 <= theta2 <= pi/2

    @property
    def theta1_deg(self) -> float:
        return math.degrees(self.theta1)

    @property
    def theta2_deg(self) -> float:
        return math.degrees(self.theta2)


def posture_from_geometry(params: RobotParams, scenario: PipeScenario) -> Posture:
    """Joint angles of the straight-pipe posture.

    Each link spans the lateral offset D - d between the axes of the two
    modules it connects, so cos of its angle from horizontal is
    (D - d) / L_k.  Raises GeometryInfeasible when that ratio leaves
    [0, 1] for either link.
    """
    span = scenario.pipe_diameter - params.module_diameter
    ratios = []
    for k, length in enumerate(params.link_lengths, start=1):
        ratio = span / length
        if ratio < 0.0:
            raise GeometryInfeasible(
                f"pipe bore {scenario.pipe_diameter} m is narrower than the module "
                f"diameter {params.module_diameter} m")
        if ratio > 1.0:
            raise GeometryInfeasible(
                f"link {k} (length {length} m) cannot span the lateral offset "
                f"{span} m of a {scenario.pipe_diameter} m bore")
        ratios.append(ratio)
    return Posture(theta1=math.pi - math.acos(ratios[0]), theta2=math.acos(ratios[1]))


@dataclass(frozen=True)
class EqualitySystem:
    """The assembled force/moment balance A x = b.

    ``row_notes`` holds, per row, the substitutions applied relative to the
    as-printed transcription (empty for rows taken verbatim).
    """

    matrix: np.ndarray                      # 7 x 10
    rhs: np.ndarray                         # 7
    variable_index: tuple[str, ...] = VARIABLE_NAMES
    row_labels: tuple[str, ...] = ROW_LABELS
    variant: EquationVariant = EquationVariant.AS_PRINTED
    row_notes: tuple[tuple[str, ...], ...] = field(default=((),) * 7)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        rhs = np.array(self.rhs, dtype=float)
        if matrix.shape != (len(self.row_labels), len(self.variable_index)):
            raise ValueError(f"matrix shape {matrix.shape} does not match "
                             f"{len(self.row_labels)} rows x {len(self.variable_index)} variables")
        if rhs.shape != (len(self.row_labels),):
            raise ValueError(f"rhs shape {rhs.shape} does not match row count")
        if len(set(self.variable_index)) != len(self.variable_index):
            raise ValueError("variable_index contains duplicate names")
        matrix.flags.writeable = False
        rhs.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "rhs", rhs)

    def column(self, name: str) -> int:
        try:
            return self.variable_index.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def row(self, label: str) -> np.ndarray:
        return self.matrix[self.row_labels.index(label)]


@dataclass(frozen=True)
class IneqRow:
    """One inequality row: coefficients . x <= bound."""

    coefficients: np.ndarray
    bound: float
    label: str

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float)
        coeffs.flags.writeable = False
        object.__setattr__(self, "coefficients", coeffs)


@dataclass(frozen=True)
class InequalitySet:
    """Stacked inequality rows over the canonical variable ordering."""

    rows: tuple[IneqRow, ...]
    variable_index: tuple[str, ...] = VARIABLE_NAMES

    def matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, len(self.variable_index)))
        return np.array([row.coefficients for row in self.rows])

    def bounds(self) -> np.ndarray:
        return np.array([row.bound for row in self.rows])

    def labels(self) -> tuple[str, ...]:
        return tuple(row.label for row in self.rows)

    def __len__(self) -> int:
        return len(self.rows)


def assemble_equalities(params: RobotParams, scenario: PipeScenario,
                        posture: Posture) -> EqualitySystem:
    """Build the seven-row equilibrium system for the given posture.

    Rows, in order: lateral force balance, vertical force balance, and the
    moment balances about J1..J4 (J4 contributes two stacked rows).  The
    right-hand side collects the weight terms and is therefore linear in
    (module_mass, link_mass); the matrix depends only on geometry.
    """
    wm = params.module_weight
    wl = params.link_weight
    l1, l2, l3 = params.module_lengths
    big_l1, big_l2 = params.link_lengths
    d = params.module_diameter
    cos1, sin1 = math.cos(posture.theta1), math.sin(posture.theta1)
    cos2, sin2 = math.cos(posture.theta2), math.sin(posture.theta2)

    a = np.zeros((7, 10))
    b = np.zeros(7)
    notes: list[tuple[str, ...]] = [()] * 7
    col = {name: i for i, name in enumerate(VARIABLE_NAMES)}

    # sum_fx: N1 - N2 + N3 = 0
    a[0, col["N1"]], a[0, col["N2"]], a[0, col["N3"]] = 1.0, -1.0, 1.0

    # sum_fy: F1 + F2 + F3 = total weight
    a[1, col["F1"]] = a[1, col["F2"]] = a[1, col["F3"]] = 1.0
    b[1] = 3.0 * wm + 2.0 * wl

    # M_J1: F1*d/2 + N1*l1/2 - tau1 = 0
    a[2, col["F1"]] = d / 2.0
    a[2, col["N1"]] = l1 / 2.0
    a[2, col["tau1"]] = -1.0

    # M_J2: F1*L1*cos(t1) + N1*L1*sin(t1) + tau1 - tau2 = (wm + wl/2)*L1*cos(t1)
    a[3, col["F1"]] = big_l1 * cos1
    a[3, col["N1"]] = big_l1 * sin1
    a[3, col["tau1"]], a[3, col["tau2"]] = 1.0, -1.0
    b[3] = (wm + wl / 2.0) * big_l1 * cos1

    # M_J3: -F2*d/2 + N1*l1 - N1*l2/2 + tau2 - tau3 = 0   (as printed)
    a[4, col["F2"]] = -d / 2.0
    a[4, col["tau2"]], a[4, col["tau3"]] = 1.0, -1.0
    if scenario.equation_variant is EquationVariant.AS_PRINTED:
        a[4, col["N1"]] = l1 - l2 / 2.0
    else:
        a[4, col["N2"]] = l1 - l2 / 2.0
        notes[4] = ("N1*l1 -> N2*l1", "N1*l2/2 -> N2*l2/2")

    # M_J4a: -F1*L2*cos(t2) + N1*L2*sin(t2) - F2*L2*cos(t2) - N2*L2*sin(t2)
    #        + tau3 - tau4 = -(2*wm + wl + wl/2)*L2*cos(t2)   (as printed)
    a[5, col["tau3"]], a[5, col["tau4"]] = 1.0, -1.0
    b[5] = -(2.0 * wm + wl + wl / 2.0) * big_l2 * cos2
    if scenario.equation_variant is EquationVariant.AS_PRINTED:
        a[5, col["F1"]] = -big_l2 * cos2
        a[5, col["F2"]] = -big_l2 * cos2
        a[5, col["N1"]] = big_l2 * sin2
        a[5, col["N2"]] = -big_l2 * sin2
    else:
        # Module-2 substitution makes the two normal terms cancel exactly.
        a[5, col["F2"]] = -2.0 * big_l2 * cos2
        notes[5] = ("F1*L2*cos(theta2) -> F2*L2*cos(theta2)",
                    "N1*L2*sin(theta2) -> N2*L2*sin(theta2)")

    # M_J4b: N3*l3/2 - F3*d/2 - tau4 = 0
    a[6, col["N3"]] = l3 / 2.0
    a[6, col["F3"]] = -d / 2.0
    a[6, col["tau4"]] = -1.0

    return EqualitySystem(matrix=a, rhs=b, variant=scenario.equation_variant,
                          row_notes=tuple(notes))


def assemble_inequalities(params: RobotParams, scenario: PipeScenario) -> InequalitySet:
    """Friction-cone, drive-torque, and wall-contact inequality rows.

    Row order: the no-slip block (one or two rows per module depending on
    sidedness), the drive-torque block (|F_i| as two rows per module,
    omitted when motor_torque_max is infinite), then the optional
    N_i >= 0 rows.
    """
    mu = scenario.friction_coefficient
    col = {name: i for i, name in enumerate(VARIABLE_NAMES)}
    rows: list[IneqRow] = []

    for i in range(1, 4):
        coeffs = np.zeros(10)
        coeffs[col[f"F{i}"]] = 1.0
        coeffs[col[f"N{i}"]] = -mu
        rows.append(IneqRow(coeffs, 0.0, f"no_slip_M{i}"))
        if scenario.friction_sidedness is FrictionSidedness.TWO_SIDED_PHYSICAL:
            coeffs = np.zeros(10)
            coeffs[col[f"F{i}"]] = -1.0
            coeffs[col[f"N{i}"]] = -mu
            rows.append(IneqRow(coeffs, 0.0, f"no_slip_neg_M{i}"))

    if math.isfinite(params.motor_torque_max):
        limit = params.traction_limit
        for i in range(1, 4):
            coeffs = np.zeros(10)
            coeffs[col[f"F{i}"]] = 1.0
            rows.append(IneqRow(coeffs, limit, f"motor_M{i}"))
            coeffs = np.zeros(10)
            coeffs[col[f"F{i}"]] = -1.0
            rows.append(IneqRow(coeffs, limit, f"motor_neg_M{i}"))

    if scenario.normals_nonnegative:
        for i in range(1, 4):
            coeffs = np.zeros(10)
            coeffs[col[f"N{i}"]] = -1.0
            rows.append(IneqRow(coeffs, 0.0, f"normal_M{i}"))

    return InequalitySet(rows=tuple(rows))


@dataclass(frozen=True)
class ResidualReport:
    """How well a state satisfies the equality system and inequality rows."""

    max_equality_residual: float
    equality_residuals: dict[str, float]    # row label -> signed residual A x - b
    inequality_slacks: dict[str, float]     # row label -> bound - coeffs . x
    tolerance: float
    passed: bool


def check_state(state, system: EqualitySystem, ineqs: InequalitySet,
                tol: float = 1e-8) -> ResidualReport:
    """Evaluate equality residuals and inequality slacks for a state vector.

    ``state`` is anything convertible to the ten-component vector in
    ``system.variable_index`` order (objects exposing ``to_vector()`` are
    unwrapped first).  Negative slack means the row is violated.
    """
    if hasattr(state, "to_vector"):
        state = state.to_vector()
    vec = np.asarray(state, dtype=float).reshape(-1)
    if vec.shape != (len(system.variable_index),):
        raise DimensionMismatch(
            f"state has {vec.shape[0]} components, expected {len(system.variable_index)}")

    residuals = system.matrix @ vec - system.rhs
    eq_by_row = {label: float(r) for label, r in zip(system.row_labels, residuals)}
    max_eq = float(np.max(np.abs(residuals))) if residuals.size else 0.0

    slacks: dict[str, float] = {}
    min_slack = math.inf
    for row in ineqs.rows:
        slack = float(row.bound - row.coefficients @ vec)
        slacks[row.label] = slack
        min_slack = min(min_slack, slack)

    passed = max_eq <= tol and (not ineqs.rows or min_slack >= -tol)
    return ResidualReport(max_equality_residual=max_eq, equality_residuals=eq_by_row,
                          inequality_slacks=slacks, tolerance=tol, passed=passed)


@dataclass(frozen=True)
class RowCoefficientDiff:
    """One coefficient that differs between the two equation variants."""

    row_label: str
    variable: str
    as_printed: float
    symmetry_corrected: float


def variant_row_diff(params: RobotParams, scenario: PipeScenario,
                     posture: Posture) -> tuple[RowCoefficientDiff, ...]:
    """Coefficient-level differences between the two transcriptions.

    Assembles both variants for the same geometry and reports every matrix
    or right-hand-side entry that differs (rhs entries use the pseudo
    variable name ``"rhs"``).
    """
    printed = assemble_equalities(
        params, replace(scenario, equation_variant=EquationVariant.AS_PRINTED), posture)
    corrected = assemble_equalities(
        params, replace(scenario, equation_variant=EquationVariant.SYMMETRY_CORRECTED), posture)

    diffs: list[RowCoefficientDiff] = []
    for r, label in enumerate(printed.row_labels):
        for c, name in enumerate(printed.variable_index):
            lhs, rhs = printed.matrix[r, c], corrected.matrix[r, c]
            if lhs != rhs:
                diffs.append(RowCoefficientDiff(label, name, float(lhs), float(rhs)))
        if printed.rhs[r] != corrected.rhs[r]:
            diffs.append(RowCoefficientDiff(label, "rhs",
                                            float(printed.rhs[r]), float(corrected.rhs[r])))
    return tuple(diffs)
