"""Command-line front end.

Subcommands: ``solve`` (optimal torques and margins), ``stiffness``
(spring rates from a solve), ``sweep`` (diameter/friction feasibility
map), ``check`` (validate a state file against the model), ``oracle``
(LP versus brute-force comparison), and ``variants`` (side-by-side
equation-transcription report).

Exit codes: 0 success, 1 infeasible model outcome (including a failed
check or oracle comparison), 2 malformed input.  All boundary units are
metres, kilograms, newtons, N*m, degrees, and N*m/deg; radians never
appear in input or output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:          # Python < 3.11
    import tomli as tomllib

from . import design
from .statics import (
    EquationVariant,
    FrictionSidedness,
    GeometryInfeasible,
    PipeScenario,
    RobotParams,
    assemble_equalities,
    assemble_inequalities,
    check_state,
    posture_from_geometry,
)


class ConfigError(ValueError):
    """Malformed configuration or state input."""


@dataclass(frozen=True)
class SweepRanges:
    d: tuple[float, float, int]
    mu: tuple[float, float, int]


@dataclass(frozen=True)
class RunConfig:
    robot: RobotParams
    scenario: PipeScenario
    sweep: SweepRanges | None
    rest_angles_deg: tuple[float, float, float, float] | None
    output_format: str      # table | json | csv
    output_path: str | None


def _require_number(section: str, key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key}: expected a number, got {value!r}")
    return float(value)


def _require_int(section: str, key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"[{section}] {key}: expected an integer, got {value!r}")
    return value


def _require_bool(section: str, key: str, value) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"[{section}] {key}: expected true/false, got {value!r}")
    return value


def _require_numbers(section: str, key: str, value, count: int) -> tuple[float, ...]:
    if not isinstance(value, list) or len(value) != count:
        raise ConfigError(f"[{section}] {key}: expected a list of {count} numbers, got {value!r}")
    return tuple(_require_number(section, f"{key}[{i}]", v) for i, v in enumerate(value))


def _require_section(data: dict, name: str) -> dict:
    section = data.get(name)
    if section is None:
        raise ConfigError(f"missing required section [{name}]")
    if not isinstance(section, dict):
        raise ConfigError(f"[{name}] must be a table of keys")
    return section


def _reject_unknown(section: str, table: dict, allowed: set[str]) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"[{section}] unknown key(s): {', '.join(unknown)}")


def _enum_value(section: str, key: str, value, enum_cls):
    choices = [member.value for member in enum_cls]
    if value not in choices:
        raise ConfigError(f"[{section}] {key}: expected one of {choices}, got {value!r}")
    return enum_cls(value)


def load_config(path: str | Path) -> RunConfig:
    """Parse and strictly validate a TOML run configuration."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    _reject_unknown("<top level>", data, {"robot", "scenario", "sweep", "stiffness", "output"})

    robot_tbl = _require_section(data, "robot")
    _reject_unknown("robot", robot_tbl, {
        "module_mass", "link_mass", "module_lengths", "module_diameter",
        "link_lengths", "motor_torque_max", "gravity"})
    for key in ("module_mass", "link_mass", "module_lengths", "module_diameter",
                "link_lengths", "motor_torque_max"):
        if key not in robot_tbl:
            raise ConfigError(f"[robot] missing required key {key!r}")
    try:
        robot = RobotParams(
            module_mass=_require_number("robot", "module_mass", robot_tbl["module_mass"]),
            link_mass=_require_number("robot", "link_mass", robot_tbl["link_mass"]),
            module_lengths=_require_numbers("robot", "module_lengths",
                                            robot_tbl["module_lengths"], 3),
            module_diameter=_require_number("robot", "module_diameter",
                                            robot_tbl["module_diameter"]),
            link_lengths=_require_numbers("robot", "link_lengths",
                                          robot_tbl["link_lengths"], 2),
            motor_torque_max=_require_number("robot", "motor_torque_max",
                                             robot_tbl["motor_torque_max"]),
            gravity=_require_number("robot", "gravity", robot_tbl.get("gravity", 9.81)),
        )
    except ValueError as exc:
        raise ConfigError(f"[robot] {exc}") from exc

    scen_tbl = _require_section(data, "scenario")
    _reject_unknown("scenario", scen_tbl, {
        "pipe_diameter", "friction_coefficient", "equation_variant",
        "friction_sidedness", "normals_nonnegative"})
    for key in ("pipe_diameter", "friction_coefficient"):
        if key not in scen_tbl:
            raise ConfigError(f"[scenario] missing required key {key!r}")
    try:
        scenario = PipeScenario(
            pipe_diameter=_require_number("scenario", "pipe_diameter",
                                          scen_tbl["pipe_diameter"]),
            friction_coefficient=_require_number("scenario", "friction_coefficient",
                                                 scen_tbl["friction_coefficient"]),
            equation_variant=_enum_value(
                "scenario", "equation_variant",
                scen_tbl.get("equation_variant", EquationVariant.AS_PRINTED.value),
                EquationVariant),
            friction_sidedness=_enum_value(
                "scenario", "friction_sidedness",
                scen_tbl.get("friction_sidedness", FrictionSidedness.TWO_SIDED_PHYSICAL.value),
                FrictionSidedness),
            normals_nonnegative=_require_bool(
                "scenario", "normals_nonnegative", scen_tbl.get("normals_nonnegative", True)),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[scenario] {exc}") from exc

    sweep = None
    if "sweep" in data:
        sweep_tbl = data["sweep"]
        _reject_unknown("sweep", sweep_tbl, {"d_min", "d_max", "d_count",
                                             "mu_min", "mu_max", "mu_count"})
        for key in ("d_min", "d_max", "d_count", "mu_min", "mu_max", "mu_count"):
            if key not in sweep_tbl:
                raise ConfigError(f"[sweep] missing required key {key!r}")
        sweep = SweepRanges(
            d=(_require_number("sweep", "d_min", sweep_tbl["d_min"]),
               _require_number("sweep", "d_max", sweep_tbl["d_max"]),
               _require_int("sweep", "d_count", sweep_tbl["d_count"])),
            mu=(_require_number("sweep", "mu_min", sweep_tbl["mu_min"]),
                _require_number("sweep", "mu_max", sweep_tbl["mu_max"]),
                _require_int("sweep", "mu_count", sweep_tbl["mu_count"])),
        )

    rest_angles = None
    if "stiffness" in data:
        stiff_tbl = data["stiffness"]
        _reject_unknown("stiffness", stiff_tbl, {"rest_angles_deg"})
        if "rest_angles_deg" not in stiff_tbl:
            raise ConfigError("[stiffness] missing required key 'rest_angles_deg'")
        rest_angles = _require_numbers("stiffness", "rest_angles_deg",
                                       stiff_tbl["rest_angles_deg"], 4)

    output_format = "table"
    output_path = None
    if "output" in data:
        out_tbl = data["output"]
        _reject_unknown("output", out_tbl, {"format", "path"})
        if "format" in out_tbl:
            if out_tbl["format"] not in ("table", "json", "csv"):
                raise ConfigError(f"[output] format: expected table/json/csv, "
                                  f"got {out_tbl['format']!r}")
            output_format = out_tbl["format"]
        if "path" in out_tbl:
            if not isinstance(out_tbl["path"], str):
                raise ConfigError(f"[output] path: expected a string, got {out_tbl['path']!r}")
            output_path = out_tbl["path"]

    return RunConfig(robot=robot, scenario=scenario, sweep=sweep,
                     rest_angles_deg=rest_angles, output_format=output_format,
                     output_path=output_path)


def _json_float(value) -> float | None:
    value = float(value)
    return value if math.isfinite(value) else None


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _solution_payload(solution: design.StaticSolution,
                      margins: design.MarginReport) -> dict:
    return {
        "posture_deg": {"theta1": solution.posture.theta1_deg,
                        "theta2": solution.posture.theta2_deg},
        "forces_N": {"F": [float(v) for v in solution.friction_forces],
                     "N": [float(v) for v in solution.normal_forces]},
        "torques_Nm": [float(v) for v in solution.joint_torques],
        "objective_Nm": float(solution.objective),
        "margins": {"slip_N": [_json_float(v) for v in margins.slip_margins],
                    "motor_N": [_json_float(v) for v in margins.motor_margins],
                    "utilization": [_json_float(v) for v in margins.utilizations]},
        "variant": solution.scenario.equation_variant.value,
    }


def _solution_table(solution: design.StaticSolution, margins: design.MarginReport) -> str:
    scenario = solution.scenario
    lines = [
        f"pipe diameter D = {scenario.pipe_diameter:.4f} m, "
        f"friction mu = {scenario.friction_coefficient:.4f}, "
        f"variant = {scenario.equation_variant.value}",
        f"posture: theta1 = {solution.posture.theta1_deg:.4f} deg, "
        f"theta2 = {solution.posture.theta2_deg:.4f} deg",
        "",
        "module   F [N]      N [N]      slip margin [N]   motor margin [N]   utilization",
    ]
    for i in range(3):
        motor = margins.motor_margins[i]
        motor_s = f"{motor:.4f}" if math.isfinite(motor) else "inf"
        lines.append(f"  M{i + 1}   {solution.friction_forces[i]:9.4f}  "
                     f"{solution.normal_forces[i]:9.4f}  "
                     f"{margins.slip_margins[i]:15.4f}   {motor_s:>16s}   "
                     f"{margins.utilizations[i]:11.4f}")
    lines.append("")
    lines.append("joint   tau [N*m]")
    for j in range(4):
        lines.append(f"  J{j + 1}   {solution.joint_torques[j]:9.4f}")
    lines.append("")
    lines.append(f"objective sum|tau| = {solution.objective:.4f} N*m")
    return "\n".join(lines) + "\n"


def _solution_csv(solution: design.StaticSolution, margins: design.MarginReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["D_m", "mu", "variant", "theta1_deg", "theta2_deg",
                     "F1_N", "F2_N", "F3_N", "N1_N", "N2_N", "N3_N",
                     "tau1_Nm", "tau2_Nm", "tau3_Nm", "tau4_Nm",
                     "objective_Nm", "min_slip_margin_N"])
    scenario = solution.scenario
    writer.writerow([repr(scenario.pipe_diameter), repr(scenario.friction_coefficient),
                     scenario.equation_variant.value,
                     repr(solution.posture.theta1_deg), repr(solution.posture.theta2_deg)]
                    + [repr(float(v)) for v in solution.friction_forces]
                    + [repr(float(v)) for v in solution.normal_forces]
                    + [repr(float(v)) for v in solution.joint_torques]
                    + [repr(float(solution.objective)), repr(margins.min_slip_margin)])
    return buf.getvalue()


def _scenario_with_overrides(config: RunConfig, args) -> PipeScenario:
    scenario = config.scenario
    if getattr(args, "variant", None):
        scenario = replace(scenario, equation_variant=EquationVariant(args.variant))
    return scenario


def _cmd_solve(args) -> int:
    config = load_config(args.config)
    scenario = _scenario_with_overrides(config, args)
    solution = design.optimize_torques(config.robot, scenario)
    margins = design.climb_margin(solution, config.robot, scenario)
    fmt = args.format or config.output_format
    if fmt == "json":
        text = json.dumps(_solution_payload(solution, margins), indent=2) + "\n"
    elif fmt == "csv":
        text = _solution_csv(solution, margins)
    else:
        text = _solution_table(solution, margins)
    _emit(text, args.output or config.output_path)
    return 0


def _cmd_stiffness(args) -> int:
    config = load_config(args.config)
    scenario = _scenario_with_overrides(config, args)
    if args.rest_angles is not None:
        rest = _parse_rest_angles(args.rest_angles)
    elif config.rest_angles_deg is not None:
        rest = np.array(config.rest_angles_deg)
    else:
        rest = design.derived_rest_angles_deg(config.robot)
    solution = design.optimize_torques(config.robot, scenario)
    stiff = design.stiffness_from_torques(solution, rest)
    fmt = args.format or config.output_format
    if fmt == "json":
        payload = {
            "stiffness_Nm_per_deg": [float(v) for v in stiff.stiffness],
            "rest_angles_deg": [float(v) for v in stiff.rest_angles],
            "deflections_deg": [float(v) for v in stiff.deflections],
            "current_angles_deg": [float(v) for v in stiff.current_angles],
            "torques_Nm": [float(v) for v in solution.joint_torques],
            "joint_angle_map": list(stiff.joint_angle_map),
            "variant": scenario.equation_variant.value,
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["joint", "torque_Nm", "rest_angle_deg", "current_angle_deg",
                         "deflection_deg", "stiffness_Nm_per_deg"])
        for j in range(4):
            writer.writerow([f"J{j + 1}", repr(float(solution.joint_torques[j])),
                             repr(float(stiff.rest_angles[j])),
                             repr(float(stiff.current_angles[j])),
                             repr(float(stiff.deflections[j])),
                             repr(float(stiff.stiffness[j]))])
        text = buf.getvalue()
    else:
        lines = ["joint   tau [N*m]   rest [deg]   current [deg]   deflection [deg]   k [N*m/deg]"]
        for j in range(4):
            lines.append(f"  J{j + 1}   {solution.joint_torques[j]:9.4f}   "
                         f"{stiff.rest_angles[j]:10.4f}   {stiff.current_angles[j]:13.4f}   "
                         f"{stiff.deflections[j]:16.4f}   {stiff.stiffness[j]:11.4f}")
        lines.append("")
        lines.extend(stiff.joint_angle_map)
        text = "\n".join(lines) + "\n"
    _emit(text, args.output or config.output_path)
    return 0


def _parse_range(text: str, name: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--{name}: expected start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--{name}: {exc}") from exc
    if count < 2:
        raise ConfigError(f"--{name}: count must be at least 2, got {count}")
    return start, stop, count


def _parse_rest_angles(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--rest-angles: expected four comma-separated degrees, got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ConfigError(f"--rest-angles: {exc}") from exc


SWEEP_CSV_HEADER = ["D_m", "mu", "status", "objective_Nm", "min_slip_margin_N"]


def sweep_csv(fmap: design.FeasibilityMap) -> str:
    """Render a feasibility map as the stable, plot-ready CSV."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for d, mu, cell in fmap.iter_cells():
        writer.writerow([
            repr(d), repr(mu), cell.status.value,
            "" if cell.objective is None else repr(cell.objective),
            "" if cell.min_slip_margin is None else repr(cell.min_slip_margin),
        ])
    return buf.getvalue()


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    scenario = _scenario_with_overrides(config, args)
    if args.d:
        d_range = _parse_range(args.d, "d")
    elif config.sweep:
        d_range = config.sweep.d
    else:
        raise ConfigError("sweep ranges missing: pass --d start:stop:count "
                          "or add a [sweep] section to the config")
    if args.mu:
        mu_range = _parse_range(args.mu, "mu")
    elif config.sweep:
        mu_range = config.sweep.mu
    else:
        raise ConfigError("sweep ranges missing: pass --mu start:stop:count "
                          "or add a [sweep] section to the config")

    fmap = design.feasibility_sweep(config.robot, d_range, mu_range, scenario)
    # CSV is the natural sweep output; an explicit --format table opts into
    # the compact status grid instead.
    fmt = args.format or (config.output_format if config.output_format != "table" else "csv")
    if fmt == "json":
        cells = [[{"status": cell.status.value,
                   "objective_Nm": cell.objective,
                   "min_slip_margin_N": cell.min_slip_margin}
                  for cell in row] for row in fmap.cells]
        payload = {"d_axis_m": [float(v) for v in fmap.d_axis],
                   "mu_axis": [float(v) for v in fmap.mu_axis],
                   "variant": scenario.equation_variant.value,
                   "cells": cells}
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "table":
        marker = {design.CellStatus.FEASIBLE: "F",
                  design.CellStatus.INFEASIBLE: ".",
                  design.CellStatus.GEOMETRY_INFEASIBLE: "x"}
        lines = [f"rows: D = {fmap.d_axis[0]:.4f}..{fmap.d_axis[-1]:.4f} m "
                 f"({len(fmap.d_axis)} values); columns: mu = {fmap.mu_axis[0]:.4f}.."
                 f"{fmap.mu_axis[-1]:.4f} ({len(fmap.mu_axis)} values)",
                 "F = feasible, . = no static equilibrium, x = geometry infeasible", ""]
        for i, d in enumerate(fmap.d_axis):
            lines.append(f"D={d:7.4f}  " + "".join(marker[c.status] for c in fmap.cells[i]))
        text = "\n".join(lines) + "\n"
    else:
        text = sweep_csv(fmap)
    _emit(text, args.output or config.output_path)
    return 0


def _load_state_vector(path: str) -> np.ndarray:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read state file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    if "state_vector" in payload:
        vec = payload["state_vector"]
        if not isinstance(vec, list) or len(vec) != 10:
            raise ConfigError(f"{path}: state_vector must hold 10 numbers")
        return np.array([float(v) for v in vec])
    try:
        forces = payload["forces_N"]
        state = list(forces["F"]) + list(forces["N"]) + list(payload["torques_Nm"])
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"{path}: expected forces_N.F, forces_N.N and torques_Nm "
                          f"(or a flat state_vector)") from exc
    if len(state) != 10:
        raise ConfigError(f"{path}: state holds {len(state)} numbers, expected 10")
    return np.array([float(v) for v in state])


def _cmd_check(args) -> int:
    config = load_config(args.config)
    scenario = _scenario_with_overrides(config, args)
    vector = _load_state_vector(args.state)
    posture = posture_from_geometry(config.robot, scenario)
    system = assemble_equalities(config.robot, scenario, posture)
    ineqs = assemble_inequalities(config.robot, scenario)
    report = check_state(vector, system, ineqs, tol=args.tol)

    fmt = args.format or config.output_format
    if fmt == "json":
        payload = {
            "passed": report.passed,
            "tolerance": report.tolerance,
            "max_equality_residual": report.max_equality_residual,
            "equality_residuals": report.equality_residuals,
            "inequality_slacks": report.inequality_slacks,
            "variant": scenario.equation_variant.value,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"equality residuals (tolerance {report.tolerance:g}):"]
        for label, value in report.equality_residuals.items():
            flag = "" if abs(value) <= report.tolerance else "   <-- violated"
            lines.append(f"  {label:8s} {value: .6e}{flag}")
        lines.append("inequality slacks (negative = violated):")
        for label, value in report.inequality_slacks.items():
            flag = "" if value >= -report.tolerance else "   <-- violated"
            lines.append(f"  {label:14s} {value: .6e}{flag}")
        lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output or config.output_path)
    return 0 if report.passed else 1


def _cmd_oracle(args) -> int:
    config = load_config(args.config)
    scenario = _scenario_with_overrides(config, args)
    if args.points < 11 or args.points % 2 == 0:
        raise ConfigError(f"--points must be an odd count of at least 11, got {args.points}")
    if args.half_width is not None and not args.half_width > 0:
        raise ConfigError(f"--half-width must be positive, got {args.half_width}")
    check = design.oracle_check(config.robot, scenario,
                                points_per_axis=args.points,
                                half_width=args.half_width)
    fmt = args.format or config.output_format
    if fmt == "json":
        payload = {
            "lp_objective_Nm": check.lp_objective,
            "oracle_best_Nm": check.oracle_best,
            "gap_Nm": check.gap,
            "tolerance_Nm": check.tolerance,
            "cell_lipschitz_bound_Nm": check.cell_lipschitz_bound,
            "feasible_count": check.feasible_count,
            "evaluated_count": check.evaluated_count,
            "half_width": check.half_width,
            "points_per_axis": check.points_per_axis,
            "null_space_dimension": check.dimension,
            "lower_bound_ok": check.lower_bound_ok,
            "upper_bound_ok": check.upper_bound_ok,
            "passed": check.passed,
            "variant": scenario.equation_variant.value,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = "\n".join([
            f"LP optimum:            {check.lp_objective:.6f} N*m",
            f"grid-search best:      {check.oracle_best:.6f} N*m "
            f"({check.feasible_count} feasible of {check.evaluated_count} grid points)",
            f"gap (oracle - LP):     {check.gap:.6f} N*m",
            f"tolerance (1% + cell): {check.tolerance:.6f} N*m "
            f"(cell bound {check.cell_lipschitz_bound:.6f})",
            f"box half-width:        {check.half_width:.6f} "
            f"({check.points_per_axis} points/axis, dimension {check.dimension})",
            f"lower bound check:     {'ok' if check.lower_bound_ok else 'VIOLATED'}",
            f"upper bound check:     {'ok' if check.upper_bound_ok else 'VIOLATED'}",
            f"result: {'PASS' if check.passed else 'FAIL'}",
        ]) + "\n"
    _emit(text, args.output or config.output_path)
    return 0 if check.passed else 1


def _cmd_variants(args) -> int:
    config = load_config(args.config)
    comparison = design.compare_variants(config.robot, config.scenario)
    fmt = args.format or config.output_format

    def solution_block(solution, failure):
        if solution is None:
            return {"status": "infeasible", "detail": failure}
        return {"status": "optimal",
                "torques_Nm": [float(v) for v in solution.joint_torques],
                "objective_Nm": float(solution.objective)}

    if fmt == "json":
        payload = {
            "posture_deg": {"theta1": comparison.posture.theta1_deg,
                            "theta2": comparison.posture.theta2_deg},
            "as_printed": solution_block(comparison.as_printed,
                                         comparison.as_printed_failure),
            "symmetry_corrected": solution_block(comparison.symmetry_corrected,
                                                 comparison.symmetry_corrected_failure),
            "objective_difference_Nm": comparison.objective_difference,
            "torque_differences_Nm": (
                None if comparison.torque_differences is None
                else [float(v) for v in comparison.torque_differences]),
            "row_coefficient_diffs": [
                {"row": diff.row_label, "variable": diff.variable,
                 "as_printed": diff.as_printed,
                 "symmetry_corrected": diff.symmetry_corrected}
                for diff in comparison.row_diffs],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = ["equation-variant comparison",
                 f"posture: theta1 = {comparison.posture.theta1_deg:.4f} deg, "
                 f"theta2 = {comparison.posture.theta2_deg:.4f} deg", ""]
        for name, solution, failure in (
                ("as_printed", comparison.as_printed, comparison.as_printed_failure),
                ("symmetry_corrected", comparison.symmetry_corrected,
                 comparison.symmetry_corrected_failure)):
            if solution is None:
                lines.append(f"{name}: infeasible ({failure})")
            else:
                taus = "  ".join(f"{v:.4f}" for v in solution.joint_torques)
                lines.append(f"{name}: tau = [{taus}] N*m, "
                             f"objective = {solution.objective:.4f} N*m")
        if comparison.objective_difference is not None:
            lines.append(f"objective difference (corrected - printed): "
                         f"{comparison.objective_difference:.4f} N*m")
        lines.append("")
        lines.append("coefficient differences (row, variable: printed -> corrected):")
        for diff in comparison.row_diffs:
            lines.append(f"  {diff.row_label:6s} {diff.variable:4s} "
                         f"{diff.as_printed: .6f} -> {diff.symmetry_corrected: .6f}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output or config.output_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pipeclimb",
        description="Quasi-static torque optimization and spring sizing for a "
                    "three-module wall-press pipe climbing robot.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, formats=("table", "json", "csv")):
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--variant", choices=[v.value for v in EquationVariant],
                       help="override the configured equation variant")
        p.add_argument("--format", choices=formats, help="output format override")
        p.add_argument("--output", help="write the report to this path instead of stdout")

    p = sub.add_parser("solve", help="optimal joint torques and contact margins")
    add_common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("stiffness", help="torsion-spring rates from a solve")
    add_common(p)
    p.add_argument("--rest-angles", help="four comma-separated rest angles in degrees")
    p.set_defaults(func=_cmd_stiffness)

    p = sub.add_parser("sweep", help="diameter/friction feasibility map")
    add_common(p)
    p.add_argument("--d", help="pipe-diameter range start:stop:count (metres)")
    p.add_argument("--mu", help="friction range start:stop:count")
    p.set_defaults(func=_cmd_sweep, default_format="csv")

    p = sub.add_parser("check", help="validate a state file against the model")
    add_common(p, formats=("table", "json"))
    p.add_argument("--state", required=True, help="JSON state file")
    p.add_argument("--tol", type=float, default=1e-8, help="residual tolerance")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("oracle", help="compare the LP optimum against grid search")
    add_common(p, formats=("table", "json"))
    p.add_argument("--points", type=int, default=101, help="grid points per axis (odd)")
    p.add_argument("--half-width", type=float, default=None,
                   help="coefficient box half-width (default: sized from the LP solution)")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("variants", help="as-printed vs symmetry-corrected discrepancy report")
    add_common(p, formats=("table", "json"))
    p.set_defaults(func=_cmd_variants)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GeometryInfeasible as exc:
        print(f"error: geometry infeasible: {exc}", file=sys.stderr)
        return 1
    except design.NoStaticEquilibrium as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except design.ZeroDeflection as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
