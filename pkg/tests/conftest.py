import numpy as np
import pytest

from pipeclimb import design, statics


@pytest.fixture
def params():
    return design.reference_robot()


@pytest.fixture
def scenario():
    return statics.PipeScenario(pipe_diameter=0.075, friction_coefficient=0.7)


@pytest.fixture
def posture(params, scenario):
    return statics.posture_from_geometry(params, scenario)


@pytest.fixture
def reference_solution(params, scenario):
    return design.optimize_torques(params, scenario)


REFERENCE_CONFIG = """\
[robot]
module_mass = 0.150
link_mass = 0.020
module_lengths = [0.14, 0.14, 0.14]
module_diameter = 0.050
link_lengths = [0.060, 0.060]
motor_torque_max = 1.0
gravity = 9.81

[scenario]
pipe_diameter = 0.075
friction_coefficient = 0.7
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "reference.toml"
    path.write_text(REFERENCE_CONFIG)
    return path


def random_params(rng: np.random.Generator) -> design.RobotParams:
    """Reference robot with masses and lengths perturbed by +/-20%."""
    return design.RobotParams(
        module_mass=0.150 * rng.uniform(0.8, 1.2),
        link_mass=0.020 * rng.uniform(0.8, 1.2),
        module_lengths=tuple(0.14 * rng.uniform(0.8, 1.2, 3)),
        module_diameter=0.050,
        link_lengths=tuple(0.060 * rng.uniform(0.8, 1.2, 2)),
        motor_torque_max=1.0,
    )
