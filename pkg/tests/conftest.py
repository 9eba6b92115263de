import json

import pytest

from radioulnar import load_default_model
from radioulnar.model import load_model


@pytest.fixture(scope="session")
def shipped():
    return load_default_model()


TOY_ACTUATOR = {
    "name": "unit",
    "gear_ratio": 100.0,
    "pulley_diameter": 8.0,
    "efficiency": 1.0,
    "continuous_max_tension_n": 400.0,
    "no_load_winding_rate": 100.0,
    "winding_resistance_ohm": 0.5,
    "torque_constant_nm_a": 0.01,
}


def toy_doc(a_mm=80.0, b_mm=120.0):
    """Single-hinge model whose muscle length follows the law of cosines:
    l(theta) = sqrt(a^2 + b^2 + 2ab cos(theta)), dl/dtheta = -ab sin/l."""
    return {
        "metadata": {
            "name": "toy_hinge",
            "palm_marker": {"link": "arm", "offset": [0.0, b_mm, 0.0]},
            "joint_tags": {},
        },
        "links": [
            {"name": "ground", "parent": None, "origin": [0, 0, 0], "rpy": [0, 0, 0]},
            {"name": "arm", "parent": "ground", "origin": [0, 0, 0], "rpy": [0, 0, 0]},
        ],
        "joints": [
            {"name": "hinge", "child_link": "arm", "axis": [0, 0, 1], "limits": [-170, 170]},
        ],
        "muscles": [
            {
                "name": "cord",
                "actuator": "unit",
                "waypoints": [
                    {"link": "ground", "offset": [0.0, -a_mm, 0.0]},
                    {"link": "arm", "offset": [0.0, b_mm, 0.0]},
                ],
            }
        ],
        "actuators": [dict(TOY_ACTUATOR)],
    }


@pytest.fixture()
def toy():
    return load_model(json.dumps(toy_doc()))


def welded_doc():
    """Two welded links (no joint between them) carrying a muscle, plus a
    separate hinge so the model has a DOF; the muscle length is constant."""
    return {
        "metadata": {"name": "welded", "joint_tags": {}},
        "links": [
            {"name": "ground", "parent": None, "origin": [0, 0, 0], "rpy": [0, 0, 0]},
            {"name": "bracket", "parent": "ground", "origin": [40.0, 0, 0], "rpy": [0, 0, 0]},
            {"name": "arm", "parent": "ground", "origin": [0, 0, 0], "rpy": [0, 0, 0]},
        ],
        "joints": [
            {"name": "hinge", "child_link": "arm", "axis": [0, 0, 1], "limits": [-90, 90]},
        ],
        "muscles": [
            {
                "name": "strap",
                "actuator": "unit",
                "waypoints": [
                    {"link": "ground", "offset": [0.0, -30.0, 0.0]},
                    {"link": "bracket", "offset": [0.0, 30.0, 0.0]},
                ],
            }
        ],
        "actuators": [dict(TOY_ACTUATOR)],
    }


@pytest.fixture()
def welded():
    return load_model(json.dumps(welded_doc()))
