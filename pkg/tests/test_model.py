import json
import math

import numpy as np
import pytest

from radioulnar.errors import ModelParseError, ModelValidationError
from radioulnar.model import (
    load_model,
    serialize_model,
    straight_axis_variant,
)

from conftest import TOY_ACTUATOR, toy_doc


def test_minimal_model_loads(toy):
    assert len(toy.links) == 2
    assert len(toy.joints) == 1
    assert len(toy.muscles) == 1
    assert toy.joint_names == ("hinge",)


def test_units_converted_on_load(toy):
    hinge = toy.joint("hinge")
    assert hinge.angle_max == pytest.approx(math.radians(170), abs=0)
    cord = toy.muscle("cord")
    assert cord.waypoints[0].offset == (0.0, -0.08, 0.0)


def test_shipped_model_contents(shipped):
    assert shipped.metadata.name == "kengoro_forearm"
    assert len(shipped.muscles) == 8
    # 6 forearm DOFs (radioulnar + 2 wrist + 3 finger groups) plus the elbow
    assert len(shipped.joints) == 7
    limits_deg = {
        "elbow_pitch": (-145, 0),
        "radioulnar_yaw": (-85, 85),
        "wrist_roll": (-75, 85),
        "wrist_pitch": (-15, 45),
    }
    for name, (lo, hi) in limits_deg.items():
        joint = shipped.joint(name)
        assert joint.angle_min == math.radians(lo)
        assert joint.angle_max == math.radians(hi)


def test_shipped_axis_is_unit(shipped):
    axis = np.array(shipped.tagged_joint("radioulnar").axis)
    assert abs(np.linalg.norm(axis) - 1.0) <= 1e-9


def test_missing_link_in_muscle_names_muscle():
    doc = toy_doc()
    doc["muscles"][0]["waypoints"][1]["link"] = "phantom"
    with pytest.raises(ModelValidationError, match="cord"):
        load_model(json.dumps(doc))


def test_parse_error_carries_location():
    with pytest.raises(ModelParseError, match="line"):
        load_model("{ not json }")


def test_missing_field_locus():
    doc = toy_doc()
    del doc["joints"][0]["axis"]
    with pytest.raises(ModelParseError, match=r"joints\[0\]"):
        load_model(json.dumps(doc))


def test_missing_top_level_key():
    doc = toy_doc()
    del doc["actuators"]
    with pytest.raises(ModelParseError, match="actuators"):
        load_model(json.dumps(doc))


@pytest.mark.parametrize(
    "mutate, match",
    [
        (lambda d: d["links"].append(dict(d["links"][1])), "duplicate link"),
        (lambda d: d["links"][1].update(parent="nowhere"), "missing parent"),
        (lambda d: d["links"].append(
            {"name": "island", "parent": None, "origin": [0, 0, 0], "rpy": [0, 0, 0]}
        ), "exactly one base"),
        (lambda d: d["joints"][0].update(axis=[0, 0, 0.5]), "axis norm"),
        (lambda d: d["joints"][0].update(limits=[10, -10]), "angle_min"),
        (lambda d: d["joints"][0].update(child_link="ground"), "base link"),
        (lambda d: d["muscles"][0].update(actuator="ghost"), "missing actuator"),
        (lambda d: d["muscles"][0]["waypoints"].pop(), "at least 2"),
        (lambda d: d["joints"].append(
            {"name": "dupe_drive", "child_link": "arm", "axis": [0, 1, 0], "limits": [0, 1]}
        ), "more than one joint"),
    ],
)
def test_validation_errors(mutate, match):
    doc = toy_doc()
    mutate(doc)
    with pytest.raises(ModelValidationError, match=match):
        load_model(json.dumps(doc))


def test_same_link_endpoints_rejected():
    doc = toy_doc()
    doc["muscles"][0]["waypoints"][1]["link"] = "ground"
    with pytest.raises(ModelValidationError, match="different links"):
        load_model(json.dumps(doc))


def test_round_trip_toy(toy):
    again = load_model(serialize_model(toy))
    assert again.links == toy.links
    assert again.joints == toy.joints
    assert again.muscles == toy.muscles
    assert again.actuators == toy.actuators
    assert again.metadata == toy.metadata


def test_round_trip_shipped(shipped):
    again = load_model(serialize_model(shipped))
    assert again.links == shipped.links
    assert again.joints == shipped.joints
    assert again.muscles == shipped.muscles
    assert again.actuators == shipped.actuators
    assert again.metadata == shipped.metadata


def straightenable_doc():
    """Toy with tagged elbow/radioulnar/wrist joints on the y axis."""
    return {
        "metadata": {
            "name": "straighten_me",
            "joint_tags": {"radioulnar": "spin", "elbow": "bend", "wrist": "flex"},
        },
        "links": [
            {"name": "base", "parent": None, "origin": [0, 0, 0], "rpy": [0, 0, 0]},
            {"name": "upper", "parent": "base", "origin": [0, 0, 0], "rpy": [0, 0, 0]},
            {"name": "lower", "parent": "upper", "origin": [0, 100.0, 0], "rpy": [0, 0, 0]},
            {"name": "tip", "parent": "lower", "origin": [0, 150.0, 0], "rpy": [0, 0, 0]},
        ],
        "joints": [
            {"name": "bend", "child_link": "upper", "axis": [1, 0, 0], "limits": [-90, 90]},
            {"name": "spin", "child_link": "lower", "axis": [0, 1, 0], "limits": [-90, 90]},
            {"name": "flex", "child_link": "tip", "axis": [1, 0, 0], "limits": [-90, 90]},
        ],
        "muscles": [
            {
                "name": "m",
                "actuator": "unit",
                "waypoints": [
                    {"link": "upper", "offset": [0, 0, 10.0]},
                    {"link": "lower", "offset": [0, 0, 10.0]},
                ],
            }
        ],
        "actuators": [dict(TOY_ACTUATOR)],
    }


def test_straight_axis_fixed_point():
    # the radioulnar axis already equals the elbow->wrist direction
    model = load_model(json.dumps(straightenable_doc()))
    variant = straight_axis_variant(model)
    assert variant.joints == model.joints
    assert variant.links == model.links


def test_straight_axis_shipped_changes_axis(shipped):
    variant = straight_axis_variant(shipped)
    slanted = np.array(shipped.tagged_joint("radioulnar").axis)
    straight = np.array(variant.tagged_joint("radioulnar").axis)
    cosine = float(slanted @ straight)
    angle = math.degrees(math.acos(min(1.0, cosine)))
    assert angle > 5.0  # the shipped slant is a clearly non-straight axis
    # only the radioulnar joint changed
    assert variant.links == shipped.links
    assert [j for j in variant.joints if j.name != "radioulnar_yaw"] == [
        j for j in shipped.joints if j.name != "radioulnar_yaw"
    ]


def test_straight_axis_idempotent(shipped):
    once = straight_axis_variant(shipped)
    twice = straight_axis_variant(once)
    assert once.joints == twice.joints


def test_straight_axis_missing_tag(toy):
    with pytest.raises(ModelValidationError, match="radioulnar"):
        straight_axis_variant(toy)


def test_straight_axis_degenerate_segment():
    doc = straightenable_doc()
    doc["links"][2]["origin"] = [0, 0, 0]   # wrist collapses onto the elbow
    doc["links"][3]["origin"] = [0, 0, 0]
    doc["metadata"]["joint_tags"]["wrist"] = "spin"
    doc["metadata"]["joint_tags"]["radioulnar"] = "flex"
    model = load_model(json.dumps(doc))
    with pytest.raises(ModelValidationError, match="degenerate"):
        straight_axis_variant(model)
