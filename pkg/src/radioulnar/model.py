"""Robot description: links, joints, muscles, actuators, and the file format.

Model documents are JSON with top-level keys `links`, `joints`, `muscles`,
`actuators`, `metadata`. File units default to degrees and millimeters and
are converted to radians/meters on load; an optional `units` key
(`{"angles": "deg"|"rad", "lengths": "mm"|"m"}`) overrides that, which the
serializer uses to round-trip exactly. See docs/model_format.md.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np

from .actuation import ActuatorSpec
from .errors import ModelParseError, ModelValidationError
from .geometry import Transform, rpy_from_matrix, rpy_matrix

DEFAULT_MODEL_NAME = "kengoro_forearm"

_UNIT_NORM_TOL = 1e-9


@dataclass(frozen=True)
class Link:
    name: str
    parent: str | None
    fixed_transform_to_parent: Transform


@dataclass(frozen=True)
class Joint:
    name: str
    child_link: str
    axis: tuple  # unit 3-vector in the parent-link frame
    angle_min: float
    angle_max: float
    kind: str = "revolute"


@dataclass(frozen=True)
class Waypoint:
    link: str
    offset: tuple  # meters, in the link frame


@dataclass(frozen=True)
class Muscle:
    name: str
    waypoints: tuple  # of Waypoint, length >= 2
    actuator: str     # ActuatorSpec name


@dataclass(frozen=True)
class PalmMarker:
    link: str
    offset: tuple


@dataclass(frozen=True)
class ModelMetadata:
    name: str
    masses_kgf: dict = field(default_factory=dict)
    palm_marker: PalmMarker | None = None
    joint_tags: dict = field(default_factory=dict)  # role -> joint name


@dataclass
class RobotModel:
    """Validated robot description; treat as immutable after load."""

    links: tuple
    joints: tuple
    muscles: tuple
    actuators: dict  # name -> ActuatorSpec
    metadata: ModelMetadata
    _numeric: object = field(default=None, compare=False, repr=False)

    def numeric(self):
        """Kernel-ready numeric tables (cached)."""
        if self._numeric is None:
            from ._core import build_tables

            self._numeric = build_tables(self)
        return self._numeric

    @property
    def base_link(self) -> Link:
        return next(l for l in self.links if l.parent is None)

    @property
    def joint_names(self) -> tuple:
        return tuple(j.name for j in self.joints)

    @property
    def muscle_names(self) -> tuple:
        return tuple(m.name for m in self.muscles)

    def link(self, name: str) -> Link:
        return _lookup(self.links, name, "link")

    def joint(self, name: str) -> Joint:
        return _lookup(self.joints, name, "joint")

    def muscle(self, name: str) -> Muscle:
        return _lookup(self.muscles, name, "muscle")

    def actuator_for(self, muscle_name: str) -> ActuatorSpec:
        return self.actuators[self.muscle(muscle_name).actuator]

    def tagged_joint(self, role: str) -> Joint:
        """Joint registered under a metadata role tag (radioulnar/elbow/wrist)."""
        name = self.metadata.joint_tags.get(role)
        if name is None:
            raise ModelValidationError(f"model lacks a joint tagged '{role}'")
        return self.joint(name)


def _lookup(items, name, kind):
    for item in items:
        if item.name == name:
            return item
    raise ModelValidationError(f"unknown {kind} '{name}'")


# ---------------------------------------------------------------------------
# parsing

_REQUIRED = object()


class _Reader:
    """Field extraction with a dotted locus in every error message."""

    def __init__(self, obj, locus):
        if not isinstance(obj, dict):
            raise ModelParseError(f"{locus}: expected an object")
        self.obj = obj
        self.locus = locus

    def get(self, key, type_=None, default=_REQUIRED):
        if key not in self.obj:
            if default is _REQUIRED:
                raise ModelParseError(f"{self.locus}: missing field '{key}'")
            return default
        value = self.obj[key]
        if type_ is not None and not isinstance(value, type_):
            raise ModelParseError(
                f"{self.locus}.{key}: expected {getattr(type_, '__name__', type_)}, "
                f"got {type(value).__name__}"
            )
        return value

    def number(self, key, default=_REQUIRED):
        value = self.get(key, default=default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ModelParseError(f"{self.locus}.{key}: expected a number")
        return float(value)

    def vec3(self, key):
        value = self.get(key, list)
        if len(value) != 3 or not all(isinstance(v, (int, float)) for v in value):
            raise ModelParseError(f"{self.locus}.{key}: expected a 3-vector of numbers")
        return tuple(float(v) for v in value)


def _unit_scales(doc) -> tuple:
    units = doc.get("units", {})
    angles = units.get("angles", "deg")
    lengths = units.get("lengths", "mm")
    if angles not in ("deg", "rad"):
        raise ModelParseError(f"units.angles: expected 'deg' or 'rad', got {angles!r}")
    if lengths not in ("mm", "m"):
        raise ModelParseError(f"units.lengths: expected 'mm' or 'm', got {lengths!r}")
    angle_scale = math.pi / 180.0 if angles == "deg" else 1.0
    length_scale = 1e-3 if lengths == "mm" else 1.0
    return angle_scale, length_scale


def load_model(text: str) -> RobotModel:
    """Parse and validate a model document. Raises ModelParseError or
    ModelValidationError with a field locus / the violated invariant."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ModelParseError("top level: expected an object")
    for key in ("links", "joints", "muscles", "actuators", "metadata"):
        if key not in doc:
            raise ModelParseError(f"top level: missing key '{key}'")

    ang, length = _unit_scales(doc)

    links = []
    for i, entry in enumerate(doc["links"]):
        r = _Reader(entry, f"links[{i}]")
        name = r.get("name", str)
        parent = r.get("parent", default=None)
        if parent is not None and not isinstance(parent, str):
            raise ModelParseError(f"links[{i}].parent: expected a string or null")
        origin = np.array(r.vec3("origin")) * length
        roll, pitch, yaw = (v * ang for v in r.vec3("rpy"))
        links.append(Link(name, parent, Transform(rpy_matrix(roll, pitch, yaw), origin)))

    joints = []
    for i, entry in enumerate(doc["joints"]):
        r = _Reader(entry, f"joints[{i}]")
        limits = r.get("limits", list)
        if len(limits) != 2 or not all(isinstance(v, (int, float)) for v in limits):
            raise ModelParseError(f"joints[{i}].limits: expected [min, max] numbers")
        lo, hi = limits
        joints.append(
            Joint(
                name=r.get("name", str),
                child_link=r.get("child_link", str),
                axis=r.vec3("axis"),
                angle_min=float(lo) * ang,
                angle_max=float(hi) * ang,
                kind=r.get("kind", str, default="revolute"),
            )
        )

    muscles = []
    for i, entry in enumerate(doc["muscles"]):
        r = _Reader(entry, f"muscles[{i}]")
        wps = []
        for k, wp in enumerate(r.get("waypoints", list)):
            wr = _Reader(wp, f"muscles[{i}].waypoints[{k}]")
            offset = tuple(v * length for v in wr.vec3("offset"))
            wps.append(Waypoint(wr.get("link", str), offset))
        muscles.append(Muscle(r.get("name", str), tuple(wps), r.get("actuator", str)))

    actuators = {}
    for i, entry in enumerate(doc["actuators"]):
        r = _Reader(entry, f"actuators[{i}]")
        name = r.get("name", str)
        if name in actuators:
            raise ModelValidationError(f"duplicate actuator name '{name}'")
        actuators[name] = ActuatorSpec(
            gear_ratio=r.number("gear_ratio"),
            pulley_radius=r.number("pulley_diameter") * length / 2.0,
            efficiency=r.number("efficiency"),
            continuous_max_tension=r.number("continuous_max_tension_n"),
            no_load_winding_rate=r.number("no_load_winding_rate") * length,
            winding_resistance=r.number("winding_resistance_ohm"),
            torque_constant=r.number("torque_constant_nm_a"),
        )

    mr = _Reader(doc["metadata"], "metadata")
    marker = None
    if "palm_marker" in doc["metadata"]:
        pr = _Reader(mr.get("palm_marker", dict), "metadata.palm_marker")
        marker = PalmMarker(
            pr.get("link", str), tuple(v * length for v in pr.vec3("offset"))
        )
    masses = mr.get("masses_kgf", dict, default={})
    metadata = ModelMetadata(
        name=mr.get("name", str),
        masses_kgf={str(k): float(v) for k, v in masses.items()},
        palm_marker=marker,
        joint_tags=dict(mr.get("joint_tags", dict, default={})),
    )

    model = RobotModel(tuple(links), tuple(joints), tuple(muscles), actuators, metadata)
    validate_model(model)
    return model


def validate_model(model: RobotModel) -> None:
    """Check every structural invariant; raises ModelValidationError naming
    the violated invariant and the offending element."""
    link_names = [l.name for l in model.links]
    _require_unique(link_names, "link")
    _require_unique([j.name for j in model.joints], "joint")
    _require_unique([m.name for m in model.muscles], "muscle")

    by_name = set(link_names)
    roots = [l.name for l in model.links if l.parent is None]
    if len(roots) != 1:
        raise ModelValidationError(
            f"link graph must have exactly one base link, found {len(roots)}"
        )
    for l in model.links:
        if l.parent is not None and l.parent not in by_name:
            raise ModelValidationError(
                f"link '{l.name}' references missing parent '{l.parent}'"
            )
    # tree check: every link reachable from the root, no cycles
    children = {name: [] for name in link_names}
    for l in model.links:
        if l.parent is not None:
            children[l.parent].append(l.name)
    seen = set()
    stack = [roots[0]]
    while stack:
        name = stack.pop()
        if name in seen:
            raise ModelValidationError(f"link graph contains a cycle at '{name}'")
        seen.add(name)
        stack.extend(children[name])
    if seen != by_name:
        orphan = sorted(by_name - seen)[0]
        raise ModelValidationError(f"link '{orphan}' is not connected to the base link")
    base_tf = next(l for l in model.links if l.parent is None).fixed_transform_to_parent
    if not (np.array_equal(base_tf.rotation, np.eye(3))
            and np.array_equal(base_tf.translation, np.zeros(3))):
        raise ModelValidationError(
            "base link must carry the identity transform (its pose defines the base frame)"
        )

    jointed = set()
    for j in model.joints:
        if j.kind != "revolute":
            raise ModelValidationError(f"joint '{j.name}': only revolute joints are supported")
        if j.child_link not in by_name:
            raise ModelValidationError(
                f"joint '{j.name}' references missing child link '{j.child_link}'"
            )
        if j.child_link == roots[0]:
            raise ModelValidationError(f"joint '{j.name}' cannot actuate the base link")
        if j.child_link in jointed:
            raise ModelValidationError(
                f"link '{j.child_link}' is driven by more than one joint"
            )
        jointed.add(j.child_link)
        norm = math.sqrt(sum(a * a for a in j.axis))
        if abs(norm - 1.0) > _UNIT_NORM_TOL:
            raise ModelValidationError(
                f"joint '{j.name}': axis norm {norm!r} deviates from 1 by more than {_UNIT_NORM_TOL}"
            )
        if not j.angle_min < j.angle_max:
            raise ModelValidationError(
                f"joint '{j.name}': angle_min must be strictly below angle_max"
            )

    for m in model.muscles:
        if len(m.waypoints) < 2:
            raise ModelValidationError(f"muscle '{m.name}' needs at least 2 waypoints")
        for wp in m.waypoints:
            if wp.link not in by_name:
                raise ModelValidationError(
                    f"muscle '{m.name}' references missing link '{wp.link}'"
                )
        if m.waypoints[0].link == m.waypoints[-1].link:
            raise ModelValidationError(
                f"muscle '{m.name}': first and last waypoints must sit on different links"
            )
        if m.actuator not in model.actuators:
            raise ModelValidationError(
                f"muscle '{m.name}' references missing actuator '{m.actuator}'"
            )

    for name in model.metadata.masses_kgf:
        if name not in by_name:
            raise ModelValidationError(f"metadata.masses_kgf names missing link '{name}'")
    marker = model.metadata.palm_marker
    if marker is not None and marker.link not in by_name:
        raise ModelValidationError(
            f"metadata.palm_marker references missing link '{marker.link}'"
        )
    joint_names = set(j.name for j in model.joints)
    for role, jname in model.metadata.joint_tags.items():
        if jname not in joint_names:
            raise ModelValidationError(
                f"metadata.joint_tags['{role}'] names missing joint '{jname}'"
            )


def _require_unique(names, kind):
    seen = set()
    for name in names:
        if name in seen:
            raise ModelValidationError(f"duplicate {kind} name '{name}'")
        seen.add(name)


# ---------------------------------------------------------------------------
# serialization

def serialize_model(model: RobotModel) -> str:
    """JSON text that `load_model` parses back to a field-identical model.

    Emitted with explicit SI units (rad/m) so no unit conversion happens on
    reload; the deg/mm default of hand-written files stays lossless that way.
    """
    doc = {
        "units": {"angles": "rad", "lengths": "m"},
        "metadata": {
            "name": model.metadata.name,
            "masses_kgf": dict(model.metadata.masses_kgf),
            "joint_tags": dict(model.metadata.joint_tags),
        },
        "links": [],
        "joints": [],
        "muscles": [],
        "actuators": [],
    }
    if model.metadata.palm_marker is not None:
        doc["metadata"]["palm_marker"] = {
            "link": model.metadata.palm_marker.link,
            "offset": list(model.metadata.palm_marker.offset),
        }
    for l in model.links:
        tf = l.fixed_transform_to_parent
        doc["links"].append(
            {
                "name": l.name,
                "parent": l.parent,
                "origin": [float(v) for v in tf.translation],
                "rpy": list(rpy_from_matrix(tf.rotation)),
            }
        )
    for j in model.joints:
        doc["joints"].append(
            {
                "name": j.name,
                "child_link": j.child_link,
                "axis": list(j.axis),
                "limits": [j.angle_min, j.angle_max],
                "kind": j.kind,
            }
        )
    for m in model.muscles:
        doc["muscles"].append(
            {
                "name": m.name,
                "actuator": m.actuator,
                "waypoints": [
                    {"link": wp.link, "offset": list(wp.offset)} for wp in m.waypoints
                ],
            }
        )
    for name, spec in model.actuators.items():
        doc["actuators"].append(
            {
                "name": name,
                "gear_ratio": spec.gear_ratio,
                "pulley_diameter": spec.pulley_radius * 2.0,
                "efficiency": spec.efficiency,
                "continuous_max_tension_n": spec.continuous_max_tension,
                "no_load_winding_rate": spec.no_load_winding_rate,
                "winding_resistance_ohm": spec.winding_resistance,
                "torque_constant_nm_a": spec.torque_constant,
            }
        )
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# variants and shipped data

def straight_axis_variant(model: RobotModel) -> RobotModel:
    """Copy of the model with the radioulnar axis replaced by the forearm
    long-axis (unit vector from the elbow joint origin to the wrist joint
    origin at zero posture). Everything else is untouched."""
    radioulnar = model.tagged_joint("radioulnar")
    elbow = model.tagged_joint("elbow")
    wrist = model.tagged_joint("wrist")

    num = model.numeric()
    rot, trans = num.fk(np.zeros(num.num_joints))
    elbow_origin = trans[num.link_index[elbow.child_link]]
    wrist_origin = trans[num.link_index[wrist.child_link]]
    segment = wrist_origin - elbow_origin
    norm = float(np.linalg.norm(segment))
    if norm < 1e-12:
        raise ModelValidationError(
            "elbow-to-wrist segment is degenerate (zero length); cannot build the straight axis"
        )
    axis_base = segment / norm

    # the joint axis field lives in the parent-link frame
    parent_name = model.link(radioulnar.child_link).parent
    parent_rot = rot[num.link_index[parent_name]]
    axis_parent = parent_rot.T @ axis_base
    new_joint = replace(radioulnar, axis=tuple(float(v) for v in axis_parent))
    joints = tuple(new_joint if j.name == radioulnar.name else j for j in model.joints)
    return RobotModel(model.links, joints, model.muscles, dict(model.actuators), model.metadata)


def default_model_text() -> str:
    """Raw JSON of the shipped forearm description."""
    return (
        resources.files("radioulnar")
        .joinpath(f"data/{DEFAULT_MODEL_NAME}.json")
        .read_text(encoding="utf-8")
    )


def load_default_model() -> RobotModel:
    """The shipped forearm model (estimated geometry at human proportions)."""
    return load_model(default_model_text())


def load_model_file(path) -> RobotModel:
    with open(path, "r", encoding="utf-8") as fh:
        return load_model(fh.read())
