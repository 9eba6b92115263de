"""Independent oracles for the test suite.

These reimplement forward kinematics and muscle lengths from the model
dataclasses using scipy's rotation primitives, deliberately sharing no code
with the package kernels they check.
"""

import numpy as np
from scipy.spatial.transform import Rotation


def rodrigues(axis, angle):
    """Rotation matrix about a unit axis via scipy (independent of the package)."""
    return Rotation.from_rotvec(np.asarray(axis, dtype=float) * angle).as_matrix()


def oracle_fk(model, angles_by_name):
    """link name -> (R, t) in the base frame, by recursive tree walk."""
    joints_by_child = {j.child_link: j for j in model.joints}
    children = {}
    root = None
    for link in model.links:
        if link.parent is None:
            root = link
        else:
            children.setdefault(link.parent, []).append(link)

    poses = {}

    def visit(link, parent_pose):
        r_fixed = link.fixed_transform_to_parent.rotation
        t_fixed = link.fixed_transform_to_parent.translation
        r_parent, t_parent = parent_pose
        r = r_parent @ r_fixed
        t = r_parent @ t_fixed + t_parent
        joint = joints_by_child.get(link.name)
        if joint is not None:
            axis_local = r_fixed.T @ np.asarray(joint.axis, dtype=float)
            r = r @ rodrigues(axis_local, angles_by_name[joint.name])
        poses[link.name] = (r, t)
        for child in children.get(link.name, []):
            visit(child, (r, t))

    visit(root, (np.eye(3), np.zeros(3)))
    return poses


def oracle_point(model, angles_by_name, link_name, offset):
    r, t = oracle_fk(model, angles_by_name)[link_name]
    return r @ np.asarray(offset, dtype=float) + t


def oracle_muscle_length(model, angles_by_name, muscle_name):
    poses = oracle_fk(model, angles_by_name)
    muscle = next(m for m in model.muscles if m.name == muscle_name)
    points = []
    for wp in muscle.waypoints:
        r, t = poses[wp.link]
        points.append(r @ np.asarray(wp.offset, dtype=float) + t)
    return float(sum(np.linalg.norm(b - a) for a, b in zip(points, points[1:])))


def rotate_about_line(point, line_point, axis, angle):
    """Rodrigues rotation of a point about an axis line (closed form)."""
    r = rodrigues(axis, angle)
    p = np.asarray(point, dtype=float)
    a = np.asarray(line_point, dtype=float)
    return a + r @ (p - a)
