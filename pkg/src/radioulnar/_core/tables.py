"""Flat numeric tables derived from a RobotModel for the kernel backends.

Links are re-ordered topologically (parents first) so the kernels can run a
single forward pass; name/index maps translate back to model order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class NumericModel:
    link_names: tuple            # topological order, root first
    link_index: dict             # name -> topo index
    parent_idx: np.ndarray       # (L,) int32, -1 for root
    fixed_rot: np.ndarray        # (L,3,3)
    fixed_trans: np.ndarray      # (L,3)
    link_joint: np.ndarray       # (L,) int32, joint index or -1
    joint_names: tuple           # model order
    joint_index: dict
    axis_local: np.ndarray       # (J,3) axis in the child's pre-rotation frame
    joint_child: np.ndarray      # (J,) int32 topo link index
    limits_lo: np.ndarray        # (J,)
    limits_hi: np.ndarray        # (J,)
    muscle_names: tuple
    muscle_index: dict
    wp_link: np.ndarray          # (W,) int32 topo link index per waypoint
    wp_offset: np.ndarray        # (W,3)
    muscle_ptr: np.ndarray       # (M+1,) int32 waypoint ranges per muscle
    marker_link: int = -1
    marker_offset: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @property
    def num_joints(self) -> int:
        return len(self.joint_names)

    @property
    def num_muscles(self) -> int:
        return len(self.muscle_names)

    def fk(self, angles: np.ndarray):
        """Link rotations/translations in the base frame for one posture."""
        from . import kernels

        return kernels().fk_frames(
            self.parent_idx, self.fixed_rot, self.fixed_trans,
            self.link_joint, self.axis_local,
            np.ascontiguousarray(angles, dtype=float),
        )

    def marker_batch(self, angles: np.ndarray, link: int, offset) -> np.ndarray:
        """Base-frame positions of a link-fixed point for a batch of postures."""
        from . import kernels

        return kernels().fk_marker_batch(
            self.parent_idx, self.fixed_rot, self.fixed_trans,
            self.link_joint, self.axis_local,
            np.ascontiguousarray(angles, dtype=float),
            int(link), np.ascontiguousarray(offset, dtype=float),
        )

    def lengths_batch(self, angles: np.ndarray) -> np.ndarray:
        """Polyline path length of every muscle for a batch of postures."""
        from . import kernels

        return kernels().muscle_lengths_batch(
            self.parent_idx, self.fixed_rot, self.fixed_trans,
            self.link_joint, self.axis_local,
            np.ascontiguousarray(angles, dtype=float),
            self.wp_link, self.wp_offset, self.muscle_ptr,
        )


def build_tables(model) -> NumericModel:
    """Flatten a validated RobotModel into kernel-ready arrays."""
    by_name = {link.name: link for link in model.links}
    children = {link.name: [] for link in model.links}
    root = None
    for link in model.links:
        if link.parent is None:
            root = link.name
        else:
            children[link.parent].append(link.name)

    order = []
    stack = [root]
    while stack:
        name = stack.pop()
        order.append(name)
        # reversed so traversal visits children in declaration order
        stack.extend(reversed(children[name]))
    link_index = {name: i for i, name in enumerate(order)}

    n_links = len(order)
    parent_idx = np.full(n_links, -1, dtype=np.int32)
    fixed_rot = np.empty((n_links, 3, 3))
    fixed_trans = np.empty((n_links, 3))
    for i, name in enumerate(order):
        link = by_name[name]
        if link.parent is not None:
            parent_idx[i] = link_index[link.parent]
        fixed_rot[i] = link.fixed_transform_to_parent.rotation
        fixed_trans[i] = link.fixed_transform_to_parent.translation

    joint_names = tuple(j.name for j in model.joints)
    joint_index = {name: i for i, name in enumerate(joint_names)}
    n_joints = len(joint_names)
    link_joint = np.full(n_links, -1, dtype=np.int32)
    axis_local = np.empty((n_joints, 3))
    joint_child = np.empty(n_joints, dtype=np.int32)
    limits_lo = np.empty(n_joints)
    limits_hi = np.empty(n_joints)
    for j, joint in enumerate(model.joints):
        child = link_index[joint.child_link]
        link_joint[child] = j
        joint_child[j] = child
        # the joint axis is declared in the parent frame; express it in the
        # child's pre-rotation frame so the kernel can post-multiply
        axis_local[j] = fixed_rot[child].T @ np.asarray(joint.axis, dtype=float)
        limits_lo[j] = joint.angle_min
        limits_hi[j] = joint.angle_max

    muscle_names = tuple(m.name for m in model.muscles)
    muscle_index = {name: i for i, name in enumerate(muscle_names)}
    wp_link = []
    wp_offset = []
    muscle_ptr = [0]
    for muscle in model.muscles:
        for wp in muscle.waypoints:
            wp_link.append(link_index[wp.link])
            wp_offset.append(wp.offset)
        muscle_ptr.append(len(wp_link))

    marker_link = -1
    marker_offset = np.zeros(3)
    marker = model.metadata.palm_marker
    if marker is not None:
        marker_link = link_index[marker.link]
        marker_offset = np.asarray(marker.offset, dtype=float)

    return NumericModel(
        link_names=tuple(order),
        link_index=link_index,
        parent_idx=parent_idx,
        fixed_rot=fixed_rot,
        fixed_trans=fixed_trans,
        link_joint=link_joint,
        joint_names=joint_names,
        joint_index=joint_index,
        axis_local=axis_local,
        joint_child=joint_child,
        limits_lo=limits_lo,
        limits_hi=limits_hi,
        muscle_names=muscle_names,
        muscle_index=muscle_index,
        wp_link=np.asarray(wp_link, dtype=np.int32),
        wp_offset=np.asarray(wp_offset, dtype=float).reshape(-1, 3),
        muscle_ptr=np.asarray(muscle_ptr, dtype=np.int32),
        marker_link=marker_link,
        marker_offset=marker_offset,
    )
