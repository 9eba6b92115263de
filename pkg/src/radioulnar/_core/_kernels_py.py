"""Pure-NumPy kernels: the fallback backend, vectorized over postures.

Semantics are identical to the compiled backend in `_kernels.pyx`; results
agree to floating-point rounding (BLAS vs naive loop summation order).
"""

from __future__ import annotations

import numpy as np


def _rodrigues_batch(axis: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """(N,3,3) rotations about one unit axis for a vector of angles."""
    x, y, z = axis
    c = np.cos(angles)
    s = np.sin(angles)
    k = 1.0 - c
    r = np.empty((angles.shape[0], 3, 3))
    r[:, 0, 0] = c + x * x * k
    r[:, 0, 1] = x * y * k - z * s
    r[:, 0, 2] = x * z * k + y * s
    r[:, 1, 0] = y * x * k + z * s
    r[:, 1, 1] = c + y * y * k
    r[:, 1, 2] = y * z * k - x * s
    r[:, 2, 0] = z * x * k - y * s
    r[:, 2, 1] = z * y * k + x * s
    r[:, 2, 2] = c + z * z * k
    return r


def _fk_batch(parent_idx, fixed_rot, fixed_trans, link_joint, axis_local, angles):
    """Base-frame rotations (N,L,3,3) and translations (N,L,3) per posture."""
    n = angles.shape[0]
    n_links = parent_idx.shape[0]
    rot = np.empty((n, n_links, 3, 3))
    trans = np.empty((n, n_links, 3))
    for l in range(n_links):
        j = link_joint[l]
        if j >= 0:
            local = fixed_rot[l] @ _rodrigues_batch(axis_local[j], angles[:, j])
        else:
            local = np.broadcast_to(fixed_rot[l], (n, 3, 3))
        p = parent_idx[l]
        if p < 0:
            rot[:, l] = local
            trans[:, l] = fixed_trans[l]
        else:
            rot[:, l] = rot[:, p] @ local
            trans[:, l] = rot[:, p] @ fixed_trans[l] + trans[:, p]
    return rot, trans


def fk_frames(parent_idx, fixed_rot, fixed_trans, link_joint, axis_local, angles):
    """Single-posture forward pass: returns ((L,3,3), (L,3))."""
    rot, trans = _fk_batch(
        parent_idx, fixed_rot, fixed_trans, link_joint, axis_local,
        angles.reshape(1, -1),
    )
    return rot[0], trans[0]


def fk_marker_batch(parent_idx, fixed_rot, fixed_trans, link_joint, axis_local,
                    angles, marker_link, marker_offset):
    """Base-frame marker positions (N,3) for a batch of postures."""
    rot, trans = _fk_batch(
        parent_idx, fixed_rot, fixed_trans, link_joint, axis_local, angles
    )
    return rot[:, marker_link] @ marker_offset + trans[:, marker_link]


def muscle_lengths_batch(parent_idx, fixed_rot, fixed_trans, link_joint,
                         axis_local, angles, wp_link, wp_offset, muscle_ptr):
    """Polyline muscle lengths (N,M) for a batch of postures."""
    rot, trans = _fk_batch(
        parent_idx, fixed_rot, fixed_trans, link_joint, axis_local, angles
    )
    n = angles.shape[0]
    points = np.empty((n, wp_link.shape[0], 3))
    for w in range(wp_link.shape[0]):
        l = wp_link[w]
        points[:, w] = rot[:, l] @ wp_offset[w] + trans[:, l]
    n_muscles = muscle_ptr.shape[0] - 1
    lengths = np.zeros((n, n_muscles))
    for m in range(n_muscles):
        seg = points[:, muscle_ptr[m]:muscle_ptr[m + 1]]
        deltas = np.diff(seg, axis=1)
        lengths[:, m] = np.sqrt((deltas * deltas).sum(axis=2)).sum(axis=1)
    return lengths
