# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: forward kinematics and muscle path lengths.

Same contract as `_kernels_py`; see that module for the reference semantics.
"""

from libc.math cimport cos, sin, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int32_t itype
ctypedef cnp.float64_t dtype


cdef inline void _rodrigues(double x, double y, double z, double angle,
                            double* r) noexcept nogil:
    cdef double c = cos(angle)
    cdef double s = sin(angle)
    cdef double k = 1.0 - c
    r[0] = c + x * x * k
    r[1] = x * y * k - z * s
    r[2] = x * z * k + y * s
    r[3] = y * x * k + z * s
    r[4] = c + y * y * k
    r[5] = y * z * k - x * s
    r[6] = z * x * k - y * s
    r[7] = z * y * k + x * s
    r[8] = c + z * z * k


cdef inline void _mat_mul(const double* a, const double* b, double* out) noexcept nogil:
    cdef int i, j
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = (a[3 * i] * b[j]
                              + a[3 * i + 1] * b[3 + j]
                              + a[3 * i + 2] * b[6 + j])


cdef inline void _mat_vec(const double* a, const double* v, double* out) noexcept nogil:
    cdef int i
    for i in range(3):
        out[i] = a[3 * i] * v[0] + a[3 * i + 1] * v[1] + a[3 * i + 2] * v[2]


cdef void _fk_one(int n_links, const itype* parent, const double* fixed_rot,
                  const double* fixed_trans, const itype* link_joint,
                  const double* axis_local, const double* angles,
                  double* rot, double* trans) noexcept nogil:
    cdef int l, j, p, i
    cdef double rloc[9]
    cdef double local[9]
    for l in range(n_links):
        j = link_joint[l]
        if j >= 0:
            _rodrigues(axis_local[3 * j], axis_local[3 * j + 1],
                       axis_local[3 * j + 2], angles[j], rloc)
            _mat_mul(fixed_rot + 9 * l, rloc, local)
        else:
            for i in range(9):
                local[i] = fixed_rot[9 * l + i]
        p = parent[l]
        if p < 0:
            for i in range(9):
                rot[9 * l + i] = local[i]
            for i in range(3):
                trans[3 * l + i] = fixed_trans[3 * l + i]
        else:
            _mat_mul(rot + 9 * p, local, rot + 9 * l)
            _mat_vec(rot + 9 * p, fixed_trans + 3 * l, trans + 3 * l)
            for i in range(3):
                trans[3 * l + i] += trans[3 * p + i]


def fk_frames(itype[::1] parent_idx, double[:, :, ::1] fixed_rot,
              double[:, ::1] fixed_trans, itype[::1] link_joint,
              double[:, ::1] axis_local, double[::1] angles):
    """Single-posture forward pass: returns ((L,3,3), (L,3))."""
    cdef int n_links = parent_idx.shape[0]
    rot = np.empty((n_links, 3, 3))
    trans = np.empty((n_links, 3))
    cdef double[:, :, ::1] rv = rot
    cdef double[:, ::1] tv = trans
    _fk_one(n_links, &parent_idx[0], &fixed_rot[0, 0, 0], &fixed_trans[0, 0],
            &link_joint[0], &axis_local[0, 0],
            &angles[0] if angles.shape[0] else NULL,
            &rv[0, 0, 0], &tv[0, 0])
    return rot, trans


def fk_marker_batch(itype[::1] parent_idx, double[:, :, ::1] fixed_rot,
                    double[:, ::1] fixed_trans, itype[::1] link_joint,
                    double[:, ::1] axis_local, double[:, ::1] angles,
                    int marker_link, double[::1] marker_offset):
    """Base-frame marker positions (N,3) for a batch of postures."""
    cdef int n = angles.shape[0]
    cdef int n_links = parent_idx.shape[0]
    out = np.empty((n, 3))
    scratch_rot = np.empty((n_links, 3, 3))
    scratch_trans = np.empty((n_links, 3))
    cdef double[:, ::1] ov = out
    cdef double[:, :, ::1] rv = scratch_rot
    cdef double[:, ::1] tv = scratch_trans
    cdef int i
    cdef const double* ang0
    with nogil:
        for i in range(n):
            ang0 = &angles[i, 0] if angles.shape[1] else NULL
            _fk_one(n_links, &parent_idx[0], &fixed_rot[0, 0, 0],
                    &fixed_trans[0, 0], &link_joint[0], &axis_local[0, 0],
                    ang0, &rv[0, 0, 0], &tv[0, 0])
            _mat_vec(&rv[marker_link, 0, 0], &marker_offset[0], &ov[i, 0])
            ov[i, 0] += tv[marker_link, 0]
            ov[i, 1] += tv[marker_link, 1]
            ov[i, 2] += tv[marker_link, 2]
    return out


def muscle_lengths_batch(itype[::1] parent_idx, double[:, :, ::1] fixed_rot,
                         double[:, ::1] fixed_trans, itype[::1] link_joint,
                         double[:, ::1] axis_local, double[:, ::1] angles,
                         itype[::1] wp_link, double[:, ::1] wp_offset,
                         itype[::1] muscle_ptr):
    """Polyline muscle lengths (N,M) for a batch of postures."""
    cdef int n = angles.shape[0]
    cdef int n_links = parent_idx.shape[0]
    cdef int n_wp = wp_link.shape[0]
    cdef int n_muscles = muscle_ptr.shape[0] - 1
    out = np.zeros((n, n_muscles))
    scratch_rot = np.empty((n_links, 3, 3))
    scratch_trans = np.empty((n_links, 3))
    points = np.empty((n_wp, 3))
    cdef double[:, ::1] ov = out
    cdef double[:, :, ::1] rv = scratch_rot
    cdef double[:, ::1] tv = scratch_trans
    cdef double[:, ::1] pv = points
    cdef int i, w, m, s, l
    cdef double dx, dy, dz, total
    cdef const double* ang0
    with nogil:
        for i in range(n):
            ang0 = &angles[i, 0] if angles.shape[1] else NULL
            _fk_one(n_links, &parent_idx[0], &fixed_rot[0, 0, 0],
                    &fixed_trans[0, 0], &link_joint[0], &axis_local[0, 0],
                    ang0, &rv[0, 0, 0], &tv[0, 0])
            for w in range(n_wp):
                l = wp_link[w]
                _mat_vec(&rv[l, 0, 0], &wp_offset[w, 0], &pv[w, 0])
                pv[w, 0] += tv[l, 0]
                pv[w, 1] += tv[l, 1]
                pv[w, 2] += tv[l, 2]
            for m in range(n_muscles):
                total = 0.0
                for s in range(muscle_ptr[m], muscle_ptr[m + 1] - 1):
                    dx = pv[s + 1, 0] - pv[s, 0]
                    dy = pv[s + 1, 1] - pv[s, 1]
                    dz = pv[s + 1, 2] - pv[s, 2]
                    total += sqrt(dx * dx + dy * dy + dz * dz)
                ov[i, m] = total
    return out
