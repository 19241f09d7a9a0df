# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense Laplace kernel assemblies (same contracts as _kernels_py)."""

import numpy as np
from libc.math cimport log

cdef double INV_2PI = 0.15915494309189535
cdef double INV_4PI = 0.07957747154594767


def kstar_matrix(const double[:, ::1] nodes, const double[:, ::1] normals,
                 const double[::1] curvature, const double[::1] weights):
    cdef Py_ssize_t n = nodes.shape[0], p, q
    cdef double dx, dy
    out = np.empty((n, n))
    cdef double[:, ::1] k = out
    for p in range(n):
        for q in range(n):
            if p == q:
                k[p, q] = INV_4PI * curvature[p] * weights[p]
            else:
                dx = nodes[p, 0] - nodes[q, 0]
                dy = nodes[p, 1] - nodes[q, 1]
                k[p, q] = INV_2PI * (dx * normals[p, 0] + dy * normals[p, 1]) / (dx * dx + dy * dy) * weights[q]
    return out


def single_layer_matrix(const double[:, ::1] targets, const double[:, ::1] sources,
                        const double[::1] weights):
    cdef Py_ssize_t nt = targets.shape[0], ns = sources.shape[0], p, q
    cdef double dx, dy
    out = np.empty((nt, ns))
    cdef double[:, ::1] a = out
    for p in range(nt):
        for q in range(ns):
            dx = targets[p, 0] - sources[q, 0]
            dy = targets[p, 1] - sources[q, 1]
            a[p, q] = INV_4PI * log(dx * dx + dy * dy) * weights[q]
    return out


def single_layer_normal_matrix(const double[:, ::1] targets, const double[:, ::1] tnormals,
                               const double[:, ::1] sources, const double[::1] weights):
    cdef Py_ssize_t nt = targets.shape[0], ns = sources.shape[0], p, q
    cdef double dx, dy
    out = np.empty((nt, ns))
    cdef double[:, ::1] a = out
    for p in range(nt):
        for q in range(ns):
            dx = targets[p, 0] - sources[q, 0]
            dy = targets[p, 1] - sources[q, 1]
            a[p, q] = INV_2PI * (dx * tnormals[p, 0] + dy * tnormals[p, 1]) / (dx * dx + dy * dy) * weights[q]
    return out


def single_layer_grad_matrices(const double[:, ::1] targets, const double[:, ::1] sources,
                               const double[::1] weights):
    cdef Py_ssize_t nt = targets.shape[0], ns = sources.shape[0], p, q
    cdef double dx, dy, s
    gx_arr = np.empty((nt, ns))
    gy_arr = np.empty((nt, ns))
    cdef double[:, ::1] gx = gx_arr
    cdef double[:, ::1] gy = gy_arr
    for p in range(nt):
        for q in range(ns):
            dx = targets[p, 0] - sources[q, 0]
            dy = targets[p, 1] - sources[q, 1]
            s = INV_2PI * weights[q] / (dx * dx + dy * dy)
            gx[p, q] = dx * s
            gy[p, q] = dy * s
    return gx_arr, gy_arr


def double_layer_matrix(const double[:, ::1] targets, const double[:, ::1] sources,
                        const double[:, ::1] snormals, const double[::1] weights):
    cdef Py_ssize_t nt = targets.shape[0], ns = sources.shape[0], p, q
    cdef double dx, dy
    out = np.empty((nt, ns))
    cdef double[:, ::1] a = out
    for p in range(nt):
        for q in range(ns):
            dx = targets[p, 0] - sources[q, 0]
            dy = targets[p, 1] - sources[q, 1]
            a[p, q] = -INV_2PI * (dx * snormals[q, 0] + dy * snormals[q, 1]) / (dx * dx + dy * dy) * weights[q]
    return out


def double_layer_normal_matrix(const double[:, ::1] targets, const double[:, ::1] tnormals,
                               const double[:, ::1] sources, const double[:, ::1] snormals,
                               const double[::1] weights):
    cdef Py_ssize_t nt = targets.shape[0], ns = sources.shape[0], p, q
    cdef double dx, dy, r2, ns_d, nt_d, ns_nt
    out = np.empty((nt, ns))
    cdef double[:, ::1] a = out
    for p in range(nt):
        for q in range(ns):
            dx = targets[p, 0] - sources[q, 0]
            dy = targets[p, 1] - sources[q, 1]
            r2 = dx * dx + dy * dy
            ns_d = dx * snormals[q, 0] + dy * snormals[q, 1]
            nt_d = dx * tnormals[p, 0] + dy * tnormals[p, 1]
            ns_nt = tnormals[p, 0] * snormals[q, 0] + tnormals[p, 1] * snormals[q, 1]
            a[p, q] = -INV_2PI * (ns_nt / r2 - 2.0 * ns_d * nt_d / (r2 * r2)) * weights[q]
    return out
