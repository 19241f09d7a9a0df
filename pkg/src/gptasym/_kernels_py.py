"""Pure numpy versions of the dense Laplace kernel assemblies.

Every function returns a ``(n_targets, n_sources)`` matrix that already
includes the source quadrature weights, so ``A @ density`` is the
discretized potential.
"""

import numpy as np

INV_2PI = 1.0 / (2.0 * np.pi)
INV_4PI = 1.0 / (4.0 * np.pi)


def _diff(targets, sources):
    dx = targets[:, 0, None] - sources[None, :, 0]
    dy = targets[:, 1, None] - sources[None, :, 1]
    return dx, dy, dx * dx + dy * dy


def kstar_matrix(nodes, normals, curvature, weights):
    dx, dy, r2 = _diff(nodes, nodes)
    np.fill_diagonal(r2, 1.0)
    k = INV_2PI * (dx * normals[:, 0, None] + dy * normals[:, 1, None]) / r2
    np.fill_diagonal(k, INV_4PI * curvature)
    return k * weights[None, :]


def single_layer_matrix(targets, sources, weights):
    _, _, r2 = _diff(targets, sources)
    return INV_4PI * np.log(r2) * weights[None, :]


def single_layer_normal_matrix(targets, tnormals, sources, weights):
    dx, dy, r2 = _diff(targets, sources)
    return INV_2PI * (dx * tnormals[:, 0, None] + dy * tnormals[:, 1, None]) / r2 * weights[None, :]


def single_layer_grad_matrices(targets, sources, weights):
    dx, dy, r2 = _diff(targets, sources)
    s = INV_2PI * weights[None, :] / r2
    return dx * s, dy * s


def double_layer_matrix(targets, sources, snormals, weights):
    dx, dy, r2 = _diff(targets, sources)
    return -INV_2PI * (dx * snormals[None, :, 0] + dy * snormals[None, :, 1]) / r2 * weights[None, :]


def double_layer_normal_matrix(targets, tnormals, sources, snormals, weights):
    dx, dy, r2 = _diff(targets, sources)
    ns_d = dx * snormals[None, :, 0] + dy * snormals[None, :, 1]
    nt_d = dx * tnormals[:, 0, None] + dy * tnormals[:, 1, None]
    ns_nt = tnormals[:, 0, None] * snormals[None, :, 0] + tnormals[:, 1, None] * snormals[None, :, 1]
    return -INV_2PI * (ns_nt / r2 - 2.0 * ns_d * nt_d / (r2 * r2)) * weights[None, :]
