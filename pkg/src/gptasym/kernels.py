"""Backend selection for the dense kernel assemblies.

The compiled extension ``gptasym._kernels`` is used when it imports;
otherwise the numpy implementation in ``gptasym._kernels_py`` is used.
Set ``GPTASYM_PURE_PYTHON=1`` to force the numpy path.
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("GPTASYM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def kstar_matrix(nodes, normals, curvature, weights):
    return _impl.kstar_matrix(_c(nodes), _c(normals), _c(curvature), _c(weights))


def single_layer_matrix(targets, sources, weights):
    return _impl.single_layer_matrix(_c(targets), _c(sources), _c(weights))


def single_layer_normal_matrix(targets, tnormals, sources, weights):
    return _impl.single_layer_normal_matrix(_c(targets), _c(tnormals), _c(sources), _c(weights))


def single_layer_grad_matrices(targets, sources, weights):
    return _impl.single_layer_grad_matrices(_c(targets), _c(sources), _c(weights))


def double_layer_matrix(targets, sources, snormals, weights):
    return _impl.double_layer_matrix(_c(targets), _c(sources), _c(snormals), _c(weights))


def double_layer_normal_matrix(targets, tnormals, sources, snormals, weights):
    return _impl.double_layer_normal_matrix(_c(targets), _c(tnormals), _c(sources), _c(snormals), _c(weights))
