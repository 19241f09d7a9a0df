"""Laplace fundamental solution, layer potentials and Nystrom operator matrices.

Conventions: ``Gamma(x) = ln|x| / (2 pi)``; the double layer kernel is
``d/dnu_y Gamma(x - y)``; ``K`` is its on-curve principal value and ``K*``
its L2 adjoint, so ``K(1) = 1/2`` and
``d/dnu(+/-) S phi = (+/- 1/2 + K*) phi``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, NearSingularError, NearSingularWarning, SingularPointError
from .geometry import BoundaryCurve, discretize
from .multiindex import MultiIndex, check, holomorphic_partial

N_MAX_DERIV = 6


@dataclass(frozen=True, eq=False)
class Density:
    """Nodal values of a function on a discretized curve."""

    curve: BoundaryCurve
    values: np.ndarray
    mean_zero: bool = False

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.curve.size,):
            raise InvalidArgumentError(f"density has {v.shape} values for a curve of {self.curve.size} nodes")
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return self.curve.integrate(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    curve: BoundaryCurve
    matrix: np.ndarray
    tag: str

    def __matmul__(self, other):
        return self.matrix @ np.asarray(other)


def _values(density, curve: BoundaryCurve | None = None) -> np.ndarray:
    v = np.asarray(density.values if isinstance(density, Density) else density, dtype=float)
    if curve is not None and v.shape != (curve.size,):
        raise InvalidArgumentError("density length does not match curve")
    return v


# --- fundamental solution -------------------------------------------------


def _as_complex(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0] + 1j * x[..., 1]


def fundamental_solution(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    r2 = (x**2).sum(-1)
    if np.any(r2 == 0):
        raise SingularPointError("fundamental solution evaluated at x = 0")
    return np.log(r2) / (4 * np.pi)


def gamma_partial(x, j: MultiIndex, n_max: int = N_MAX_DERIV) -> np.ndarray:
    """Partial derivative ``d^j Gamma(x)`` for ``|j| <= n_max``.

    Uses ``Gamma = Re(log w) / (2 pi)`` with ``w = x1 + i x2``, so the
    ``k``-th complex derivative is ``(-1)^(k-1) (k-1)! / w^k``.
    """
    j = check(j)
    k = j[0] + j[1]
    if k > n_max:
        raise InvalidArgumentError(f"derivative order {k} exceeds cap {n_max}")
    if k == 0:
        return fundamental_solution(x)
    w = _as_complex(x)
    if np.any(w == 0):
        raise SingularPointError("fundamental solution derivative evaluated at x = 0")
    deriv = (-1) ** (k - 1) * factorial(k - 1) / w**k
    return holomorphic_partial(deriv, j) / (2 * np.pi)


def gamma_gradient(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    r2 = (x**2).sum(-1, keepdims=True)
    if np.any(r2 == 0):
        raise SingularPointError("fundamental solution gradient evaluated at x = 0")
    return x / (2 * np.pi * r2)


# --- near-field flagging ----------------------------------------------------


def _near_mask(curve: BoundaryCurve, targets: np.ndarray) -> np.ndarray:
    d2 = ((targets[:, None, :] - curve.nodes[None, :, :]) ** 2).sum(-1)
    return np.sqrt(d2.min(axis=1)) < curve.mesh_width()


def _check_targets(curve: BoundaryCurve, targets, near: str) -> np.ndarray:
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if near == "ignore":
        return targets
    mask = _near_mask(curve, targets)
    if mask.any():
        msg = f"{int(mask.sum())} target(s) closer than one mesh width to the curve"
        if near == "raise":
            raise NearSingularError(msg)
        warnings.warn(msg, NearSingularWarning, stacklevel=3)
    return targets


# --- layer potentials -----------------------------------------------------


def single_layer(curve: BoundaryCurve, density, targets=None, *, near: str = "raise") -> np.ndarray:
    """``S phi`` at off-curve targets, or its on-curve trace when ``targets`` is None."""
    phi = _values(density, curve)
    if targets is None:
        return single_layer_trace_matrix(curve).matrix @ phi
    targets = _check_targets(curve, targets, near)
    return kernels.single_layer_matrix(targets, curve.nodes, curve.weights) @ phi


def single_layer_gradient(curve: BoundaryCurve, density, targets, *, near: str = "raise") -> np.ndarray:
    phi = _values(density, curve)
    targets = _check_targets(curve, targets, near)
    gx, gy = kernels.single_layer_grad_matrices(targets, curve.nodes, curve.weights)
    return np.stack([gx @ phi, gy @ phi], -1)


def double_layer(curve: BoundaryCurve, density, targets=None, *, near: str = "raise") -> np.ndarray:
    """``D phi`` at off-curve targets, or the direct on-curve value ``K phi``."""
    phi = _values(density, curve)
    if targets is None:
        return k_matrix(curve).matrix @ phi
    targets = _check_targets(curve, targets, near)
    return kernels.double_layer_matrix(targets, curve.nodes, curve.normals, curve.weights) @ phi


def kstar_matrix(curve: BoundaryCurve) -> OperatorMatrix:
    """Nystrom matrix of ``K*`` with diagonal ``kappa / (4 pi)``."""
    a = kernels.kstar_matrix(curve.nodes, curve.normals, curve.curvature, curve.weights)
    return OperatorMatrix(curve, a, "K*")


def k_matrix(curve: BoundaryCurve, kstar: OperatorMatrix | None = None) -> OperatorMatrix:
    """Nystrom matrix of ``K``, the weighted transpose of ``K*``."""
    ks = kstar.matrix if kstar is not None else kstar_matrix(curve).matrix
    w = curve.weights
    return OperatorMatrix(curve, ks.T * w[None, :] / w[:, None], "K")


def kress_log_weights(M: int) -> np.ndarray:
    """Weights ``R[i, j]`` with ``\\int ln(4 sin^2((t_i - s)/2)) psi(s) ds ~ sum_j R[i, j] psi(t_j)``."""
    n = M // 2
    t = 2 * np.pi * np.arange(M) / M
    m = np.arange(1, n)
    # circulant: depends on (i - j) mod M only
    r = -(2 * np.pi / n) * np.cos(np.outer(t, m)) @ (1.0 / m) - (np.pi / n**2) * np.cos(n * t)
    idx = (np.arange(M)[:, None] - np.arange(M)[None, :]) % M
    return r[idx]


def single_layer_trace_matrix(curve: BoundaryCurve) -> OperatorMatrix:
    """On-curve single layer with Kress product quadrature for the log singularity."""
    M = curve.size
    x = curve.nodes
    d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)
    t = curve.t
    s2 = 4 * np.sin((t[:, None] - t[None, :]) / 2) ** 2
    np.fill_diagonal(d2, 1.0)
    np.fill_diagonal(s2, 1.0)
    smooth = 0.5 * np.log(d2 / s2)
    np.fill_diagonal(smooth, np.log(curve.speeds))
    a = (0.5 * kress_log_weights(M) + (2 * np.pi / M) * smooth) * curve.speeds[None, :] / (2 * np.pi)
    return OperatorMatrix(curve, a, "S-trace")


# --- jump relations -------------------------------------------------------


def fourier_resample(values: np.ndarray, M_new: int) -> np.ndarray:
    """Band-limited periodic interpolation of equispaced samples onto ``M_new`` points."""
    v = np.asarray(values)
    M = v.shape[-1]
    if M_new == M:
        return v.copy()
    if M_new < M:
        raise InvalidArgumentError("fourier_resample only upsamples")
    c = np.fft.fft(v)
    out = np.zeros(v.shape[:-1] + (M_new,), dtype=complex)
    h = M // 2
    out[..., :h] = c[..., :h]
    out[..., M_new - h + 1:] = c[..., h + 1:]
    out[..., h] = 0.5 * c[..., h]
    out[..., M_new - h] = 0.5 * c[..., h]
    res = np.fft.ifft(out) * (M_new / M)
    return res.real if np.isrealobj(v) else res


def spectral_derivative(values: np.ndarray, order: int = 1) -> np.ndarray:
    """``d^order/dt^order`` of equispaced periodic samples on ``[0, 2 pi)``."""
    v = np.asarray(values)
    M = v.shape[-1]
    k = np.fft.fftfreq(M, 1.0 / M)
    if M % 2 == 0:
        k[M // 2] = 0.0
    res = np.fft.ifft((1j * k) ** order * np.fft.fft(v))
    return res.real if np.isrealobj(v) else res


def _near_normal_derivative(curve: BoundaryCurve, phi: np.ndarray, offsets, refine: int = 4) -> np.ndarray:
    """``nu . grad S phi`` at ``x_m + s nu_m`` for every node ``m`` and signed offset ``s``.

    The gradient of the single layer is ``-i C[phi / tau]`` with ``C`` the
    Cauchy integral. A quadratic Taylor polynomial of the integrand at the
    base node is subtracted and integrated exactly, which keeps the
    trapezoid rule accurate at distances far below the mesh width.
    """
    M = curve.size
    Mf = refine * M
    fine = discretize(curve.shape, Mf)
    if not np.allclose(fine.nodes[::refine], curve.nodes, rtol=0, atol=1e-12):
        raise InvalidArgumentError("near-field evaluation needs the plain discretization of curve.shape")
    y = _as_complex(fine.nodes)
    yt = _as_complex(fine.tangent)
    ytt = _as_complex(fine.second)
    tau = yt / np.abs(yt)
    f = fourier_resample(phi, Mf) / tau
    ft = spectral_derivative(f, 1)
    ftt = spectral_derivative(f, 2)

    base = np.arange(M) * refine
    x0 = y[base]
    f0, f1 = f[base], ft[base] / yt[base]
    f2 = 0.5 * (ftt[base] * yt[base] - ft[base] * ytt[base]) / yt[base] ** 3
    n0 = curve.normals[:, 0] + 1j * curve.normals[:, 1]

    offsets = np.asarray(offsets, dtype=float)
    x = x0[:, None] + offsets[None, :] * n0[:, None]  # (M, S)
    dy = y[None, :] - x0[:, None]  # (M, Mf)
    p_at_y = f0[:, None] + f1[:, None] * dy + f2[:, None] * dy**2
    rem = (f[None, :] - p_at_y) * yt[None, :] * (2 * np.pi / Mf)  # (M, Mf)
    cauchy = np.einsum("mj,msj->ms", rem, 1.0 / (y[None, None, :] - x[:, :, None])) / (2j * np.pi)
    inside = offsets < 0
    dx = x - x0[:, None]
    cauchy += np.where(inside[None, :], f0[:, None] + f1[:, None] * dx + f2[:, None] * dx**2, 0.0)
    grad = -1j * cauchy
    return np.real(grad * n0[:, None])


# Lagrange weights extrapolating samples at t = 1..5 to t = 0
_EXTRAP5 = np.array([5.0, -10.0, 10.0, -5.0, 1.0])


@dataclass(frozen=True)
class JumpResiduals:
    exterior: float
    interior: float
    jump: float

    @property
    def max(self) -> float:
        return max(self.exterior, self.interior, self.jump)


def jump_check(curve: BoundaryCurve, density, h_eps: float = 1e-4) -> JumpResiduals:
    """Compare one-sided normal derivatives of ``S phi`` with ``(+/- 1/2 + K*) phi``.

    The one-sided limits are extrapolated (quartic) from offsets
    ``h_eps, ..., 5 h_eps`` on each side of every node.
    """
    phi = _values(density, curve)
    if not np.any(phi):
        return JumpResiduals(0.0, 0.0, 0.0)
    steps = float(h_eps) * np.arange(1, 6)
    vals = _near_normal_derivative(curve, phi, np.concatenate([steps, -steps]))
    ext = vals[:, :5] @ _EXTRAP5
    intr = vals[:, 5:] @ _EXTRAP5
    kphi = kstar_matrix(curve).matrix @ phi
    return JumpResiduals(
        exterior=float(np.abs(ext - (0.5 * phi + kphi)).max()),
        interior=float(np.abs(intr - (-0.5 * phi + kphi)).max()),
        jump=float(np.abs((ext - intr) - phi).max()),
    )
