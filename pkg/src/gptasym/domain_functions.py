"""Closed-form Neumann and Dirichlet functions of a disk and background potentials.

For the disk ``|x| < R`` the Neumann function with ``Delta_x N = -delta_z``,
flux ``-1/(2 pi R)`` and zero boundary mean is

    N(x, z) = -(1/2pi) (ln|x - z| + ln|R^2 - conj(x) z|) + (3/2pi) ln R,

which is the real part of a holomorphic function of ``z``. The normal
derivative of the Dirichlet Green function is the Poisson kernel
``Re((x + z)/(x - z)) / (2 pi R)``, also holomorphic in ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import DomainError, IncompatibleDataError, InvalidArgumentError
from .geometry import BoundaryCurve, ShapeSpec, discretize
from .layer_potentials import N_MAX_DERIV, gamma_partial
from .multiindex import MultiIndex, check, holomorphic_partial, mfact, up_to


def _cplx(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0] + 1j * x[..., 1]


@dataclass(frozen=True, eq=False)
class DiskDomain:
    radius: float = 1.0
    nodes: int = 256
    c0: float = 0.05
    curve: BoundaryCurve = field(init=False, repr=False)

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidArgumentError("domain radius must be positive")
        if not self.c0 > 0:
            raise InvalidArgumentError("separation constant c0 must be positive")
        object.__setattr__(self, "curve", discretize(ShapeSpec("disk", radius=self.radius), self.nodes))

    @property
    def boundary_length(self) -> float:
        return 2 * np.pi * self.radius

    def theta(self) -> np.ndarray:
        return self.curve.t

    def check_center(self, z) -> np.ndarray:
        """Enforce ``dist(z, boundary) >= 2 c0``."""
        z = np.asarray(z, dtype=float)
        r = np.hypot(z[..., 0], z[..., 1])
        if np.any(self.radius - r < 2 * self.c0 - 1e-15):
            raise DomainError(f"point(s) closer than 2 c0 = {2 * self.c0:g} to the boundary")
        return z

    def check_interior(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        r = np.hypot(z[..., 0], z[..., 1])
        if np.any(r >= self.radius - self.c0):
            raise DomainError(f"point(s) outside the safe region |z| < R - c0 = {self.radius - self.c0:g}")
        return z


def _check_order(j: MultiIndex, n_max: int) -> MultiIndex:
    j = check(j)
    if sum(j) > n_max:
        raise InvalidArgumentError(f"derivative order {sum(j)} exceeds cap {n_max}")
    return j


# --- Neumann function -----------------------------------------------------


def neumann_function(domain: DiskDomain, x, z, j: MultiIndex = (0, 0), *, n_max: int = N_MAX_DERIV) -> np.ndarray:
    """``d_z^j N(x, z)``; ``x`` and ``z`` broadcast as ``(..., 2)`` arrays."""
    j = _check_order(j, n_max)
    domain.check_interior(z)
    R = domain.radius
    xc, zc = _cplx(x), _cplx(z)
    k = j[0] + j[1]
    if k == 0:
        if np.any(xc == zc):
            raise DomainError("Neumann function evaluated at its pole x = z")
        return -(np.log(np.abs(xc - zc)) + np.log(np.abs(R * R - np.conj(xc) * zc))) / (2 * np.pi) + 3 * np.log(R) / (
            2 * np.pi
        )
    xb = np.conj(xc)
    deriv = factorial(k - 1) * (1.0 / (xc - zc) ** k + xb**k / (R * R - xb * zc) ** k)
    return holomorphic_partial(deriv, j) / (2 * np.pi)


def neumann_normal_derivative(domain: DiskDomain, x, z) -> np.ndarray:
    """``dN/dnu_x`` at boundary points ``x`` (analytic gradient in ``x``)."""
    R = domain.radius
    xc, zc = _cplx(x), _cplx(z)
    # grad_x of -(1/2pi)(ln|x - z| + ln|R^2 - x conj(z)|) in complex form
    g = -(1.0 / np.conj(xc - zc) + (-zc) / np.conj(R * R - xc * np.conj(zc))) / (2 * np.pi)
    nu = xc / np.abs(xc)
    return np.real(np.conj(g) * nu)


def taylor_neumann(domain: DiskDomain, x, z, y, eps: float, p: int) -> np.ndarray:
    """``sum_{|j| <= p} eps^|j| / j! d_z^j N(x, z) y^j``."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    xr = np.hypot(x[..., 0] - z[0], x[..., 1] - z[1]).min() if x.ndim > 1 else np.hypot(*(x - z))
    dist = min(float(xr), domain.radius - float(np.hypot(*z)))
    if eps * float(np.hypot(*y)) >= dist:
        raise DomainError("eps |y| exceeds the convergence radius dist(z, boundary)")
    total = np.zeros(np.broadcast(x[..., 0], np.asarray(z)[..., 0]).shape)
    for j in up_to(p):
        total = total + eps ** sum(j) / mfact(j) * neumann_function(domain, x, z, j) * y[0] ** j[0] * y[1] ** j[1]
    return total


# --- Dirichlet Green function ---------------------------------------------


def green_function(domain: DiskDomain, x, z, j: MultiIndex = (0, 0), *, n_max: int = N_MAX_DERIV) -> np.ndarray:
    """``d_z^j dG/dnu_x (x, z)``: z-derivatives of the Poisson kernel at boundary points ``x``."""
    j = _check_order(j, n_max)
    domain.check_interior(z)
    R = domain.radius
    xc, zc = _cplx(x), _cplx(z)
    k = j[0] + j[1]
    if k == 0:
        deriv = (xc + zc) / (xc - zc)
    else:
        deriv = 2 * xc * factorial(k) / (xc - zc) ** (k + 1)
    return holomorphic_partial(deriv, j) / (2 * np.pi * R)


def green_value(domain: DiskDomain, x, z) -> np.ndarray:
    """``G(x, z)`` with ``Delta G = delta_z`` and ``G = 0`` on the boundary."""
    R = domain.radius
    xc, zc = _cplx(x), _cplx(z)
    return (np.log(np.abs(xc - zc)) - np.log(np.abs(R * R - xc * np.conj(zc))) + np.log(R)) / (2 * np.pi)


# --- background potentials -------------------------------------------------


def _nodal(domain: DiskDomain, data) -> np.ndarray:
    if callable(data):
        data = data(domain.theta())
    v = np.asarray(getattr(data, "values", data), dtype=float)
    if v.shape != (domain.curve.size,):
        raise InvalidArgumentError(f"boundary data must have {domain.curve.size} nodal values")
    return v


def _fourier_multiplier(values: np.ndarray, mult) -> np.ndarray:
    c = np.fft.rfft(values)
    m = np.arange(c.size, dtype=float)
    return np.fft.irfft(c * mult(m), n=values.size)


class _BoundaryPotential:
    """Harmonic function in the disk known through boundary data."""

    domain: DiskDomain

    def partial(self, z, j: MultiIndex) -> np.ndarray:
        raise NotImplementedError

    def derivative_vector(self, z, n: int) -> dict[MultiIndex, float]:
        """``{l: d^l u(z)}`` for ``1 <= |l| <= n``."""
        z = np.asarray(z, dtype=float)
        return {l: float(self.partial(z, l)) for l in up_to(n, 1)}

    def value(self, points) -> np.ndarray:
        return self.partial(points, (0, 0))


class BackgroundU(_BoundaryPotential):
    """``U(y) = \\oint N(x, y) g(x) d sigma(x)``: flux ``g``, zero boundary mean."""

    def __init__(self, domain: DiskDomain, g):
        self.domain = domain
        self.g = _nodal(domain, g)
        scale = max(1.0, float(np.abs(self.g).max()))
        if abs(domain.curve.mean(self.g)) > 1e-12 * scale:
            raise IncompatibleDataError("Neumann data g must have zero mean")

    def trace(self) -> np.ndarray:
        R = self.domain.radius
        return _fourier_multiplier(self.g, lambda m: np.where(m > 0, R / np.maximum(m, 1), 0.0))

    def normal_derivative(self) -> np.ndarray:
        return self.g.copy()

    def partial(self, z, j: MultiIndex) -> np.ndarray:
        c = self.domain.curve
        z = np.asarray(z, dtype=float)
        ker = neumann_function(self.domain, c.nodes, z[..., None, :], j)
        return ker @ (c.weights * self.g)


class BackgroundV(_BoundaryPotential):
    """Harmonic ``V`` with ``V = f`` on the boundary (Poisson integral)."""

    def __init__(self, domain: DiskDomain, f):
        self.domain = domain
        self.f = _nodal(domain, f)

    def trace(self) -> np.ndarray:
        return self.f.copy()

    def normal_derivative(self) -> np.ndarray:
        R = self.domain.radius
        return _fourier_multiplier(self.f, lambda m: m / R)

    def partial(self, z, j: MultiIndex) -> np.ndarray:
        c = self.domain.curve
        z = np.asarray(z, dtype=float)
        ker = green_function(self.domain, c.nodes, z[..., None, :], j)
        return ker @ (c.weights * self.f)


def background_U(domain: DiskDomain, g) -> BackgroundU:
    return BackgroundU(domain, g)


def background_V(domain: DiskDomain, f) -> BackgroundV:
    return BackgroundV(domain, f)


def fourier_data(domain: DiskDomain, modes) -> np.ndarray:
    """Boundary data ``sum_m (a_m cos m theta + b_m sin m theta)`` at the domain nodes.

    ``modes`` is an iterable of ``(m, a_m, b_m)`` triples.
    """
    th = domain.theta()
    out = np.zeros_like(th)
    for m, a, b in modes:
        out += a * np.cos(m * th) + b * np.sin(m * th)
    return out


def fundamental_derivatives_at(z, y, j: MultiIndex) -> np.ndarray:
    """``(d^j Gamma)(z - y)`` for boundary points ``y`` (kernel of ladder integrals)."""
    return gamma_partial(np.asarray(z)[None, :] - np.asarray(y), j)
