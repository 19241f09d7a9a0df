"""Full-accuracy transmission solver used as ground truth for the expansions.

The conductivity problem ``div((1 + (k - 1) chi_D) grad u) = 0`` in the disk
is solved through the representation ``u = H + sum_l S_{D_l} phi_l`` with
``H = -S_Omega(du/dnu) + D_Omega(u)``. One dense block system couples the
unknown boundary quantity on the outer circle with the densities on every
inclusion:

Neumann data ``g`` (unknown trace ``f``)::

    f + sum_l N_{D_l} phi_l                                   = U
    (lambda_l - K*_l) phi_l - d_nu D_Omega f - sum_{l' != l} d_nu S_{l'} phi_l' = -d_nu S_Omega g

Dirichlet data ``f`` (unknown flux ``q``)::

    q - sum_l P_{D_l} phi_l                                   = dV/dnu
    (lambda_l - K*_l) phi_l + d_nu S_Omega q - sum_{l' != l} d_nu S_{l'} phi_l' = d_nu D_Omega f

where ``N_D phi(x) = \\oint N(x, y) phi(y)`` and ``P_D phi(x) = \\oint P(x, y) phi(y)``
with ``P`` the Poisson kernel. At ``|lambda_l| = 1/2`` the block of inclusion
``l`` is bordered with the constraint ``\\oint phi_l = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import kernels
from .domain_functions import DiskDomain, background_U, background_V, green_function, neumann_function
from .errors import DegenerateContrastError, InvalidArgumentError
from .inclusion import InclusionSpec, validate_inclusions
from .layer_potentials import gamma_partial, kstar_matrix
from .multiindex import MultiIndex, check
from .results import BoundaryResult
from .transmission import is_extreme


def _derivative_kernel_S(x: np.ndarray, curve, j: MultiIndex) -> np.ndarray:
    """Rows ``d_x^j Gamma(x - y_q) w_q`` for a single point ``x``."""
    return gamma_partial(x[None, :] - curve.nodes, j, n_max=12) * curve.weights


def _derivative_kernel_D(x: np.ndarray, curve, j: MultiIndex) -> np.ndarray:
    """Rows ``d_x^j [d/dnu_y Gamma(x - y_q)] w_q`` for a single point ``x``."""
    d = x[None, :] - curve.nodes
    out = -curve.normals[:, 0] * gamma_partial(d, (j[0] + 1, j[1]), n_max=12)
    out -= curve.normals[:, 1] * gamma_partial(d, (j[0], j[1] + 1), n_max=12)
    return out * curve.weights


@dataclass
class OracleSolution:
    """Solved transmission problem: boundary trace, flux and inclusion densities."""

    domain: DiskDomain
    inclusions: list[InclusionSpec]
    kind: str
    trace: np.ndarray
    flux: np.ndarray
    densities: list[np.ndarray]
    reference: np.ndarray
    multipliers: list[float] = field(default_factory=list)

    # -- interior representation ----------------------------------------

    def harmonic_part(self, points) -> np.ndarray:
        """``H(x) = -S_Omega(flux)(x) + D_Omega(trace)(x)`` at interior points."""
        c = self.domain.curve
        x = np.atleast_2d(np.asarray(points, dtype=float))
        s = kernels.single_layer_matrix(x, c.nodes, c.weights) @ self.flux
        d = kernels.double_layer_matrix(x, c.nodes, c.normals, c.weights) @ self.trace
        return -s + d

    def harmonic_partial(self, z, j: MultiIndex) -> float:
        """``d^j H(z)`` by differentiating the kernels under the integral."""
        j = check(j)
        c = self.domain.curve
        z = np.asarray(z, dtype=float)
        if sum(j) == 0:
            return float(self.harmonic_part(z[None, :])[0])
        return float(-_derivative_kernel_S(z, c, j) @ self.flux + _derivative_kernel_D(z, c, j) @ self.trace)

    def harmonic_derivatives(self, z, n: int) -> dict[MultiIndex, float]:
        from .multiindex import up_to

        return {l: self.harmonic_partial(z, l) for l in up_to(n, 1)}

    def interior(self, points) -> np.ndarray:
        """``u(x) = H(x) + sum_l S_{D_l} phi_l(x)`` (plain trapezoid, keep points off the curves)."""
        x = np.atleast_2d(np.asarray(points, dtype=float))
        u = self.harmonic_part(x)
        for inc, phi in zip(self.inclusions, self.densities):
            c = inc.curve
            u = u + kernels.single_layer_matrix(x, c.nodes, c.weights) @ phi
        return u

    def boundary_values(self) -> np.ndarray:
        return self.trace if self.kind == "neumann" else self.flux

    def result(self) -> BoundaryResult:
        values = self.boundary_values()
        meta = {
            "kind": self.kind,
            "radius": self.domain.radius,
            "domain_nodes": self.domain.curve.size,
            "inclusions": [
                {"center": list(inc.center), "eps": inc.eps, "k": inc.k, "shape": inc.shape.to_dict(), "nodes": inc.nodes}
                for inc in self.inclusions
            ],
            "density_integrals": [float(inc.curve.integrate(phi)) for inc, phi in zip(self.inclusions, self.densities)],
        }
        terms = {f"inclusion_{l}": self._inclusion_term(l) for l in range(len(self.inclusions))}
        return BoundaryResult(
            self.domain.curve.nodes.copy(),
            values.copy(),
            self.reference.copy(),
            "trace" if self.kind == "neumann" else "flux",
            terms,
            meta,
        )

    def _inclusion_term(self, l: int) -> np.ndarray:
        c = self.inclusions[l].curve
        x = self.domain.curve.nodes
        if self.kind == "neumann":
            ker = neumann_function(self.domain, x[:, None, :], c.nodes[None, :, :])
            return -(ker * c.weights) @ self.densities[l]
        ker = green_function(self.domain, x[:, None, :], c.nodes[None, :, :])
        return (ker * c.weights) @ self.densities[l]

    def representation_residual(self) -> float:
        """Max deviation from ``trace = U - N_D phi`` (or ``flux = dV/dnu + P_D phi``)."""
        total = self.reference + sum(self._inclusion_term(l) for l in range(len(self.inclusions)))
        return float(np.abs(self.boundary_values() - total).max())

    def density_residual(self) -> float:
        """Re-solve each density equation from the recomputed ``H`` (fixed-point check)."""
        worst = 0.0
        for l, (inc, phi) in enumerate(zip(self.inclusions, self.densities)):
            c = inc.curve
            c_om = self.domain.curve
            dh = -kernels.single_layer_normal_matrix(c.nodes, c.normals, c_om.nodes, c_om.weights) @ self.flux
            dh += kernels.double_layer_normal_matrix(c.nodes, c.normals, c_om.nodes, c_om.normals, c_om.weights) @ self.trace
            for m, (other, psi) in enumerate(zip(self.inclusions, self.densities)):
                if m != l:
                    oc = other.curve
                    dh += kernels.single_layer_normal_matrix(c.nodes, c.normals, oc.nodes, oc.weights) @ psi
            lhs = inc.lam * phi - kstar_matrix(c).matrix @ phi
            if self.multipliers:
                lhs = lhs + self.multipliers[l]
            worst = max(worst, float(np.abs(lhs - dh).max()))
        return worst


def _assemble(domain: DiskDomain, inclusions: list[InclusionSpec], kind: str):
    c_om = domain.curve
    M0 = c_om.size
    sizes = [inc.curve.size for inc in inclusions]
    extreme = [is_extreme(inc.lam) for inc in inclusions]
    n_unknown = M0 + sum(sizes) + sum(extreme)
    A = np.zeros((n_unknown, n_unknown))
    A[:M0, :M0] = np.eye(M0)
    offsets = np.cumsum([M0, *sizes])[:-1]
    border = M0 + sum(sizes)
    for l, inc in enumerate(inclusions):
        c = inc.curve
        o = offsets[l]
        sl = slice(o, o + c.size)
        # outer-boundary row: representation of the boundary quantity
        if kind == "neumann":
            A[:M0, sl] = neumann_function(domain, c_om.nodes[:, None, :], c.nodes[None, :, :]) * c.weights
        else:
            A[:M0, sl] = -green_function(domain, c_om.nodes[:, None, :], c.nodes[None, :, :]) * c.weights
        # density row
        A[sl, sl] = inc.lam * np.eye(c.size) - kstar_matrix(c).matrix
        if kind == "neumann":
            A[sl, :M0] = -kernels.double_layer_normal_matrix(c.nodes, c.normals, c_om.nodes, c_om.normals, c_om.weights)
        else:
            A[sl, :M0] = kernels.single_layer_normal_matrix(c.nodes, c.normals, c_om.nodes, c_om.weights)
        for m, other in enumerate(inclusions):
            if m != l:
                oc = other.curve
                om = offsets[m]
                A[sl, om : om + oc.size] = -kernels.single_layer_normal_matrix(c.nodes, c.normals, oc.nodes, oc.weights)
        if extreme[l]:
            A[sl, border] = 1.0
            A[border, sl] = c.weights
            border += 1
    return A, offsets, extreme


def _check_contrast(inclusions: list[InclusionSpec]) -> None:
    for inc in inclusions:
        if inc.k == 1:
            raise DegenerateContrastError("k = 1 inclusion: the solution is the background potential")


def _solve(domain, inclusions, kind, outer_rhs, density_rhs) -> tuple[np.ndarray, list, list]:
    A, offsets, extreme = _assemble(domain, inclusions, kind)
    b = np.zeros(A.shape[0])
    M0 = domain.curve.size
    b[:M0] = outer_rhs
    for l, inc in enumerate(inclusions):
        b[offsets[l] : offsets[l] + inc.curve.size] = density_rhs[l]
    x = sla.solve(A, b)
    dens = [x[offsets[l] : offsets[l] + inc.curve.size].copy() for l, inc in enumerate(inclusions)]
    mult = []
    border = M0 + sum(inc.curve.size for inc in inclusions)
    for e in extreme:
        mult.append(float(x[border]) if e else 0.0)
        border += int(e)
    return x[:M0].copy(), dens, mult


def solve_neumann(domain: DiskDomain, inclusions, g) -> OracleSolution:
    """Transmission problem with flux ``g`` on the outer circle and zero-mean trace."""
    inclusions = validate_inclusions(domain, inclusions if isinstance(inclusions, (list, tuple)) else [inclusions])
    _check_contrast(inclusions)
    U = background_U(domain, g)
    c_om = domain.curve
    rhs = []
    for inc in inclusions:
        c = inc.curve
        rhs.append(-kernels.single_layer_normal_matrix(c.nodes, c.normals, c_om.nodes, c_om.weights) @ U.g)
    trace, dens, mult = _solve(domain, inclusions, "neumann", U.trace(), rhs)
    return OracleSolution(domain, inclusions, "neumann", trace, U.g.copy(), dens, U.trace(), mult)


def solve_dirichlet(domain: DiskDomain, inclusions, f) -> OracleSolution:
    """Transmission problem with trace ``f`` on the outer circle; returns the flux."""
    inclusions = validate_inclusions(domain, inclusions if isinstance(inclusions, (list, tuple)) else [inclusions])
    _check_contrast(inclusions)
    V = background_V(domain, f)
    c_om = domain.curve
    rhs = []
    for inc in inclusions:
        c = inc.curve
        rhs.append(kernels.double_layer_normal_matrix(c.nodes, c.normals, c_om.nodes, c_om.normals, c_om.weights) @ V.f)
    dvdn = V.normal_derivative()
    flux, dens, mult = _solve(domain, inclusions, "dirichlet", dvdn, rhs)
    return OracleSolution(domain, inclusions, "dirichlet", V.f.copy(), flux, dens, dvdn, mult)


# --- concentric annulus ------------------------------------------------------


@dataclass(frozen=True)
class AnnulusMode:
    """Separated solution for boundary data ``cos(m theta)`` and a concentric disk inclusion.

    ``u = alpha r^m cos(m theta)`` for ``r < rho`` and
    ``u = (beta r^m + gamma r^-m) cos(m theta)`` for ``rho < r < R``.
    """

    R: float
    rho: float
    k: float
    m: int
    data: str
    alpha: float
    beta: float
    gamma: float

    def radial(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        inner = self.alpha * r**self.m
        outer = self.beta * r**self.m + self.gamma * r ** (-self.m)
        return np.where(r < self.rho, inner, outer)

    def value(self, points) -> np.ndarray:
        p = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.hypot(p[:, 0], p[:, 1])
        th = np.arctan2(p[:, 1], p[:, 0])
        return self.radial(r) * np.cos(self.m * th)

    @property
    def boundary_trace_coefficient(self) -> float:
        return self.beta * self.R**self.m + self.gamma * self.R ** (-self.m)

    @property
    def boundary_flux_coefficient(self) -> float:
        m = self.m
        return m * (self.beta * self.R ** (m - 1) - self.gamma * self.R ** (-m - 1))

    @property
    def reflection(self) -> float:
        """``gamma / beta``."""
        return self.gamma / self.beta


def annulus_reference(R: float, rho: float, k: float, m: int, data: str = "neumann") -> AnnulusMode:
    """Closed-form concentric solution for flux (``data="neumann"``) or trace ``cos(m theta)``."""
    if not 0 < rho < R:
        raise InvalidArgumentError("annulus needs 0 < rho < R")
    if m < 1 or int(m) != m:
        raise InvalidArgumentError("mode number must be a positive integer")
    if np.isnan(k) or k < 0:
        raise InvalidArgumentError("conductivity must be in [0, inf]")
    if data not in ("neumann", "dirichlet"):
        raise InvalidArgumentError("data must be 'neumann' or 'dirichlet'")
    m = int(m)
    # interface: alpha rho^m = beta rho^m + gamma rho^-m, k alpha = beta - gamma rho^-2m
    c = rho ** (2 * m) * (-1.0 if np.isinf(k) else (1 - k) / (1 + k))
    if data == "neumann":
        beta = 1.0 / (m * (R ** (m - 1) - c * R ** (-m - 1)))
    else:
        beta = 1.0 / (R**m + c * R ** (-m))
    gamma = c * beta
    alpha = 0.0 if np.isinf(k) else 2 * beta / (1 + k)
    return AnnulusMode(R, rho, k, m, data, alpha, beta, gamma)
