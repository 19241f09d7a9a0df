"""High-order boundary expansions for a small inclusion ``D = z + eps B`` in a disk.

Neumann data ``g`` (two dimensions)::

    u(x) ~ U(x) - sum_{i,j} eps^{|i|+|j|} / j! (d^i H)(z) M_ij d_z^j N(x, z)

Dirichlet data ``f``::

    du/dnu(x) ~ dV/dnu(x) + sum_{i,j} eps^{|i|+|j|} / j! (d^i H)(z) M_ij d_z^j P(x, z)

with ``P`` the Poisson kernel of the disk, and in free space::

    u(x) ~ H(x) + sum_{i,j} eps^{|i|+|j|} / j! (d^i H)(z) M_ij (-1)^{|j|} (d^j Gamma)(x - z).

The sums run over ``1 <= |i| <= n`` and ``1 <= |j| <= n - |i| + 1``. The
derivatives of the harmonic part ``H`` are recovered from those of the
background potential by the correction ladder

    d^l H(z) + sum_{i,j} eps^{|i|+|j|} (d^i H)(z) P_ijl = d^l U(z),

inverted as a formal power series in ``eps``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .domain_functions import (
    DiskDomain,
    background_U,
    background_V,
    green_function,
    neumann_function,
)
from .errors import DomainError, InvalidArgumentError
from .geometry import ShapeSpec
from .inclusion import InclusionSpec, validate_inclusions
from .layer_potentials import gamma_partial
from .multiindex import MultiIndex, gpt_pairs, mfact, up_to
from .results import BoundaryResult
from .transmission import N_MAX_GPT, GptTable, gpt_table, resolvent_parameter
from .forward_oracle import _derivative_kernel_D, _derivative_kernel_S

__all__ = [
    "InclusionSpec",
    "CorrectionLadder",
    "ExpansionResult",
    "inclusion_gpt",
    "expansion_with_H",
    "correction_ladder",
    "expand_neumann",
    "expand_dirichlet",
    "expand_free_space",
    "superpose_multi",
    "term_hierarchy_ok",
]

_KINDS = ("neumann", "dirichlet")


def term_name(i: MultiIndex, j: MultiIndex) -> str:
    return f"t_{i[0]}{i[1]}_{j[0]}{j[1]}"


@dataclass
class ExpansionResult(BoundaryResult):
    """Boundary expansion with its truncation order and the per-(i, j) contributions."""

    order: int = 1


# --- GPT tables ---------------------------------------------------------------


@lru_cache(maxsize=64)
def _cached_gpt(shape: ShapeSpec, nodes: int, k: float, n: int) -> GptTable:
    from .geometry import discretize

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return gpt_table(discretize(shape, nodes), resolvent_parameter(k), n, k=k)


def inclusion_gpt(inclusion: InclusionSpec, n: int) -> GptTable:
    """GPT table of the reference shape ``B``; all zeros when ``k = 1``."""
    if not 1 <= n <= N_MAX_GPT:
        raise InvalidArgumentError(f"expansion order must satisfy 1 <= n <= {N_MAX_GPT}, got {n}")
    if inclusion.k == 1:
        entries = {pair: 0.0 for pair in gpt_pairs(n)}
        return GptTable(n, inclusion.shape.name, 1.0, math.inf, entries, {})
    return _cached_gpt(inclusion.shape, inclusion.nodes, float(inclusion.k), n)


def _table_for(inclusion: InclusionSpec, n: int, gpt: GptTable | None) -> GptTable:
    if gpt is None:
        return inclusion_gpt(inclusion, n)
    if gpt.order < n:
        raise InvalidArgumentError(f"GPT table has order {gpt.order} < requested expansion order {n}")
    return gpt


# --- correction ladder -------------------------------------------------------


@dataclass
class CorrectionLadder:
    """Tensors ``P_ijl`` and the series coefficients ``Q_p`` for one inclusion.

    ``Q[p]`` multiplies ``eps^(p + 1)``; ``Q[0]`` is the identity.
    Vectors are indexed by ``index`` (all ``1 <= |l| <= n``).
    """

    order: int
    kind: str
    index: list[MultiIndex]
    P: dict[tuple[MultiIndex, MultiIndex, MultiIndex], float]
    Q: list[np.ndarray]

    def vector(self, derivs: dict[MultiIndex, float]) -> np.ndarray:
        return np.array([derivs[l] for l in self.index], dtype=float)

    def apply(self, derivs, eps: float, p_max: int | None = None) -> np.ndarray:
        """``(I + sum_{p=1}^{p_max} eps^(p+1) Q_p) v``; ``p_max`` defaults to ``n - 1``."""
        v = self.vector(derivs) if isinstance(derivs, dict) else np.asarray(derivs, dtype=float)
        p_max = self.order - 1 if p_max is None else min(p_max, self.order - 1)
        out = v.copy()
        for p in range(1, p_max + 1):
            out = out + eps ** (p + 1) * (self.Q[p] @ v)
        return out

    def apply_dict(self, derivs, eps: float, p_max: int | None = None) -> dict[MultiIndex, float]:
        return dict(zip(self.index, self.apply(derivs, eps, p_max)))

    def forward(self, h: dict[MultiIndex, float], eps: float) -> dict[MultiIndex, float]:
        """``d^l U(z)`` predicted from ``d^i H(z)`` by the un-inverted relation."""
        out = dict(h)
        for (i, j, l), val in self.P.items():
            out[l] += eps ** (sum(i) + sum(j)) * h[i] * val
        return out


def _boundary_kernel(domain: DiskDomain, kind: str, z: np.ndarray, j: MultiIndex) -> np.ndarray:
    x = domain.curve.nodes
    if kind == "neumann":
        return neumann_function(domain, x, z, j)
    return green_function(domain, x, z, j)


def ladder_tensors(domain: DiskDomain, z, n: int, kind: str) -> dict[tuple[MultiIndex, MultiIndex], float]:
    """``T_jl = d^l_x L(d_z^j K(., z))(x)|_{x=z}`` without the GPT factor.

    ``L`` is the double layer potential and ``K`` the Neumann function for
    ``kind="neumann"``; ``L`` is the single layer potential and ``K`` the
    Poisson kernel for ``kind="dirichlet"``.
    """
    if kind not in _KINDS:
        raise InvalidArgumentError(f"kind must be one of {_KINDS}")
    z = np.asarray(z, dtype=float)
    c = domain.curve
    rows = {
        l: (_derivative_kernel_D(z, c, l) if kind == "neumann" else _derivative_kernel_S(z, c, l)) for l in up_to(n, 1)
    }
    T = {}
    for j in up_to(n, 1):
        kern = _boundary_kernel(domain, kind, z, j)
        for l, row in rows.items():
            T[(j, l)] = float(row @ kern)
    return T


def correction_ladder(
    inclusion: InclusionSpec, domain: DiskDomain, n: int, kind: str = "neumann", gpt: GptTable | None = None
) -> CorrectionLadder:
    table = _table_for(inclusion, n, gpt)
    T = ladder_tensors(domain, inclusion.z, n, kind)
    index = up_to(n, 1)
    pos = {l: a for a, l in enumerate(index)}
    P = {}
    size = len(index)
    # A[m] collects P_ijl with |i| + |j| = m: (A[m] h)_l = sum_i A[m][l, i] h_i
    A = [np.zeros((size, size)) for _ in range(n + 2)]
    for i, j in gpt_pairs(n):
        for l in index:
            val = table.get(i, j) * T[(j, l)] / mfact(j)
            P[(i, j, l)] = val
            A[sum(i) + sum(j)][pos[l], pos[i]] += val
    B = [np.eye(size)]
    for m in range(1, n + 1):
        acc = np.zeros((size, size))
        for kk in range(1, m + 1):
            if kk < len(A):
                acc -= A[kk] @ B[m - kk]
        B.append(acc)
    Q = [np.eye(size)] + [B[p + 1] for p in range(1, n)]
    return CorrectionLadder(n, kind, index, P, Q)


# --- assembly ------------------------------------------------------------------


def _check_order(n: int) -> int:
    if int(n) != n or not 1 <= n <= N_MAX_GPT:
        raise InvalidArgumentError(f"expansion order must satisfy 1 <= n <= {N_MAX_GPT}, got {n}")
    return int(n)


def _assemble(
    inclusion: InclusionSpec,
    domain: DiskDomain,
    kind: str,
    reference: np.ndarray,
    h_of_term,
    n: int,
    table: GptTable,
) -> ExpansionResult:
    eps = inclusion.eps
    z = inclusion.z
    c = domain.curve
    sign = -1.0 if kind == "neumann" else 1.0
    kern = {j: _boundary_kernel(domain, kind, z, j) for j in up_to(n, 1)}
    terms: dict[str, np.ndarray] = {}
    total = reference.copy()
    for i, j in gpt_pairs(n):
        coef = sign * eps ** (sum(i) + sum(j)) / mfact(j) * h_of_term(i, j) * table.get(i, j)
        term = coef * kern[j]
        if kind == "neumann":
            term = term - c.mean(term)
        terms[term_name(i, j)] = term
        total = total + term
    meta = {
        "kind": kind,
        "order": n,
        "eps": eps,
        "k": inclusion.k,
        "center": list(inclusion.center),
        "shape": inclusion.shape.to_dict(),
        "radius": domain.radius,
        "domain_nodes": c.size,
        "inclusion_nodes": inclusion.nodes,
    }
    return ExpansionResult(
        c.nodes.copy(), total, reference.copy(), "trace" if kind == "neumann" else "flux", terms, meta, order=n
    )


def expansion_with_H(
    inclusion: InclusionSpec,
    domain: DiskDomain,
    g,
    h_derivatives: dict[MultiIndex, float],
    n: int,
    gpt: GptTable | None = None,
) -> ExpansionResult:
    """Neumann boundary expansion with externally supplied ``(d^i H)(z)``."""
    n = _check_order(n)
    validate_inclusions(domain, [inclusion])
    table = _table_for(inclusion, n, gpt)
    U = background_U(domain, g)
    missing = [i for i in up_to(n, 1) if i not in h_derivatives]
    if missing:
        raise InvalidArgumentError(f"missing H derivatives for {missing}")
    return _assemble(inclusion, domain, "neumann", U.trace(), lambda i, j: h_derivatives[i], n, table)


def _expand(inclusion, domain, potential, kind: str, n: int, gpt) -> ExpansionResult:
    n = _check_order(n)
    validate_inclusions(domain, [inclusion])
    table = _table_for(inclusion, n, gpt)
    ladder = correction_ladder(inclusion, domain, n, kind, gpt=table)
    derivs = potential.derivative_vector(inclusion.z, n)
    pos = {l: a for a, l in enumerate(ladder.index)}
    cache: dict[int, np.ndarray] = {}

    def h_of_term(i, j):
        p_max = max(0, n - sum(i) - sum(j))
        if p_max not in cache:
            cache[p_max] = ladder.apply(derivs, inclusion.eps, p_max)
        return cache[p_max][pos[i]]

    reference = potential.trace() if kind == "neumann" else potential.normal_derivative()
    return _assemble(inclusion, domain, kind, reference, h_of_term, n, table)


def expand_neumann(
    inclusion: InclusionSpec, domain: DiskDomain, g, n: int, gpt: GptTable | None = None
) -> ExpansionResult:
    """Boundary trace of the potential with flux ``g``, to order ``eps^(n+2)``."""
    return _expand(inclusion, domain, background_U(domain, g), "neumann", n, gpt)


def expand_dirichlet(
    inclusion: InclusionSpec, domain: DiskDomain, f, n: int, gpt: GptTable | None = None
) -> ExpansionResult:
    """Boundary flux of the potential with trace ``f``, to order ``eps^(n+2)``."""
    return _expand(inclusion, domain, background_V(domain, f), "dirichlet", n, gpt)


def expand_free_space(
    inclusion: InclusionSpec,
    domain: DiskDomain,
    H,
    points,
    n: int,
    *,
    gpt: GptTable | None = None,
    margin: float | None = None,
) -> np.ndarray:
    """Interior values ``H(x) + sum eps^{|i|+|j|}/j! d^iH(z) M_ij (-1)^|j| d^jGamma(x - z)``.

    ``H`` must provide ``harmonic_part(points)`` and ``harmonic_partial(z, j)``
    (as :class:`~gptasym.forward_oracle.OracleSolution` does). Points closer
    than ``margin`` (default ``c0``) to the inclusion center's
    ``eps``-neighbourhood or to the outer boundary are rejected.
    """
    n = _check_order(n)
    validate_inclusions(domain, [inclusion])
    table = _table_for(inclusion, n, gpt)
    x = np.atleast_2d(np.asarray(points, dtype=float))
    margin = domain.c0 if margin is None else margin
    r = np.hypot(x[:, 0], x[:, 1])
    reach = inclusion.eps * float(np.hypot(*inclusion.reference_curve.nodes.T).max())
    dz = np.hypot(x[:, 0] - inclusion.z[0], x[:, 1] - inclusion.z[1])
    if np.any(r > domain.radius - margin) or np.any(dz < reach + margin):
        raise DomainError("evaluation points must stay at least c0 away from the inclusion and the outer boundary")
    eps = inclusion.eps
    hd = {i: H.harmonic_partial(inclusion.z, i) for i in up_to(n, 1)}
    u = np.asarray(H.harmonic_part(x), dtype=float).copy()
    d = x - inclusion.z
    for i, j in gpt_pairs(n):
        coef = eps ** (sum(i) + sum(j)) / mfact(j) * hd[i] * table.get(i, j) * (-1) ** sum(j)
        u = u + coef * gamma_partial(d, j)
    return u


def superpose_multi(inclusions, domain: DiskDomain, g, n: int = 1) -> ExpansionResult:
    """Sum of the per-inclusion corrections around the shared background ``U``.

    Interactions between inclusions are neglected, so this is accurate to
    ``O(eps^3)`` only.
    """
    inclusions = list(inclusions)
    for a, b in combinations(inclusions, 2):
        if np.hypot(*(a.z - b.z)) < 2 * domain.c0:
            raise InvalidArgumentError(f"inclusion centers {a.center} and {b.center} closer than 2 c0")
    validate_inclusions(domain, inclusions)
    U = background_U(domain, g)
    ref = U.trace()
    total = ref.copy()
    terms = {}
    for idx, inc in enumerate(inclusions):
        res = expand_neumann(inc, domain, U.g, n)
        terms[f"inclusion_{idx}"] = res.correction
        total = total + res.correction
    meta = {
        "kind": "neumann",
        "order": n,
        "inclusions": [
            {"center": list(inc.center), "eps": inc.eps, "k": inc.k, "shape": inc.shape.to_dict()} for inc in inclusions
        ],
        "radius": domain.radius,
        "domain_nodes": domain.curve.size,
    }
    return ExpansionResult(domain.curve.nodes.copy(), total, ref, "trace", terms, meta, order=n)


def term_hierarchy_ok(result: ExpansionResult) -> bool:
    """Whether the largest term of each total order ``|i| + |j|`` does not grow with the order.

    Emits a warning (not an error) when the ordering is violated, since shape
    constants can reorder neighbouring terms.
    """
    by_order: dict[int, float] = {}
    for name, term in result.terms.items():
        i1, i2, j1, j2 = (int(ch) for ch in name[2:4] + name[5:7])
        m = i1 + i2 + j1 + j2
        by_order[m] = max(by_order.get(m, 0.0), float(np.abs(term).max()))
    # orders that vanish identically (parity) carry no ordering information
    top = max(by_order.values(), default=0.0)
    orders = sorted(m for m, v in by_order.items() if v > 1e-12 * top)
    ok = all(by_order[a] >= by_order[b] for a, b in zip(orders, orders[1:]))
    if not ok:
        warnings.warn(f"expansion terms not decreasing with order: {by_order}", stacklevel=2)
    return ok
