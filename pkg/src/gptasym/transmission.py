"""Neumann-Poincare resolvent solves and (generalized) polarization tensors."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import (
    DegenerateContrastError,
    DiscardedMeanWarning,
    IncompatibleDataError,
    InvalidArgumentError,
    InvertibilityError,
)
from .geometry import BoundaryCurve
from .layer_potentials import Density, OperatorMatrix, kstar_matrix
from .multiindex import MultiIndex, check, gpt_pairs, mfact, monomial, monomial_gradient, up_to

N_MAX_GPT = 4
SCHEMA_VERSION = 1
_HALF_TOL = 1e-14
_MEAN_TOL = 1e-12


def resolvent_parameter(k: float) -> float:
    """``lambda = (k + 1) / (2 (k - 1))`` with ``lambda(inf) = 1/2``."""
    if math.isnan(k) or k < 0:
        raise InvalidArgumentError(f"conductivity must be in [0, inf], got {k}")
    if k == 1:
        raise DegenerateContrastError("conductivity k = 1 gives no inclusion")
    if math.isinf(k):
        return 0.5
    return (k + 1) / (2 * (k - 1))


@dataclass(frozen=True)
class Conductivity:
    k: float

    def __post_init__(self):
        resolvent_parameter(self.k)

    @property
    def lam(self) -> float:
        return resolvent_parameter(self.k)

    @property
    def extreme(self) -> bool:
        return abs(abs(self.lam) - 0.5) < _HALF_TOL


def is_extreme(lam: float) -> bool:
    return abs(abs(lam) - 0.5) < _HALF_TOL


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if abs(lam) < 0.5 - _HALF_TOL:
        raise InvertibilityError(f"|lambda| = {abs(lam):g} < 1/2: lambda I - K* is not invertible")
    return lam


class NPOSolver:
    """Factorized ``lambda I - K*`` on one curve.

    At ``|lambda| = 1/2`` the system is bordered with the weighted mean
    constraint, which selects the unique mean-zero solution.
    """

    def __init__(self, curve: BoundaryCurve, lam: float, kstar: OperatorMatrix | None = None):
        self.curve = curve
        self.lam = _check_lambda(lam)
        self.kstar = kstar if kstar is not None else kstar_matrix(curve)
        self.extreme = is_extreme(self.lam)
        M = curve.size
        a = self.lam * np.eye(M) - self.kstar.matrix
        if self.extreme:
            b = np.zeros((M + 1, M + 1))
            b[:M, :M] = a
            b[:M, M] = 1.0
            b[M, :M] = curve.weights
            a = b
        self._lu = sla.lu_factor(a)
        self._op = self.lam * np.eye(M) - self.kstar.matrix

    def residual(self, phi: np.ndarray, rhs: np.ndarray) -> float:
        return float(np.linalg.norm(self._op @ phi - rhs))

    def solve(self, rhs, *, project: bool = False) -> Density:
        f = np.asarray(rhs.values if isinstance(rhs, Density) else rhs, dtype=float)
        if f.shape != (self.curve.size,):
            raise InvalidArgumentError("right-hand side length does not match curve")
        mean = self.curve.mean(f)
        scale = max(float(np.abs(f).max()), 1.0)
        mean_zero = abs(mean) <= _MEAN_TOL * scale
        if self.extreme:
            if not mean_zero:
                if not project:
                    raise IncompatibleDataError(
                        f"|lambda| = 1/2 requires a mean-zero right-hand side (mean {mean:.3e})"
                    )
                f = f - mean
                mean_zero = True
            phi = sla.lu_solve(self._lu, np.append(f, 0.0))[:-1]
        else:
            phi = sla.lu_solve(self._lu, f)
        return Density(self.curve, phi, mean_zero=mean_zero)


def solve_npo(curve: BoundaryCurve, lam: float, rhs) -> Density:
    """Solve ``(lambda I - K*) phi = rhs`` by a dense direct solve."""
    return NPOSolver(curve, lam).solve(rhs)


def phi_rhs(curve: BoundaryCurve, i: MultiIndex) -> np.ndarray:
    """``(1/i!) nu . grad y^i`` at the curve nodes."""
    g = monomial_gradient(curve.nodes, i)
    return np.einsum("ij,ij->i", g, curve.normals) / mfact(i)


def phi_i(curve: BoundaryCurve, lam: float, i: MultiIndex, solver: NPOSolver | None = None) -> Density:
    i = check(i)
    if sum(i) < 1:
        raise InvalidArgumentError("phi_i needs |i| >= 1")
    solver = solver if solver is not None else NPOSolver(curve, lam)
    rhs = phi_rhs(curve, i)
    if solver.extreme:
        mean = curve.mean(rhs)
        if abs(mean) > _MEAN_TOL:
            warnings.warn(
                f"phi_{i}: right-hand side projected to mean zero at |lambda| = 1/2 (discarded mean {mean:.3e})",
                DiscardedMeanWarning,
                stacklevel=2,
            )
        return solver.solve(rhs, project=True)
    return solver.solve(rhs)


def polarization_tensor(curve: BoundaryCurve, lam: float) -> np.ndarray:
    """First-order tensor ``m[a, b] = \\oint y_a (lambda I - K*)^{-1}(nu_b)``."""
    solver = NPOSolver(curve, lam)
    m = np.empty((2, 2))
    for b in range(2):
        phi = solver.solve(curve.normals[:, b]).values
        for a in range(2):
            m[a, b] = curve.integrate(curve.nodes[:, a] * phi)
    return m


@dataclass
class GptTable:
    """``M_ij = \\oint y^j phi_i`` for ``1 <= |i| <= n``, ``1 <= |j| <= n - |i| + 1``."""

    order: int
    shape: str
    k: float
    lam: float
    entries: dict[tuple[MultiIndex, MultiIndex], float]
    zeroth: dict[MultiIndex, float]
    discarded_means: dict[MultiIndex, float] = field(default_factory=dict)
    densities: dict[MultiIndex, np.ndarray] = field(default_factory=dict, repr=False)

    def __getitem__(self, key: tuple[MultiIndex, MultiIndex]) -> float:
        i, j = key
        return self.entries[(check(i), check(j))]

    def get(self, i: MultiIndex, j: MultiIndex, default: float = 0.0) -> float:
        return self.entries.get((tuple(i), tuple(j)), default)

    def first_order(self) -> np.ndarray:
        """The 2x2 block ``m[a, b] = M_{e_b, e_a}``."""
        e = [(1, 0), (0, 1)]
        return np.array([[self.entries[(e[b], e[a])] for b in range(2)] for a in range(2)])

    def zeroed(self) -> "GptTable":
        return GptTable(self.order, self.shape, self.k, self.lam, {key: 0.0 for key in self.entries}, dict(self.zeroth))

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "shape": self.shape,
            "k": _json_float(self.k),
            "lambda": self.lam,
            "n": self.order,
            "entries": [{"i": list(i), "j": list(j), "value": v} for (i, j), v in self.entries.items()],
            "zeroth_moments": [{"i": list(i), "value": v} for i, v in self.zeroth.items()],
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["# schema_version", SCHEMA_VERSION])
        w.writerow(["i1", "i2", "j1", "j2", "value"])
        for (i, j), v in self.entries.items():
            w.writerow([i[0], i[1], j[0], j[1], repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str) -> "GptTable":
        doc = json.loads(text)
        entries = {(tuple(e["i"]), tuple(e["j"])): float(e["value"]) for e in doc["entries"]}
        zeroth = {tuple(e["i"]): float(e["value"]) for e in doc.get("zeroth_moments", [])}
        return cls(doc["n"], doc["shape"], float(doc["k"]), doc["lambda"], entries, zeroth)


def _json_float(x: float):
    return "inf" if math.isinf(x) else x


def gpt_table(curve: BoundaryCurve, lam: float, n: int, *, k: float | None = None, n_max: int = N_MAX_GPT) -> GptTable:
    if not 1 <= n <= n_max:
        raise InvalidArgumentError(f"GPT order must satisfy 1 <= n <= {n_max}, got {n}")
    solver = NPOSolver(curve, lam)
    dens: dict[MultiIndex, np.ndarray] = {}
    discarded: dict[MultiIndex, float] = {}
    for i in up_to(n, 1):
        rhs = phi_rhs(curve, i)
        if solver.extreme:
            mean = curve.mean(rhs)
            if abs(mean) > _MEAN_TOL:
                discarded[i] = mean
        dens[i] = solver.solve(rhs, project=solver.extreme).values
    if discarded:
        warnings.warn(
            f"{len(discarded)} GPT right-hand side(s) projected to mean zero at |lambda| = 1/2",
            DiscardedMeanWarning,
            stacklevel=2,
        )
    entries = {}
    for i, j in gpt_pairs(n):
        entries[(i, j)] = curve.integrate(monomial(curve.nodes, j) * dens[i])
    zeroth = {i: curve.integrate(d) for i, d in dens.items()}
    if k is None:
        k = math.inf if lam == 0.5 else (2 * lam + 1) / (2 * lam - 1)
    table = GptTable(n, curve.shape.name, k, lam, entries, zeroth, discarded, dens)
    _assert_invariants(table, curve)
    return table


def _assert_invariants(table: GptTable, curve: BoundaryCurve) -> None:
    scale = max(1.0, max(abs(v) for v in table.entries.values()))
    for i in ((1, 0), (0, 1)):
        if i in table.zeroth and abs(table.zeroth[i]) > 1e-8 * scale:
            raise AssertionError(f"first-order density {i} is not mean-zero: {table.zeroth[i]:.3e}")
