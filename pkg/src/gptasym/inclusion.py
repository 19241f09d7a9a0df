"""Small conductivity inclusions ``D = eps B + z`` inside a disk domain."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .domain_functions import DiskDomain
from .errors import DomainError, InvalidArgumentError
from .geometry import BoundaryCurve, ShapeSpec, diameter, discretize
from .transmission import resolvent_parameter


@dataclass(frozen=True, eq=False)
class InclusionSpec:
    """One inclusion: reference shape ``B`` scaled by ``eps`` and centered at ``center``.

    ``nodes`` is the number of quadrature nodes on ``B``.
    """

    center: tuple[float, float]
    eps: float
    shape: ShapeSpec
    k: float
    nodes: int = 128

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if len(c) != 2 or not all(math.isfinite(v) for v in c):
            raise InvalidArgumentError("inclusion center must be a finite 2-vector")
        object.__setattr__(self, "center", c)
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise InvalidArgumentError(f"inclusion scale eps must be positive, got {self.eps}")
        if self.nodes < 64:
            raise InvalidArgumentError("inclusion curves need at least 64 nodes")
        if math.isnan(self.k) or self.k < 0:
            raise InvalidArgumentError(f"conductivity must be in [0, inf], got {self.k}")

    @property
    def z(self) -> np.ndarray:
        return np.asarray(self.center)

    @property
    def lam(self) -> float:
        return resolvent_parameter(self.k)

    @cached_property
    def reference_curve(self) -> BoundaryCurve:
        return discretize(self.shape, self.nodes)

    @cached_property
    def curve(self) -> BoundaryCurve:
        return self.reference_curve.scaled(self.eps, self.center)

    def with_eps(self, eps: float) -> "InclusionSpec":
        return InclusionSpec(self.center, eps, self.shape, self.k, self.nodes)

    def validate(self, domain: DiskDomain) -> None:
        """Check ``dist(z, boundary) >= 2 c0`` and ``eps diam(B) < c0``."""
        try:
            domain.check_center(self.z)
        except DomainError as exc:
            raise InvalidArgumentError(str(exc)) from None
        size = self.eps * diameter(self.reference_curve)
        if not size < domain.c0:
            raise InvalidArgumentError(f"inclusion too large: eps diam(B) = {size:.4g} >= c0 = {domain.c0:g}")


def validate_inclusions(domain: DiskDomain, inclusions) -> list[InclusionSpec]:
    inclusions = list(inclusions)
    if not inclusions:
        raise InvalidArgumentError("at least one inclusion is required")
    for inc in inclusions:
        inc.validate(domain)
    for a, b in combinations(inclusions, 2):
        if np.hypot(*(a.z - b.z)) < 2 * domain.c0:
            raise InvalidArgumentError(f"inclusion centers {a.center} and {b.center} closer than 2 c0")
    return inclusions
