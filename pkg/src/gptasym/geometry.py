"""Smooth closed curves and their periodic trapezoid discretizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidArgumentError
from .multiindex import MultiIndex, monomial

# custom parametrizations return (gamma, gamma', gamma'') as (M, 2) arrays
Parametrization = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]

KITE_COEF = 0.65
KITE_HEIGHT = 1.5

SHAPE_KINDS = ("disk", "ellipse", "kite", "custom")


@dataclass(frozen=True)
class ShapeSpec:
    """Analytic description of a closed C^2 curve.

    ``scale``, ``rotation`` and ``center`` are applied in that order after
    the reference parametrization; ``phase`` shifts the parameter origin.
    """

    kind: str = "disk"
    radius: float = 1.0
    a: float = 1.0
    b: float = 1.0
    center: tuple[float, float] = (0.0, 0.0)
    rotation: float = 0.0
    phase: float = 0.0
    scale: float = 1.0
    param: Optional[Parametrization] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise InvalidArgumentError(f"unknown shape kind {self.kind!r}")
        if self.kind == "disk" and not self.radius > 0:
            raise InvalidArgumentError("disk radius must be positive")
        if self.kind == "ellipse" and not (self.a > 0 and self.b > 0):
            raise InvalidArgumentError("ellipse semi-axes must be positive")
        if not (self.scale > 0 and np.isfinite(self.scale)):
            raise InvalidArgumentError("shape scale must be positive")
        if self.kind == "custom" and self.param is None:
            raise InvalidArgumentError("custom shapes need a parametrization callback")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def name(self) -> str:
        if self.kind == "disk":
            return f"disk(r={self.radius:g})"
        if self.kind == "ellipse":
            return f"ellipse(a={self.a:g},b={self.b:g})"
        return self.kind if self.scale == 1 else f"{self.kind}(scale={self.scale:g})"

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "disk":
            d["radius"] = self.radius
        elif self.kind == "ellipse":
            d["a"], d["b"] = self.a, self.b
        d["center"] = list(self.center)
        d["rotation"] = self.rotation
        if self.phase:
            d["phase"] = self.phase
        if self.scale != 1:
            d["scale"] = self.scale
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ShapeSpec":
        known = {"kind", "radius", "a", "b", "center", "rotation", "phase", "scale"}
        extra = set(d) - known
        if extra:
            raise InvalidArgumentError(f"unknown shape keys {sorted(extra)}")
        kw = dict(d)
        if "center" in kw:
            kw["center"] = tuple(kw["center"])
        return cls(**kw)

    def evaluate(self, t: np.ndarray):
        """Return ``(gamma, gamma', gamma'')`` at parameter values ``t``."""
        t = np.asarray(t, dtype=float) + self.phase
        c, s = np.cos(t), np.sin(t)
        if self.kind == "disk":
            r = self.radius
            g = r * np.stack([c, s], -1)
            d1 = r * np.stack([-s, c], -1)
            d2 = -g
        elif self.kind == "ellipse":
            g = np.stack([self.a * c, self.b * s], -1)
            d1 = np.stack([-self.a * s, self.b * c], -1)
            d2 = -g
        elif self.kind == "kite":
            c2, s2 = np.cos(2 * t), np.sin(2 * t)
            g = np.stack([c + KITE_COEF * c2 - KITE_COEF, KITE_HEIGHT * s], -1)
            d1 = np.stack([-s - 2 * KITE_COEF * s2, KITE_HEIGHT * c], -1)
            d2 = np.stack([-c - 4 * KITE_COEF * c2, -KITE_HEIGHT * s], -1)
        else:
            g, d1, d2 = (np.asarray(v, dtype=float) for v in self.param(t))
        if self.scale != 1:
            g, d1, d2 = self.scale * g, self.scale * d1, self.scale * d2
        if self.rotation:
            cr, sr = np.cos(self.rotation), np.sin(self.rotation)
            rot = np.array([[cr, -sr], [sr, cr]])
            g, d1, d2 = g @ rot.T, d1 @ rot.T, d2 @ rot.T
        return g + np.asarray(self.center), d1, d2


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Trapezoid-rule discretization of a closed curve at ``t_m = 2 pi m / M``."""

    shape: ShapeSpec
    t: np.ndarray
    nodes: np.ndarray
    tangent: np.ndarray
    second: np.ndarray
    normals: np.ndarray
    speeds: np.ndarray
    weights: np.ndarray
    curvature: np.ndarray

    @property
    def size(self) -> int:
        return self.t.size

    def __len__(self) -> int:
        return self.t.size

    def mesh_width(self) -> float:
        return float(self.weights.max())

    def scaled(self, eps: float, center=(0.0, 0.0)) -> "BoundaryCurve":
        """The curve ``eps * B + center`` on the same parameter nodes."""
        c = np.asarray(center, dtype=float)
        return BoundaryCurve(
            shape=self.shape,
            t=self.t,
            nodes=eps * self.nodes + c,
            tangent=eps * self.tangent,
            second=eps * self.second,
            normals=self.normals,
            speeds=eps * self.speeds,
            weights=eps * self.weights,
            curvature=self.curvature / eps,
        )

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def mean(self, values: np.ndarray) -> float:
        return self.integrate(values) / float(self.weights.sum())


def discretize(shape: ShapeSpec, M: int) -> BoundaryCurve:
    if int(M) != M or M < 16 or M % 2:
        raise InvalidArgumentError(f"node count must be an even integer >= 16, got {M}")
    M = int(M)
    t = 2 * np.pi * np.arange(M) / M
    g, d1, d2 = shape.evaluate(t)
    speed = np.hypot(d1[:, 0], d1[:, 1])
    if np.any(speed <= 0):
        raise InvalidArgumentError("parametrization has vanishing speed")
    normals = np.stack([d1[:, 1], -d1[:, 0]], -1) / speed[:, None]
    curvature = (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / speed**3
    weights = speed * (2 * np.pi / M)
    signed_area = 0.5 * np.dot(weights, np.einsum("ij,ij->i", g, normals))
    if not signed_area > 0:
        raise InvalidArgumentError("curve must be positively oriented with positive area")
    return BoundaryCurve(shape, t, g, d1, d2, normals, speed, weights, curvature)


def perimeter(curve: BoundaryCurve) -> float:
    return float(curve.weights.sum())


def area(shape_or_curve, M: int = 512) -> float:
    """Enclosed area via ``1/2 \\oint x . nu``."""
    curve = shape_or_curve if isinstance(shape_or_curve, BoundaryCurve) else discretize(shape_or_curve, M)
    return 0.5 * curve.integrate(np.einsum("ij,ij->i", curve.nodes, curve.normals))


def moments(curve: BoundaryCurve, j: MultiIndex) -> np.ndarray:
    """``(\\oint y^j nu_1, \\oint y^j nu_2)`` over the curve."""
    yj = monomial(curve.nodes, j)
    return curve.weights @ (yj[:, None] * curve.normals)


def diameter(curve: BoundaryCurve) -> float:
    d = curve.nodes[:, None, :] - curve.nodes[None, :, :]
    return float(np.sqrt((d**2).sum(-1)).max())


def max_radius(curve: BoundaryCurve) -> float:
    return float(np.hypot(curve.nodes[:, 0], curve.nodes[:, 1]).max())
