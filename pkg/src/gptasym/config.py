"""YAML study configuration with validation and a lossless dict round-trip."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .domain_functions import DiskDomain
from .errors import GptAsymError, InvalidArgumentError
from .geometry import ShapeSpec
from .inclusion import InclusionSpec, validate_inclusions
from .transmission import N_MAX_GPT


class ConfigError(GptAsymError, ValueError):
    """Invalid or inconsistent configuration."""


@dataclass(frozen=True)
class DomainConfig:
    radius: float = 1.0
    nodes: int = 256
    c0: float = 0.05

    def build(self) -> DiskDomain:
        return DiskDomain(self.radius, self.nodes, self.c0)


@dataclass(frozen=True)
class InclusionConfig:
    shape: ShapeSpec
    center: tuple[float, float]
    eps: float
    k: float
    nodes: int = 128

    def build(self, eps: float | None = None) -> InclusionSpec:
        return InclusionSpec(self.center, self.eps if eps is None else eps, self.shape, self.k, self.nodes)


@dataclass(frozen=True)
class DataConfig:
    """Boundary data: Fourier modes ``(m, a_m, b_m)`` or tabulated nodal values."""

    kind: str = "neumann"
    modes: tuple[tuple[int, float, float], ...] = ((1, 1.0, 0.0),)
    values: tuple[float, ...] | None = None

    def nodal(self, domain: DiskDomain) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        th = domain.theta()
        out = np.zeros_like(th)
        for m, a, b in self.modes:
            out += a * np.cos(m * th) + b * np.sin(m * th)
        return out


@dataclass(frozen=True)
class StudyConfig:
    domain: DomainConfig = field(default_factory=DomainConfig)
    inclusions: tuple[InclusionConfig, ...] = ()
    data: DataConfig = field(default_factory=DataConfig)
    orders: tuple[int, ...] = (1,)
    eps_grid: tuple[float, ...] = ()
    output: str = "out"
    slope_tolerance: float = 0.3
    seed: int = 0
    zero_gpt: bool = False

    # -- construction ------------------------------------------------------

    @classmethod
    def from_dict(cls, doc: dict) -> "StudyConfig":
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a mapping")
        known = {"domain", "inclusions", "data", "orders", "eps_grid", "output", "tolerances", "seed", "zero_gpt"}
        extra = set(doc) - known
        if extra:
            raise ConfigError(f"unknown configuration keys: {sorted(extra)}")
        try:
            dom = DomainConfig(**_section(doc, "domain", {"radius", "nodes", "c0"}))
            incs = tuple(_inclusion(d) for d in doc.get("inclusions") or [])
            data = _data(doc.get("data") or {})
            tol = _section(doc, "tolerances", {"slope"})
            cfg = cls(
                domain=dom,
                inclusions=incs,
                data=data,
                orders=tuple(int(n) for n in doc.get("orders", [1])),
                eps_grid=tuple(float(e) for e in doc.get("eps_grid") or []),
                output=str(doc.get("output", "out")),
                slope_tolerance=float(tol.get("slope", 0.3)),
                seed=int(doc.get("seed", 0)),
                zero_gpt=bool(doc.get("zero_gpt", False)),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(f"invalid configuration: {exc}") from None
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "StudyConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed YAML in {path}: {exc}") from None
        return cls.from_dict(doc or {})

    def to_dict(self) -> dict:
        data: dict = {"kind": self.data.kind}
        if self.data.values is not None:
            data["values"] = list(self.data.values)
        else:
            data["modes"] = [list(m) for m in self.data.modes]
        return {
            "domain": {"radius": self.domain.radius, "nodes": self.domain.nodes, "c0": self.domain.c0},
            "inclusions": [
                {
                    "shape": inc.shape.to_dict(),
                    "center": list(inc.center),
                    "eps": inc.eps,
                    "k": "inf" if math.isinf(inc.k) else inc.k,
                    "nodes": inc.nodes,
                }
                for inc in self.inclusions
            ],
            "data": data,
            "orders": list(self.orders),
            "eps_grid": list(self.eps_grid),
            "output": self.output,
            "tolerances": {"slope": self.slope_tolerance},
            "seed": self.seed,
            "zero_gpt": self.zero_gpt,
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def with_overrides(self, *, orders=None, eps_grid=None, seed=None, output=None) -> "StudyConfig":
        cfg = replace(
            self,
            orders=tuple(orders) if orders else self.orders,
            eps_grid=tuple(eps_grid) if eps_grid else self.eps_grid,
            seed=self.seed if seed is None else seed,
            output=self.output if output is None else str(output),
        )
        cfg.validate()
        return cfg

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        try:
            domain = self.domain.build()
        except InvalidArgumentError as exc:
            raise ConfigError(f"domain: {exc}") from None
        if not self.inclusions:
            raise ConfigError("at least one inclusion is required")
        if not self.orders or any(not 1 <= n <= N_MAX_GPT for n in self.orders):
            raise ConfigError(f"orders must lie in 1..{N_MAX_GPT}, got {list(self.orders)}")
        if any(e <= 0 for e in self.eps_grid):
            raise ConfigError("eps grid entries must be positive")
        if any(a <= b for a, b in zip(self.eps_grid, self.eps_grid[1:])):
            raise ConfigError("eps grid must be strictly decreasing")
        if self.data.kind not in ("neumann", "dirichlet"):
            raise ConfigError("data.kind must be 'neumann' or 'dirichlet'")
        if self.data.values is not None and len(self.data.values) != self.domain.nodes:
            raise ConfigError(f"tabulated data needs {self.domain.nodes} values, got {len(self.data.values)}")
        if self.data.kind == "dirichlet" and len(self.inclusions) > 1:
            raise ConfigError("Dirichlet expansions support a single inclusion")
        g = self.data.nodal(domain)
        if self.data.kind == "neumann" and abs(domain.curve.mean(g)) > 1e-12 * max(1.0, float(np.abs(g).max())):
            raise ConfigError("Neumann data must have zero mean")
        for eps in [None, *self.eps_grid]:
            try:
                validate_inclusions(domain, [inc.build(eps) for inc in self.inclusions])
            except InvalidArgumentError as exc:
                raise ConfigError(f"inclusion geometry: {exc}") from None

    def domain_obj(self) -> DiskDomain:
        return self.domain.build()


def _section(doc: dict, key: str, allowed: set[str]) -> dict:
    sec = doc.get(key) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"'{key}' must be a mapping")
    extra = set(sec) - allowed
    if extra:
        raise ConfigError(f"unknown keys in '{key}': {sorted(extra)}")
    return sec


def _parse_k(v) -> float:
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity", ".inf"):
        return math.inf
    return float(v)


def _inclusion(d: dict) -> InclusionConfig:
    if not isinstance(d, dict):
        raise ConfigError("each inclusion must be a mapping")
    extra = set(d) - {"shape", "center", "eps", "k", "nodes"}
    if extra:
        raise ConfigError(f"unknown inclusion keys: {sorted(extra)}")
    shape = d.get("shape", {"kind": "disk"})
    if isinstance(shape, str):
        shape = {"kind": shape}
    try:
        spec = ShapeSpec.from_dict(shape)
    except InvalidArgumentError as exc:
        raise ConfigError(f"shape: {exc}") from None
    if spec.kind == "custom":
        raise ConfigError("custom shapes cannot be configured from a file")
    center = tuple(float(v) for v in d.get("center", (0.0, 0.0)))
    if len(center) != 2:
        raise ConfigError("inclusion center must have two coordinates")
    try:
        return InclusionConfig(spec, center, float(d["eps"]), _parse_k(d["k"]), int(d.get("nodes", 128)))
    except KeyError as exc:
        raise ConfigError(f"inclusion is missing {exc}") from None


def _data(d: dict) -> DataConfig:
    extra = set(d) - {"kind", "modes", "values"}
    if extra:
        raise ConfigError(f"unknown data keys: {sorted(extra)}")
    kind = d.get("kind", "neumann")
    if "values" in d and "modes" in d:
        raise ConfigError("give either data.modes or data.values, not both")
    if "values" in d:
        return DataConfig(kind, (), tuple(float(v) for v in d["values"]))
    modes = []
    for m in d.get("modes", [[1, 1.0, 0.0]]):
        if len(m) != 3 or int(m[0]) != m[0] or m[0] < 0:
            raise ConfigError(f"each mode must be [m, a_m, b_m] with integer m >= 0, got {m}")
        modes.append((int(m[0]), float(m[1]), float(m[2])))
    return DataConfig(kind, tuple(modes), None)
