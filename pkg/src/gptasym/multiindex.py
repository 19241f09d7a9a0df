"""Two-dimensional multi-index helpers.

Multi-indices are plain ``(i1, i2)`` tuples. Enumeration is by total degree
ascending and lexicographic within a degree, so ``(0, 1)`` precedes ``(1, 0)``.
"""

from __future__ import annotations

from math import factorial
from typing import Iterator

import numpy as np

from .errors import InvalidArgumentError

MultiIndex = tuple[int, int]


def of_degree(k: int) -> list[MultiIndex]:
    return [(a, k - a) for a in range(k + 1)]


def up_to(n: int, start: int = 0) -> list[MultiIndex]:
    """All multi-indices with ``start <= |i| <= n`` in table order."""
    out: list[MultiIndex] = []
    for k in range(start, n + 1):
        out.extend(of_degree(k))
    return out


def gpt_pairs(n: int) -> Iterator[tuple[MultiIndex, MultiIndex]]:
    """Index pairs ``(i, j)`` with ``1 <= |i| <= n`` and ``1 <= |j| <= n - |i| + 1``."""
    for i in up_to(n, 1):
        for j in up_to(n - sum(i) + 1, 1):
            yield i, j


def mfact(i: MultiIndex) -> int:
    return factorial(i[0]) * factorial(i[1])


def monomial(points: np.ndarray, i: MultiIndex) -> np.ndarray:
    """``y^i`` evaluated at an ``(n, 2)`` array of points."""
    pts = np.asarray(points, dtype=float)
    return pts[..., 0] ** i[0] * pts[..., 1] ** i[1]


def monomial_gradient(points: np.ndarray, i: MultiIndex) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    x, y = pts[..., 0], pts[..., 1]
    gx = i[0] * x ** max(i[0] - 1, 0) * y ** i[1] if i[0] else np.zeros_like(x)
    gy = i[1] * x ** i[0] * y ** max(i[1] - 1, 0) if i[1] else np.zeros_like(y)
    return np.stack([gx, gy], axis=-1)


def holomorphic_partial(deriv: np.ndarray, j: MultiIndex) -> np.ndarray:
    """Real partial ``d^j Re F`` given the complex derivative ``F^(|j|)``.

    For holomorphic ``F`` one has ``d_1 F = F'`` and ``d_2 F = i F'``.
    """
    return np.real((1j) ** j[1] * deriv)


def check(i: MultiIndex) -> MultiIndex:
    if len(i) != 2 or min(i) < 0:
        raise InvalidArgumentError(f"invalid multi-index {i!r}")
    return (int(i[0]), int(i[1]))
