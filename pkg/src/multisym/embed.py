"""Evaluation of the power-sum embedding.

``embed(x)[k] = sum_i prod_j x[i][j] ** s_k[j]`` where ``s_k`` is the k-th
exponent of a :class:`~multisym.basis.GeneratorBasis`.

Points are sorted into canonical order before the sum, so the floating
point result depends only on the multiset of points; permuting the input
gives a bit-identical embedding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .basis import GeneratorBasis
from .errors import DimensionMismatch, InvalidParameter, NonFiniteInput, UnsupportedCase

Point = tuple[float, ...]


@dataclass(frozen=True)
class Configuration:
    """An ordered tuple of ``n >= 1`` points in ``R^d``.

    Coordinates are stored as floats; ``-0.0`` is normalised to ``0.0`` so
    that sorting is a total order on the stored values.
    """

    points: tuple[Point, ...]

    def __init__(self, points: Iterable[Iterable[float]]):
        pts = []
        for i, p in enumerate(points):
            row = []
            for j, c in enumerate(p):
                v = float(c) + 0.0
                if not math.isfinite(v):
                    raise NonFiniteInput(f"coordinate ({i}, {j}) is not finite: {c!r}")
                row.append(v)
            pts.append(tuple(row))
        if not pts:
            raise InvalidParameter("a configuration needs at least one point")
        d = len(pts[0])
        if d == 0:
            raise InvalidParameter("points must have at least one coordinate")
        for i, p in enumerate(pts):
            if len(p) != d:
                raise DimensionMismatch(f"point {i} has {len(p)} coordinates, expected {d}")
        object.__setattr__(self, "points", tuple(pts))

    @property
    def d(self) -> int:
        return len(self.points[0])

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}``; ``image[k]`` is the index of the
    input point placed at position ``k`` (0-based)."""

    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(i) for i in self.image))
        if sorted(self.image) != list(range(len(self.image))):
            raise InvalidParameter(f"{self.image} is not a permutation of 0..{len(self.image) - 1}")

    def apply(self, config: Configuration) -> Configuration:
        if len(self.image) != config.n:
            raise DimensionMismatch(f"permutation of {len(self.image)} elements applied to {config.n} points")
        return Configuration(config.points[k] for k in self.image)


def permute(config: Configuration, image: Sequence[int]) -> Configuration:
    """``sigma * x``: position k receives point ``image[k]``."""
    return Permutation(tuple(image)).apply(config)


@dataclass(frozen=True)
class Embedding:
    basis: GeneratorBasis
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != len(self.basis):
            raise DimensionMismatch(f"{len(self.values)} values for a basis of {len(self.basis)} generators")
        if not all(math.isfinite(v) for v in self.values):
            raise NonFiniteInput("embedding has non-finite entries")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def ipow(x: float, k: int) -> float:
    """``x ** k`` by repeated squaring; ``ipow(x, 0) == 1`` including at 0."""
    result = 1.0
    base = x
    while k:
        if k & 1:
            result *= base
        k >>= 1
        if k:
            base *= base
    return result


def monomial(point: Sequence[float], s: Sequence[int]) -> float:
    value = 1.0
    for c, e in zip(point, s):
        if e:
            value *= ipow(c, e)
    return value


def point_features(basis: GeneratorBasis, point: Sequence[float]) -> list[float]:
    """The single-point summand ``phi(point)`` of the embedding."""
    if len(point) != basis.d:
        raise DimensionMismatch(f"point has {len(point)} coordinates, basis expects d={basis.d}")
    return [monomial(point, s) for s in basis.order]


def canonicalize(config: Configuration) -> Configuration:
    """Representative of the orbit of `config`: points in lexicographic order."""
    return Configuration(sorted(config.points))


def _check_shape(basis: GeneratorBasis, config: Configuration):
    if config.d != basis.d:
        raise DimensionMismatch(f"configuration has d={config.d}, basis expects d={basis.d}")
    if config.n != basis.n:
        raise DimensionMismatch(f"configuration has n={config.n} points, basis expects n={basis.n}")


def embed(basis: GeneratorBasis, config: Configuration) -> Embedding:
    _check_shape(basis, config)
    total = [0.0] * len(basis)
    for p in sorted(config.points):
        for k, v in enumerate(point_features(basis, p)):
            total[k] += v
    return Embedding(basis, total)


def as_configuration(x) -> Configuration:
    """Accept a Configuration or any nested sequence / 2-D array of points."""
    return x if isinstance(x, Configuration) else Configuration(x)


def reconstruct_norm(basis: GeneratorBasis, e: Embedding) -> float:
    """Recover ``sum_i |x_i|^2`` from ``e = embed(x)`` as the sum of the pure
    quadratic power sums ``eta_{2 e_j}``."""
    if e.basis != basis:
        raise DimensionMismatch("embedding was computed on a different basis")
    if basis.n < 2:
        raise UnsupportedCase("norm reconstruction needs n >= 2 (degree-2 power sums are absent for n = 1)")
    total = 0.0
    for j in range(basis.d):
        s = tuple(2 if i == j else 0 for i in range(basis.d))
        total += e.values[basis.index(s)]
    return total
