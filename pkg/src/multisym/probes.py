"""Regularity probes for the factor ``g`` in ``f = g(embed(x))``.

Since ``g(embed(x)) == f(x)``, every difference of ``g`` along a path of
configurations is a difference of ``f``; no fitted model is involved.
Two diagnostics are provided:

* the Lipschitz ratio ``|f(a) - f(b)| / ||embed(a) - embed(b)||`` along two
  paths that merge at a singular configuration, which blows up when ``g``
  is not Lipschitz;
* a local Hölder exponent of ``g`` at an anchor, read off as the slope of
  ``log|f - f0|`` against ``log||z - z0||``.

The built-in catalog uses two points on the line (d = 1, n = 2), where
the embedding is ``(x1 + x2, x1^2 + x2^2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .basis import GeneratorBasis, enumerate_generators
from .embed import Configuration, Embedding, embed
from .errors import InvalidParameter, PreconditionViolation

SymmetricFunction = Callable[[Configuration], float]
MIN_SAMPLES = 4


@dataclass(frozen=True)
class ProbePath:
    """Configurations ``x(t_k)`` on a strictly decreasing parameter grid,
    with their embeddings and f-values."""

    t: tuple[float, ...]
    configs: tuple[Configuration, ...]
    embeddings: tuple[Embedding, ...] = field(repr=False)
    values: tuple[float, ...]

    def __post_init__(self):
        K = len(self.t)
        if K < MIN_SAMPLES:
            raise InvalidParameter(f"a probe path needs at least {MIN_SAMPLES} samples, got {K}")
        if any(b >= a for a, b in zip(self.t, self.t[1:])) or self.t[-1] <= 0:
            raise InvalidParameter("path parameters must be positive and strictly decreasing")
        if not (len(self.configs) == len(self.embeddings) == len(self.values) == K):
            raise InvalidParameter("path arrays have inconsistent lengths")

    def __len__(self):
        return len(self.t)


def make_path(
    f: SymmetricFunction,
    config_at: Callable[[float], Configuration],
    t: Sequence[float],
    basis: GeneratorBasis,
) -> ProbePath:
    configs = tuple(c if isinstance(c, Configuration) else Configuration(c) for c in map(config_at, t))
    return ProbePath(
        tuple(float(v) for v in t),
        configs,
        tuple(embed(basis, c) for c in configs),
        tuple(float(f(c)) for c in configs),
    )


def geometric_grid(t_start: float = 2.0 ** -3, steps: int = 8, ratio: float = 0.5) -> list[float]:
    """``t_start * ratio**k`` for ``k = 0..steps-1``."""
    if t_start <= 0 or not 0 < ratio < 1 or steps < 1:
        raise InvalidParameter("need t_start > 0, 0 < ratio < 1 and steps >= 1")
    return [t_start * ratio ** k for k in range(steps)]


@dataclass(frozen=True)
class RatioSequence:
    """Lipschitz ratios per parameter. Samples where the two embeddings
    coincide have no ratio; they are listed in `excluded` and left out of
    `t` / `ratios`."""

    t: tuple[float, ...]
    ratios: tuple[float, ...]
    excluded: tuple[float, ...] = ()

    def __len__(self):
        return len(self.ratios)

    def __iter__(self):
        return iter(self.ratios)


def _distance(a: Embedding, b: Embedding) -> float:
    return math.sqrt(math.fsum((u - v) ** 2 for u, v in zip(a.values, b.values)))


def lipschitz_ratio_sequence(f: SymmetricFunction, path_a: ProbePath, path_b: ProbePath) -> RatioSequence:
    if path_a.t != path_b.t:
        raise PreconditionViolation("paths must share the parameter grid")
    ts, ratios, skipped = [], [], []
    for t, xa, xb, za, zb in zip(path_a.t, path_a.configs, path_b.configs, path_a.embeddings, path_b.embeddings):
        dist = _distance(za, zb)
        if dist == 0.0:
            skipped.append(t)
            continue
        ts.append(t)
        ratios.append(abs(f(xa) - f(xb)) / dist)
    return RatioSequence(tuple(ts), tuple(ratios), tuple(skipped))


@dataclass(frozen=True)
class HolderFit:
    exponent: float
    log_dz: tuple[float, ...]
    log_df: tuple[float, ...]
    used: tuple[int, ...]


def loglog_pairs(path: ProbePath, anchor: Embedding, anchor_value: float) -> tuple[np.ndarray, np.ndarray]:
    """``log||z(t) - anchor||`` and ``log|f(x(t)) - anchor_value|`` per sample;
    ``-inf`` where a difference vanishes."""
    dz = np.array([_distance(z, anchor) for z in path.embeddings])
    df = np.array([abs(v - anchor_value) for v in path.values])
    with np.errstate(divide="ignore"):
        return np.log(dz), np.log(df)


def holder_fit(path: ProbePath, anchor: Embedding, anchor_value: float) -> HolderFit:
    """Least-squares log-log slope over the tail half of the path."""
    dz = [_distance(z, anchor) for z in path.embeddings]
    if any(b >= a for a, b in zip(dz, dz[1:])):
        raise PreconditionViolation("distance to the anchor must decrease strictly along the path")
    lz, lf = loglog_pairs(path, anchor, anchor_value)
    K = len(path)
    tail = range(K - K // 2, K)
    used = tuple(k for k in tail if np.isfinite(lz[k]) and np.isfinite(lf[k]))
    if len(used) < 3:
        raise PreconditionViolation(f"only {len(used)} usable samples in the tail; need at least 3")
    slope, _ = np.polyfit(lz[list(used)], lf[list(used)], 1)
    return HolderFit(float(slope), tuple(lz[list(used)]), tuple(lf[list(used)]), used)


def holder_exponent(path: ProbePath, anchor: Embedding, anchor_value: float) -> float:
    """Estimated local Hölder exponent of ``g`` at `anchor` along `path`."""
    return holder_fit(path, anchor, anchor_value).exponent


# -- built-in examples (two points on the line) -------------------------------

LINE_BASIS = enumerate_generators(1, 2)


def abs_sum(x: Configuration) -> float:
    return math.fsum(abs(p[0]) for p in x.points)


def four_thirds_sum(x: Configuration) -> float:
    # x^(4/3) taken as (x^4)^(1/3) >= 0, the even real branch
    return math.fsum((p[0] ** 4) ** (1.0 / 3.0) for p in x.points)


def square_sum(x: Configuration) -> float:
    return math.fsum(p[0] * p[0] for p in x.points)


def _pair(a: float, b: float) -> Configuration:
    return Configuration([(a,), (b,)])


def _split_path(t: float) -> Configuration:
    # embed = (0, t): points +-sqrt(t/2)
    h = math.sqrt(t / 2)
    return _pair(h, -h)


@dataclass(frozen=True)
class BuiltinExample:
    """A symmetric ``f`` with paths exhibiting how regular ``g`` is near 0.

    ``pair_a`` / ``pair_b`` feed :func:`lipschitz_ratio_sequence`;
    ``holder_path`` reaches the anchor ``embed(0, 0)`` along ``z = (0, t)``.
    """

    id: str
    description: str
    f: SymmetricFunction
    pair_a: Callable[[float], Configuration]
    pair_b: Callable[[float], Configuration]
    ratio_law: Callable[[float], float]
    expected_exponent: float

    def paths(self, t: Sequence[float]) -> tuple[ProbePath, ProbePath]:
        return (
            make_path(self.f, self.pair_a, t, LINE_BASIS),
            make_path(self.f, self.pair_b, t, LINE_BASIS),
        )

    def holder_path(self, t: Sequence[float]) -> ProbePath:
        return make_path(self.f, _split_path, t, LINE_BASIS)

    @property
    def anchor(self) -> Embedding:
        return embed(LINE_BASIS, _pair(0.0, 0.0))

    @property
    def anchor_value(self) -> float:
        return self.f(_pair(0.0, 0.0))


_CATALOG = {
    ex.id: ex
    for ex in (
        BuiltinExample(
            "lipschitz-loss",
            "f = |x1| + |x2| is Lipschitz but g is not: ratio 1/(3t) along (t,-t) vs (2t,-2t); "
            "g(0, t) = sqrt(2t), exponent 1/2",
            abs_sum,
            lambda t: _pair(t, -t),
            lambda t: _pair(2 * t, -2 * t),
            lambda t: 1 / (3 * t),
            0.5,
        ),
        BuiltinExample(
            "c1-loss",
            "f = x1^(4/3) + x2^(4/3) is C^1 but g is not: ratio t^(-2/3) along (t,-t) vs (0,0); "
            "g(0, t) = 2^(1/3) t^(2/3), exponent 2/3",
            four_thirds_sum,
            lambda t: _pair(t, -t),
            lambda t: _pair(0.0, 0.0),
            lambda t: t ** (-2.0 / 3.0),
            2.0 / 3.0,
        ),
        BuiltinExample(
            "smooth-control",
            "f = x1^2 + x2^2 equals the second power sum, so g is linear: ratio 1, exponent 1",
            square_sum,
            lambda t: _pair(t, -t),
            lambda t: _pair(2 * t, -2 * t),
            lambda t: 1.0,
            1.0,
        ),
    )
}


def builtin_examples() -> dict[str, BuiltinExample]:
    return dict(_CATALOG)


def get_example(example_id: str) -> BuiltinExample:
    try:
        return _CATALOG[example_id]
    except KeyError:
        raise InvalidParameter(f"unknown example {example_id!r}; valid ids: {', '.join(_CATALOG)}") from None
