"""Orbit comparison on unordered point sets.

* :func:`orbit_equal` -- do two tuples hold the same multiset of points?
* :func:`quotient_distance` -- ``min_sigma ||x - sigma * x'||``.
* :func:`separating_polynomial` -- an explicit symmetric polynomial
  ``p(y) = sum_i q(y_i)`` taking different values on two distinct orbits.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .basis import ExponentVector, exponents_up_to
from .embed import Configuration, monomial
from .errors import DimensionMismatch, InputFormatError, InterpolationFailure, PreconditionViolation

INTERPOLATION_RESIDUAL = 1e-10


def _same_shape(x: Configuration, y: Configuration):
    if (x.n, x.d) != (y.n, y.d):
        raise DimensionMismatch(f"shapes differ: (n={x.n}, d={x.d}) vs (n={y.n}, d={y.d})")


def orbit_equal(x: Configuration, y: Configuration, eps: float = 0.0) -> bool:
    """Whether some permutation matches `x` to `y` point by point, every
    coordinate within `eps`.

    Decided by a perfect-matching test on the bipartite graph of
    eps-close point pairs, so it is exact for any eps (no greedy pairing).
    """
    _same_shape(x, y)
    a = np.asarray(x.points)
    b = np.asarray(y.points)
    close = np.all(np.abs(a[:, None, :] - b[None, :, :]) <= eps, axis=2)
    if not close.any(axis=0).all() or not close.any(axis=1).all():
        return False
    match = maximum_bipartite_matching(csr_matrix(close.astype(np.int8)), perm_type="column")
    return bool(np.all(match >= 0))


def _squared_costs(x: Configuration, y: Configuration) -> np.ndarray:
    a = np.asarray(x.points)
    b = np.asarray(y.points)
    return ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)


def optimal_matching(x: Configuration, y: Configuration) -> tuple[int, ...]:
    """Permutation ``image`` with ``y[image[k]]`` matched to ``x[k]``,
    minimising the total squared distance."""
    _same_shape(x, y)
    rows, cols = linear_sum_assignment(_squared_costs(x, y))
    return tuple(int(c) for _, c in sorted(zip(rows, cols)))


def quotient_distance(x: Configuration, y: Configuration) -> float:
    """Distance between the orbits of `x` and `y` (Euclidean on R^{nd}
    after the best re-labelling of `y`)."""
    _same_shape(x, y)
    cost = _squared_costs(x, y)
    rows, cols = linear_sum_assignment(cost)
    return math.sqrt(math.fsum(cost[rows, cols]))


@dataclass(frozen=True)
class SeparatingPolynomial:
    """``p(y_1..y_n) = sum_i q(y_i)`` with ``q = sum_k coeff_k * y^exponent_k``."""

    d: int
    inner_terms: tuple[tuple[ExponentVector, float], ...]

    def q(self, point) -> float:
        total = 0.0
        for s, c in self.inner_terms:
            total += c * monomial(point, s)
        return total

    @property
    def degree(self) -> int:
        return max((sum(s) for s, _ in self.inner_terms), default=0)

    def to_list(self) -> list[dict]:
        return [{"exponent": list(s), "coeff": c} for s, c in self.inner_terms]

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_list(cls, terms) -> "SeparatingPolynomial":
        parsed = []
        for pos, t in enumerate(terms):
            try:
                s = tuple(int(e) for e in t["exponent"])
                c = float(t["coeff"])
            except (KeyError, TypeError, ValueError):
                raise InputFormatError(f"polynomial term {pos}: expected {{'exponent': [...], 'coeff': number}}") from None
            parsed.append((s, c))
        if not parsed:
            raise InputFormatError("polynomial has no terms")
        d = len(parsed[0][0])
        if any(len(s) != d for s, _ in parsed):
            raise InputFormatError("polynomial terms have inconsistent exponent lengths")
        return cls(d, tuple(parsed))


def evaluate_separating(p: SeparatingPolynomial, config: Configuration) -> float:
    if config.d != p.d:
        raise DimensionMismatch(f"polynomial in d={p.d} variables evaluated on d={config.d} points")
    total = 0.0
    for point in sorted(config.points):
        total += p.q(point)
    return total


def _multiplicities(support, config: Configuration) -> list[int]:
    counts = dict.fromkeys(support, 0)
    for pt in config.points:
        counts[pt] += 1
    return [counts[s] for s in support]


def interpolate(nodes: list[tuple[float, ...]], targets: list[float], max_degree: int) -> tuple[tuple[ExponentVector, float], ...]:
    """Polynomial with ``q(nodes[j]) == targets[j]``.

    Least squares over all monomials of total degree <= k, for
    k = 0, 1, ... until the worst residual at the nodes drops below
    ``INTERPOLATION_RESIDUAL``; gives up past `max_degree`.
    """
    d = len(nodes[0])
    y = np.asarray(targets, dtype=float)
    for k in range(max_degree + 1):
        exps = exponents_up_to(d, k)
        V = np.array([[monomial(p, s) for s in exps] for p in nodes])
        coef, *_ = np.linalg.lstsq(V, y, rcond=None)
        resid = np.max(np.abs(V @ coef - y))
        if resid < INTERPOLATION_RESIDUAL:
            return tuple((s, float(c)) for s, c in zip(exps, coef))
    raise InterpolationFailure(f"no interpolant of total degree <= {max_degree} reached residual {INTERPOLATION_RESIDUAL}")


def separating_polynomial(x: Configuration, y: Configuration) -> SeparatingPolynomial:
    """Build ``p`` with ``p(x) != p(y)`` for non-equivalent `x`, `y`.

    The union of distinct points ``u_1..u_t`` is taken in order of first
    appearance (x then y) with multiplicities ``c`` (in x) and ``c'`` (in
    y). Target values are the indicator of the first index where ``c``
    exceeds ``c'``, so ``p(x) - p(y) = c_j - c'_j >= 1``. ``q`` interpolates
    those targets at the ``u_j``.
    """
    _same_shape(x, y)
    support = list(dict.fromkeys(x.points + y.points))
    c = _multiplicities(support, x)
    c2 = _multiplicities(support, y)
    if c == c2:
        raise PreconditionViolation("configurations lie in the same orbit; nothing to separate")
    # both count vectors sum to n, so some entry of c is strictly larger
    first = next(j for j, (a, b) in enumerate(zip(c, c2)) if a > b)
    targets = [1.0 if j == first else 0.0 for j in range(len(support))]
    terms = interpolate(support, targets, max_degree=len(support) + 2)
    return SeparatingPolynomial(x.d, terms)
