"""Jacobian of the embedding and its rank behaviour.

The Jacobian has one row per generator and one column per coordinate
``x[i][j]``, columns ordered point-major (column ``i*d + j``). It loses
full column rank exactly when two points coincide; :func:`classify_rank`
reports both the numerical rank and the coincidence that explains it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .basis import GeneratorBasis
from .embed import Configuration, _check_shape, monomial
from .errors import InvalidParameter

DEFAULT_RANK_TOL = 1e-10


def jacobian(basis: GeneratorBasis, config: Configuration) -> np.ndarray:
    """Closed-form Jacobian, shape ``(m, n*d)``.

    Entry ``[k, i*d + j]`` is ``s_j * x_i ** (s - e_j)`` for ``s = order[k]``;
    it is exactly zero when ``s_j == 0``. Each column depends only on its own
    point, so coincident points give bit-identical columns.
    """
    _check_shape(basis, config)
    d = basis.d
    J = np.zeros((len(basis), config.n * d))
    for i, p in enumerate(config.points):
        for k, s in enumerate(basis.order):
            for j in range(d):
                if s[j]:
                    lowered = s[:j] + (s[j] - 1,) + s[j + 1:]
                    J[k, i * d + j] = s[j] * monomial(p, lowered)
    return J


@dataclass(frozen=True)
class RankReport:
    """Outcome of :func:`classify_rank`.

    ``coincident_pair`` uses 1-based point indices. ``numerically_singular``
    is set when the cited points are distinct but within the coincidence
    tolerance.
    """

    smallest_singular_value: float
    largest_singular_value: float
    rank: int
    n_columns: int
    coincident_pair: tuple[int, int] | None
    numerically_singular: bool = False

    @property
    def full_column_rank(self) -> bool:
        return self.rank == self.n_columns

    def to_dict(self) -> dict:
        return {
            "sigma_min": self.smallest_singular_value,
            "rank": self.rank,
            "full_column_rank": self.full_column_rank,
            "coincident_pair": list(self.coincident_pair) if self.coincident_pair else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def find_coincident_pair(config: Configuration, eps: float = 0.0) -> tuple[int, int] | None:
    """First pair (1-based, lexicographic in ``(i1, i2)``) whose coordinates
    all agree within `eps`."""
    for a, b in combinations(range(config.n), 2):
        if all(abs(u - v) <= eps for u, v in zip(config.points[a], config.points[b])):
            return (a + 1, b + 1)
    return None


def singularity_predicate(config: Configuration, eps: float = 0.0) -> bool:
    """True iff two points of `config` agree coordinate-wise within `eps`."""
    if eps < 0:
        raise InvalidParameter(f"eps must be >= 0, got {eps}")
    return find_coincident_pair(config, eps) is not None


def classify_rank(
    basis: GeneratorBasis,
    config: Configuration,
    tol: float = DEFAULT_RANK_TOL,
    eps: float = 0.0,
) -> RankReport:
    """Numerical column rank of the Jacobian at `config`.

    Singular values at or below ``tol * sigma_max`` count as zero. `eps` is
    the coincidence tolerance used to name the offending pair of points.
    """
    if not 0 < tol < 1:
        raise InvalidParameter(f"relative rank tolerance must lie in (0, 1), got {tol}")
    if eps < 0:
        raise InvalidParameter(f"eps must be >= 0, got {eps}")
    J = jacobian(basis, config)
    sv = np.linalg.svd(J, compute_uv=False)
    # m > n*d always, so there are exactly n*d singular values
    smax = float(sv[0]) if sv.size else 0.0
    rank = int(np.count_nonzero(sv > tol * smax)) if smax > 0 else 0
    pair = find_coincident_pair(config, eps)
    near = False
    if pair is not None:
        near = config.points[pair[0] - 1] != config.points[pair[1] - 1]
    return RankReport(
        smallest_singular_value=float(sv[-1]),
        largest_singular_value=smax,
        rank=rank,
        n_columns=J.shape[1],
        coincident_pair=pair,
        numerically_singular=near,
    )
