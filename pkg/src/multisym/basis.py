"""Power-sum generator index sets.

A generator is indexed by an exponent vector ``s = (s_1, ..., s_d)`` and
the full set for ``n`` points in ``R^d`` is every ``s`` with total degree
``0 <= |s| <= n``. The canonical order is graded, then lexicographically
*descending* within a degree, so that for ``d = 1`` the basis is simply
``(1), (2), ..., (n)`` and for ``d = n = 2`` it reads
``(1,0), (0,1), (2,0), (1,1), (0,2)``.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Sequence

from .errors import InputFormatError, InvalidParameter

ExponentVector = tuple[int, ...]


def canonical_key(s: Sequence[int]) -> tuple:
    """Sort key realising the canonical order (ascending)."""
    return (sum(s),) + tuple(-e for e in s)


def compositions(total: int, parts: int) -> Iterator[ExponentVector]:
    """Yield every exponent vector of length `parts` summing to `total`,
    lexicographically largest first."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def exponents_up_to(d: int, degree: int, include_constant: bool = True) -> list[ExponentVector]:
    """All exponent vectors in `d` variables with total degree <= `degree`,
    in canonical order."""
    start = 0 if include_constant else 1
    return [s for k in range(start, degree + 1) for s in compositions(k, d)]


@dataclass(frozen=True)
class GeneratorBasis:
    d: int
    n: int
    include_constant: bool
    order: tuple[ExponentVector, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(self.order)})
        if len(self._index) != len(self.order):
            raise InvalidParameter("duplicate exponent vectors in basis")
        for s in self.order:
            if len(s) != self.d or min(s) < 0 or sum(s) > self.n:
                raise InvalidParameter(f"exponent {s} does not belong to a (d={self.d}, n={self.n}) basis")
        keys = [canonical_key(s) for s in self.order]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise InvalidParameter("basis order is not canonical")

    def __len__(self) -> int:
        return len(self.order)

    @property
    def m(self) -> int:
        return len(self.order)

    def index(self, s: Sequence[int]) -> int:
        """Position of exponent `s`; KeyError if absent."""
        return self._index[tuple(s)]

    def __contains__(self, s) -> bool:
        return tuple(s) in self._index

    def to_json(self) -> str:
        return json.dumps([list(s) for s in self.order], separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, n: int | None = None) -> "GeneratorBasis":
        """Parse the serialized order back into a complete basis.

        The array must be exactly the canonical enumeration for some
        ``(d, n)``; `n` defaults to the largest total degree present.
        """
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"basis JSON: {exc}") from None
        if not isinstance(raw, list) or not raw:
            raise InputFormatError("basis JSON: expected a non-empty array of exponent arrays")
        for pos, s in enumerate(raw):
            if not isinstance(s, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in s):
                raise InputFormatError(f"basis JSON: entry {pos} is not an integer array")
        d = len(raw[0])
        degree = max(sum(s) for s in raw)
        n = degree if n is None else n
        include_constant = [0] * d in raw
        expected = enumerate_generators(d, n, include_constant)
        if [list(s) for s in expected.order] != raw:
            raise InputFormatError("basis JSON: not a canonical power-sum basis")
        return expected


def enumerate_generators(d: int, n: int, include_constant: bool = False) -> GeneratorBasis:
    """Canonical power-sum basis for `n` points in ``R^d``.

    >>> enumerate_generators(2, 2).order
    ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    """
    _check_dims(d, n)
    generator_count(d, n)  # overflow guard before materialising
    return GeneratorBasis(d, n, include_constant, tuple(exponents_up_to(d, n, include_constant)))


def generator_count(d: int, n: int) -> int:
    """C(n + d, d): number of power sums including the constant one."""
    _check_dims(d, n)
    m = comb(n + d, d)
    if m > sys.maxsize:
        raise OverflowError(f"generator count C({n + d}, {d}) exceeds the addressable index range")
    return m


def _check_dims(d, n):
    for name, v in (("d", d), ("n", n)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise InvalidParameter(f"{name} must be a positive integer, got {v!r}")
