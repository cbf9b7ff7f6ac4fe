"""Image and fibers of the embedding for two points in the plane.

Coordinates follow the familiar hand labelling rather than the canonical
basis order::

    z1 = x11 + x21        z3 = x11^2 + x21^2
    z2 = x12 + x22        z4 = x12^2 + x22^2
    w  = x11*x12 + x21*x22

Projecting out ``w`` gives the set ``2*z3 >= z1^2, 2*z4 >= z2^2``. Over a
point of that set the possible ``w`` values are counted by how many of
the two inequalities are strict.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .basis import enumerate_generators
from .embed import Configuration, Embedding, canonicalize
from .errors import DimensionMismatch, InvalidParameter, NonFiniteInput

DISCRIMINANT_TOL = 1e-12

BASIS = enumerate_generators(2, 2)
# canonical position of (z1, z2, z3, z4, w)
PAPER_INDEX = tuple(BASIS.index(s) for s in ((1, 0), (0, 1), (2, 0), (0, 2), (1, 1)))


class FiberCase(str, Enum):
    EMPTY = "Empty"
    TWO_REGULAR = "TwoRegular"
    ONE_REGULAR = "OneRegular"
    ONE_SINGULAR = "OneSingular"

    @property
    def w_count(self) -> int:
        return {"Empty": 0, "TwoRegular": 2, "OneRegular": 1, "OneSingular": 1}[self.value]


@dataclass(frozen=True)
class FiberQuery:
    z1: float
    z2: float
    z3: float
    z4: float

    def __post_init__(self):
        for name in ("z1", "z2", "z3", "z4"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise NonFiniteInput(f"{name} is not finite")
            object.__setattr__(self, name, v)

    @classmethod
    def from_embedding(cls, e: Embedding) -> "FiberQuery":
        return cls(*to_paper_coordinates(e)[:4])

    @property
    def discriminants(self) -> tuple[float, float]:
        """``2*z3 - z1^2`` and ``2*z4 - z2^2``: squared coordinate gaps."""
        return 2 * self.z3 - self.z1 * self.z1, 2 * self.z4 - self.z2 * self.z2


@dataclass(frozen=True)
class FiberClassification:
    case: FiberCase
    w_values: tuple[float, ...]
    witnesses: tuple[Configuration, ...]
    near_boundary: bool = False

    def to_dict(self) -> dict:
        return {
            "case": self.case.value,
            "w": list(self.w_values),
            "witnesses": [[list(p) for p in c.points] for c in self.witnesses],
            "near_boundary": self.near_boundary,
        }


def to_paper_coordinates(e: Embedding) -> tuple[float, float, float, float, float]:
    """``(z1, z2, z3, z4, w)`` from an embedding on the d = n = 2 basis."""
    if e.basis != BASIS:
        raise DimensionMismatch("expected an embedding on the (d=2, n=2) basis without constant")
    return tuple(e.values[k] for k in PAPER_INDEX)


def from_paper_coordinates(z1, z2, z3, z4, w) -> Embedding:
    vals = [0.0] * 5
    for k, v in zip(PAPER_INDEX, (z1, z2, z3, z4, w)):
        vals[k] = v
    return Embedding(BASIS, vals)


def image_membership(q: FiberQuery) -> bool:
    """Whether ``(z1..z4)`` is the projection of some embedded pair."""
    return _half_plane(q.z1, q.z3) and _half_plane(q.z2, q.z4)


def _half_plane(s: float, sq: float) -> bool:
    return 2 * sq >= s * s


def _split(total: float, disc: float) -> tuple[float, float]:
    # roots of t^2 - total*t + (total^2 - sumsq)/2
    r = math.sqrt(disc)
    return (total - r) / 2, (total + r) / 2


def fiber(q: FiberQuery, tol: float = DISCRIMINANT_TOL) -> FiberClassification:
    """All ``w`` with ``(z1, z2, z3, z4, w)`` in the image, plus a witness pair
    of points for each.

    A discriminant within `tol` of zero is treated as zero; if it was not
    exactly zero the result is flagged ``near_boundary``.
    """
    d1, d2 = q.discriminants
    if d1 < -tol or d2 < -tol:
        return FiberClassification(FiberCase.EMPTY, (), ())
    near = (abs(d1) <= tol and d1 != 0.0) or (abs(d2) <= tol and d2 != 0.0)
    equal1 = abs(d1) <= tol
    equal2 = abs(d2) <= tol
    d1 = 0.0 if equal1 else d1
    d2 = 0.0 if equal2 else d2

    a1, a2 = _split(q.z1, d1)
    b1, b2 = _split(q.z2, d2)
    # w over the two pairings: (z1*z2 -/+ sqrt(d1*d2)) / 2
    root = math.sqrt(d1 * d2)
    if equal1 and equal2:
        case = FiberCase.ONE_SINGULAR
        ws = (q.z1 * q.z2 / 2,)
        wit = (Configuration([(a1, b1), (a2, b2)]),)
    elif equal1 or equal2:
        case = FiberCase.ONE_REGULAR
        ws = (q.z1 * q.z2 / 2,)
        wit = (Configuration([(a1, b1), (a2, b2)]),)
    else:
        case = FiberCase.TWO_REGULAR
        ws = ((q.z1 * q.z2 - root) / 2, (q.z1 * q.z2 + root) / 2)
        # anti-aligned pairing gives the smaller w
        wit = (Configuration([(a1, b2), (a2, b1)]), Configuration([(a1, b1), (a2, b2)]))
    wit = tuple(canonicalize(c) for c in wit)
    return FiberClassification(case, ws, wit, near)


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned grid: `steps` evenly spaced values in ``[lo, hi]`` per axis."""

    lo: float = -1.0
    hi: float = 1.0
    steps: int = 3

    def __post_init__(self):
        if self.steps < 1:
            raise InvalidParameter("steps must be >= 1")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.hi < self.lo:
            raise InvalidParameter(f"invalid grid range [{self.lo}, {self.hi}]")

    def axis(self) -> list[float]:
        if self.steps == 1:
            return [self.lo]
        return [float(v) for v in np.linspace(self.lo, self.hi, self.steps)]

    def nodes(self) -> Iterable[FiberQuery]:
        ax = self.axis()
        for z in product(ax, repeat=4):
            yield FiberQuery(*z)


@dataclass(frozen=True)
class ScanRow:
    query: FiberQuery
    case: FiberCase
    w_count: int
    near_boundary: bool


SCAN_HEADER = ("z1", "z2", "z3", "z4", "case", "w_count")


def fiber_cardinality_scan(grid: GridSpec | Iterable[FiberQuery]) -> list[ScanRow]:
    """Classify every node of `grid` (a :class:`GridSpec` or any iterable of queries)."""
    nodes = grid.nodes() if isinstance(grid, GridSpec) else grid
    rows = []
    for q in nodes:
        fc = fiber(q)
        rows.append(ScanRow(q, fc.case, len(fc.w_values), fc.near_boundary))
    return rows


def scan_to_csv(rows: Sequence[ScanRow], fmt=repr) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    for r in rows:
        q = r.query
        writer.writerow([fmt(q.z1), fmt(q.z2), fmt(q.z3), fmt(q.z4), r.case.value, r.w_count])
    return buf.getvalue()
