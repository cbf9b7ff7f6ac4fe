"""Factoring a symmetric function through the embedding.

Given samples of a symmetric ``f``, :func:`fit_g` tabulates ``g`` on the
image of the embedding so that ``f = g(embed(x))`` on every training
orbit. ``g`` is only known to be continuous, so it is kept as a
nearest-neighbour table rather than a smooth model; queries away from the
training embeddings (including off the image) are extrapolation.

:func:`invert_d1` undoes the embedding for points on the line.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .basis import GeneratorBasis, enumerate_generators
from .embed import Configuration, Embedding, canonicalize, embed
from .errors import (
    DimensionMismatch,
    EmptyTable,
    IllConditioned,
    InputFormatError,
    InvalidParameter,
    NonFiniteInput,
    NotInImage,
    SymmetryViolation,
)

SYMMETRY_TOL = 1e-9
IMAG_TOL = 1e-7
ROOT_ACCURACY = 1e-8


@dataclass(frozen=True)
class LabeledDataset:
    basis: GeneratorBasis
    records: tuple[tuple[Configuration, float], ...]

    def __init__(self, basis: GeneratorBasis, records: Iterable[tuple[Configuration, float]]):
        recs = []
        for pos, (x, v) in enumerate(records):
            if not isinstance(x, Configuration):
                x = Configuration(x)
            if (x.d, x.n) != (basis.d, basis.n):
                raise DimensionMismatch(f"record {pos}: shape (d={x.d}, n={x.n}) does not match basis (d={basis.d}, n={basis.n})")
            v = float(v)
            if not math.isfinite(v):
                raise NonFiniteInput(f"record {pos}: f-value {v} is not finite")
            recs.append((x, v))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "records", tuple(recs))

    def __len__(self):
        return len(self.records)


@dataclass(frozen=True)
class OrbitViolation:
    representative: Configuration
    record_indices: tuple[int, ...]
    values: tuple[float, ...]

    @property
    def spread(self) -> float:
        return max(self.values) - min(self.values)


@dataclass(frozen=True)
class SymmetryReport:
    n_groups: int
    violations: tuple[OrbitViolation, ...] = ()
    tol: float = 0.0

    @property
    def consistent(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "groups": self.n_groups,
            "tol": self.tol,
            "violations": [
                {
                    "orbit": [list(p) for p in v.representative.points],
                    "records": list(v.record_indices),
                    "values": list(v.values),
                }
                for v in self.violations
            ],
        }


def _group_orbits(dataset: LabeledDataset) -> dict:
    groups: dict[tuple, list[int]] = {}
    for k, (x, _) in enumerate(dataset.records):
        groups.setdefault(canonicalize(x).points, []).append(k)
    return groups


def check_symmetry(dataset: LabeledDataset, tol: float = SYMMETRY_TOL) -> SymmetryReport:
    """Group records by orbit and flag orbits whose f-values spread by more than `tol`."""
    if tol < 0:
        raise InvalidParameter(f"tol must be >= 0, got {tol}")
    groups = _group_orbits(dataset)
    bad = []
    for rep, idx in groups.items():
        vals = tuple(dataset.records[k][1] for k in idx)
        if max(vals) - min(vals) > tol:
            bad.append(OrbitViolation(Configuration(rep), tuple(idx), vals))
    return SymmetryReport(len(groups), tuple(bad), tol)


@dataclass(frozen=True)
class FittedDecomposition:
    """Tabulated ``g``: one (embedding, value) row per training orbit."""

    basis: GeneratorBasis
    embeddings: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.embeddings.setflags(write=False)
        self.values.setflags(write=False)

    def __len__(self):
        return len(self.values)

    def to_dict(self) -> dict:
        return {
            "basis": [list(s) for s in self.basis.order],
            "d": self.basis.d,
            "n": self.basis.n,
            "include_constant": self.basis.include_constant,
            "embeddings": self.embeddings.tolist(),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "FittedDecomposition":
        try:
            basis = enumerate_generators(int(raw["d"]), int(raw["n"]), bool(raw["include_constant"]))
            emb = np.asarray(raw["embeddings"], dtype=float).reshape(-1, len(basis))
            vals = np.asarray(raw["values"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputFormatError(f"fit JSON: {exc}") from None
        if [list(s) for s in basis.order] != raw.get("basis"):
            raise InputFormatError("fit JSON: field 'basis' does not match (d, n, include_constant)")
        if len(emb) != len(vals):
            raise InputFormatError(f"fit JSON: {len(emb)} embeddings but {len(vals)} values")
        return cls(basis, emb, vals)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def fit_g(dataset: LabeledDataset, tol: float = SYMMETRY_TOL) -> FittedDecomposition:
    """Tabulate ``g`` with ``g(embed(x)) = f(x)`` on each training orbit.

    Raises :class:`SymmetryViolation` (report attached) when the data are
    not symmetric within `tol`, since then no such ``g`` exists.
    """
    report = check_symmetry(dataset, tol)
    if not report.consistent:
        worst = report.violations[0]
        raise SymmetryViolation(
            f"{len(report.violations)} orbit(s) carry inconsistent values; first at records "
            f"{list(worst.record_indices)} with values {list(worst.values)}",
            report,
        )
    rows, vals = [], []
    for rep, idx in _group_orbits(dataset).items():
        rows.append(embed(dataset.basis, Configuration(rep)).values)
        vals.append(dataset.records[idx[0]][1])
    m = len(dataset.basis)
    return FittedDecomposition(
        dataset.basis,
        np.asarray(rows, dtype=float).reshape(-1, m),
        np.asarray(vals, dtype=float),
    )


def eval_g(fit: FittedDecomposition, z: Embedding) -> float:
    """Value of the nearest table entry (Euclidean; ties go to the lowest index)."""
    if z.basis != fit.basis:
        raise DimensionMismatch("query embedding uses a different basis than the fit")
    if len(fit) == 0:
        raise EmptyTable("fitted table is empty")
    diff = fit.embeddings - np.asarray(z.values)
    k = int(np.argmin(np.einsum("ij,ij->i", diff, diff)))
    return float(fit.values[k])


def power_sums_to_elementary(p) -> list[float]:
    """Newton's identities: ``e_k = (1/k) sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i``."""
    e = [1.0]
    for k in range(1, len(p) + 1):
        acc = 0.0
        for i in range(1, k + 1):
            term = e[k - i] * p[i - 1]
            acc += term if i % 2 else -term
        e.append(acc / k)
    return e


def _companion_roots(e: list[float]) -> np.ndarray:
    # monic t^n - e1 t^(n-1) + e2 t^(n-2) - ... ; companion in the first-row form
    n = len(e) - 1
    C = np.zeros((n, n))
    C[0, :] = [-((-1) ** k) * e[k] for k in range(1, n + 1)]
    if n > 1:
        C[1:, :-1] = np.eye(n - 1)
    return np.linalg.eigvals(C)


def _residual(coeffs: list[Fraction], t: float) -> tuple[Fraction, Fraction]:
    """Exact value and derivative at float `t`; coefficients highest-first."""
    x = Fraction(t)
    v, dv = Fraction(0), Fraction(0)
    for c in coeffs:
        dv = dv * x + v
        v = v * x + c
    return v, dv


def invert_d1(z, n: int | None = None) -> list[float]:
    """Recover the multiset ``{x_1..x_n}`` from power sums ``p_k = sum x_i^k``,
    ``k = 1..n``, sorted ascending.

    Raises :class:`NotInImage` when the power sums are not those of any
    real multiset, :class:`IllConditioned` when the estimated root error
    exceeds 1e-8 (clustered but not exactly repeated roots).
    """
    p = [float(v) for v in z]
    if n is None:
        n = len(p)
    if n < 1 or len(p) != n:
        raise DimensionMismatch(f"expected {n} power sums, got {len(p)}")
    if not all(math.isfinite(v) for v in p):
        raise NonFiniteInput("power sums must be finite")

    if not any(p):
        return [0.0] * n

    e = power_sums_to_elementary(p)
    # magnitude bound of each e_k from the same recurrence with |.|
    e_abs = [1.0]
    for k in range(1, n + 1):
        e_abs.append(sum(e_abs[k - i] * abs(p[i - 1]) for i in range(1, k + 1)) / k)
    coeffs = [Fraction((-1) ** k * e[k]) for k in range(n + 1)]

    roots = _companion_roots(e)
    if np.max(np.abs(roots.imag)) > IMAG_TOL:
        raise NotInImage(f"power sums {p} need complex points (max imaginary part {np.max(np.abs(roots.imag)):.3g})")

    unit = sys.float_info.epsilon
    xs = []
    for r in np.sort(roots.real):
        r = float(r)
        # Newton polish against the exact residual while it keeps shrinking
        val, der = _residual(coeffs, r)
        for _ in range(4):
            if der == 0 or val == 0:
                break
            cand = float(Fraction(r) - val / der)
            cval, cder = _residual(coeffs, cand)
            if abs(cval) >= abs(val):
                break
            r, val, der = cand, cval, cder
        # first-order error: coefficient perturbation at r over |p'(r)|
        scale = sum(e_abs[k] * abs(r) ** (n - k) for k in range(n + 1))
        if der == 0:
            raise IllConditioned(f"repeated root near {r:.17g}; accuracy bound {ROOT_ACCURACY} not attainable")
        err = 4 * n * unit * scale / abs(float(der))
        if err > ROOT_ACCURACY:
            raise IllConditioned(f"root near {r:.17g} has estimated error {err:.3g} > {ROOT_ACCURACY}")
        xs.append(r)
    xs.sort()

    for k in range(1, n + 1):
        got = math.fsum(x ** k for x in xs)
        bound = 1e-6 * (1.0 + math.fsum(abs(x) ** k for x in xs))
        if abs(got - p[k - 1]) > bound:
            raise NotInImage(f"recovered points reproduce p_{k} = {got!r}, expected {p[k - 1]!r}")
    return xs
