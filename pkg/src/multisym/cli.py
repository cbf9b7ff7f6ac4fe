"""``multisym`` command line.

Every subcommand wraps one library operation and reads/writes the CSV and
JSON layouts of :mod:`multisym.serialize`. Exit status: 0 on success, 2 on
usage or domain errors (including malformed input), 1 on I/O errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import serialize as ser
from .basis import enumerate_generators
from .calculus import DEFAULT_RANK_TOL, classify_rank, jacobian
from .decompose import SYMMETRY_TOL, FittedDecomposition, check_symmetry, eval_g, fit_g, invert_d1
from .embed import Configuration, Embedding, embed
from .errors import DomainError, InputFormatError, SymmetryViolation
from .geometry2x2 import FiberQuery, GridSpec, fiber, fiber_cardinality_scan, scan_to_csv
from .probes import geometric_grid, get_example, builtin_examples, holder_fit, lipschitz_ratio_sequence, loglog_pairs
from .separation import orbit_equal, quotient_distance, separating_polynomial


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _config(path) -> Configuration:
    return ser.configuration_from_csv(_read(path))


def _json(args, obj) -> str:
    return ser.dumps(obj, args.digits)


def _need_in(args):
    if args.input is None:
        raise InputFormatError(f"{args.command}: --in is required")
    return args.input


# -- handlers -----------------------------------------------------------------

def cmd_basis(args):
    b = enumerate_generators(args.d, args.n, args.include_constant)
    if args.format == "csv":
        return ser.write_csv([f"s{j + 1}" for j in range(b.d)], b.order)
    return _json(args, [list(s) for s in b.order])


def cmd_embed(args):
    x = _config(_need_in(args))
    e = embed(enumerate_generators(x.d, x.n, args.include_constant), x)
    if args.format == "json":
        return _json(args, {"basis": [list(s) for s in e.basis.order], "values": list(e.values)})
    return ser.embedding_to_csv(e, args.digits)


def cmd_jacobian(args):
    x = _config(_need_in(args))
    J = jacobian(enumerate_generators(x.d, x.n, args.include_constant), x)
    if args.format == "json":
        return _json(args, J.tolist())
    return ser.jacobian_to_csv(J, x.d, args.digits)


def cmd_rank(args):
    x = _config(_need_in(args))
    tol = DEFAULT_RANK_TOL if args.tol is None else args.tol
    rep = classify_rank(enumerate_generators(x.d, x.n, args.include_constant), x, tol, args.eps)
    return _json(args, rep.to_dict())


def _pair(args):
    if args.other is None:
        raise InputFormatError(f"{args.command}: --other is required")
    return _config(_need_in(args)), _config(args.other)


def cmd_orbit_eq(args):
    x, y = _pair(args)
    return _json(args, {"orbit_equal": orbit_equal(x, y, args.eps)})


def cmd_qdist(args):
    x, y = _pair(args)
    return _json(args, {"distance": quotient_distance(x, y)})


def cmd_separate(args):
    x, y = _pair(args)
    return _json(args, separating_polynomial(x, y).to_list())


def cmd_check_sym(args):
    ds = ser.dataset_from_csv(_read(_need_in(args)))
    tol = SYMMETRY_TOL if args.tol is None else args.tol
    return _json(args, check_symmetry(ds, tol).to_dict())


def cmd_fit_g(args):
    ds = ser.dataset_from_csv(_read(_need_in(args)), args.include_constant)
    tol = SYMMETRY_TOL if args.tol is None else args.tol
    try:
        fit = fit_g(ds, tol)
    except SymmetryViolation as exc:
        sys.stderr.write(ser.dumps(exc.report.to_dict()) + "\n")
        raise
    return _json(args, fit.to_dict())


def cmd_eval_g(args):
    try:
        raw = json.loads(_read(args.fit))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"fit JSON: {exc}") from None
    fit = FittedDecomposition.from_dict(raw)
    if args.z is not None:
        z = Embedding(fit.basis, ser.parse_number_list(args.z, "--z"))
    else:
        x = _config(_need_in(args))
        z = embed(fit.basis, x)
    return _json(args, {"g": eval_g(fit, z)})


def cmd_invert1d(args):
    if args.z is not None:
        values = ser.parse_number_list(args.z, "--z")
    else:
        e = ser.embedding_from_csv(_read(_need_in(args)))
        if e.basis.d != 1:
            raise InputFormatError(f"invert1d needs a d=1 embedding, got d={e.basis.d}")
        values = list(e.values[1:] if e.basis.include_constant else e.values)
    pts = invert_d1(values)
    if args.format == "csv":
        return ser.configuration_to_csv(Configuration([[p] for p in pts]), args.digits)
    return _json(args, {"points": pts})


def cmd_fiber(args):
    z = ser.parse_number_list(args.z, "--z")
    if len(z) != 4:
        raise InputFormatError(f"--z: expected 4 values z1,z2,z3,z4, got {len(z)}")
    return _json(args, fiber(FiberQuery(*z)).to_dict())


def cmd_fiber_scan(args):
    if args.samples is not None:
        if args.seed is None:
            raise InputFormatError("fiber-scan: --samples requires --seed")
        rng = np.random.default_rng(args.seed)
        nodes = [FiberQuery(*row) for row in rng.uniform(args.lo, args.hi, size=(args.samples, 4))]
        rows = fiber_cardinality_scan(nodes)
    else:
        rows = fiber_cardinality_scan(GridSpec(args.lo, args.hi, args.steps))
    return scan_to_csv(rows, lambda v: ser.format_number(v, args.digits))


def cmd_probe(args):
    ex = get_example(args.example)
    t = geometric_grid(args.t_start, args.t_steps)
    a, b = ex.paths(t)
    seq = lipschitz_ratio_sequence(ex.f, a, b)
    ratios = dict(zip(seq.t, seq.ratios))
    hp = ex.holder_path(t)
    lz, lf = loglog_pairs(hp, ex.anchor, ex.anchor_value)
    rows = [[tk, ratios.get(tk, math.nan), lz[k], lf[k]] for k, tk in enumerate(t)]
    summary = {"example": ex.id, "expected_exponent": ex.expected_exponent}
    try:
        summary["holder_exponent"] = holder_fit(hp, ex.anchor, ex.anchor_value).exponent
    except DomainError as exc:
        summary["holder_exponent"] = None
        summary["note"] = str(exc)
    sys.stderr.write(ser.dumps(summary) + "\n")
    return ser.write_csv(["t", "ratio", "log_dz", "log_df"], rows, args.digits)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH", help="input file ('-' for stdin)")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--digits", type=int, metavar="N", help="significant digits (default 17, round-trip)")

    def fmt(p, default):
        p.add_argument("--format", choices=("json", "csv"), default=default)

    basis_flag = argparse.ArgumentParser(add_help=False)
    basis_flag.add_argument("--include-constant", action="store_true", help="keep the constant generator")

    parser = _Parser(prog="multisym", description="Multisymmetric power-sum embeddings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basis", parents=[common, basis_flag], help="list generator exponents")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    fmt(p, "json")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("embed", parents=[common, basis_flag], help="embedding of a configuration CSV")
    fmt(p, "csv")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("jacobian", parents=[common, basis_flag], help="analytic Jacobian at a configuration")
    fmt(p, "csv")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("rank", parents=[common, basis_flag], help="Jacobian rank report")
    p.add_argument("--tol", type=float, help=f"relative singular-value threshold (default {DEFAULT_RANK_TOL})")
    p.add_argument("--eps", type=float, default=0.0, help="coincidence tolerance for points")
    p.set_defaults(func=cmd_rank)

    for name, func, helptext in (
        ("orbit-eq", cmd_orbit_eq, "are two configurations permutations of each other"),
        ("qdist", cmd_qdist, "distance between orbits"),
        ("separate", cmd_separate, "separating symmetric polynomial"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--other", metavar="PATH", help="second configuration CSV")
        if name == "orbit-eq":
            p.add_argument("--eps", type=float, default=0.0)
        p.set_defaults(func=func)

    p = sub.add_parser("check-sym", parents=[common], help="symmetry report for a dataset CSV")
    p.add_argument("--tol", type=float, help=f"allowed spread within an orbit (default {SYMMETRY_TOL})")
    p.set_defaults(func=cmd_check_sym)

    p = sub.add_parser("fit-g", parents=[common, basis_flag], help="tabulate g from a dataset CSV")
    p.add_argument("--tol", type=float, help=f"symmetry tolerance (default {SYMMETRY_TOL})")
    p.set_defaults(func=cmd_fit_g)

    p = sub.add_parser("eval-g", parents=[common], help="evaluate a fitted g")
    p.add_argument("--fit", required=True, metavar="PATH", help="JSON written by fit-g")
    p.add_argument("--z", help="comma-separated embedding values (instead of --in)")
    p.set_defaults(func=cmd_eval_g)

    p = sub.add_parser("invert1d", parents=[common], help="points on the line from their power sums")
    p.add_argument("--z", help="comma-separated power sums p1..pn (instead of --in embedding CSV)")
    fmt(p, "json")
    p.set_defaults(func=cmd_invert1d)

    p = sub.add_parser("fiber", parents=[common], help="w-fiber over (z1,z2,z3,z4) for two points in the plane")
    p.add_argument("--z", required=True, help="z1,z2,z3,z4 (use --z=-1,... for a leading minus)")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("fiber-scan", parents=[common], help="fiber case per grid node, CSV")
    p.add_argument("--lo", type=float, default=-1.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=3, help="grid values per axis")
    p.add_argument("--samples", type=int, help="random nodes instead of a grid")
    p.add_argument("--seed", type=int, help="RNG seed (required with --samples)")
    p.set_defaults(func=cmd_fiber_scan)

    p = sub.add_parser("probe", parents=[common], help="regularity probe of a built-in example, CSV")
    p.add_argument("--example", required=True, choices=sorted(builtin_examples()))
    p.add_argument("--t-start", type=float, default=2.0 ** -3)
    p.add_argument("--t-steps", type=int, default=8)
    p.set_defaults(func=cmd_probe)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _write(args, args.func(args))
    except DomainError as exc:
        sys.stderr.write(f"multisym {args.command}: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"multisym {args.command}: {exc}\n")
        return 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
