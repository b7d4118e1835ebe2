"""Command-line front end for the solvers, generators, and certificate checker.

Exit codes: 0 success, 1 domain error (invalid space, guard exceeded, failed
check), 2 usage error.  Numeric output is printed as a decimal with a
configurable number of significant digits (--digits, default 12, or the
MMBOX_DIGITS environment variable) or as an exact fraction with --exact.
Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import spaceio
from .box import box_exact, two_point_box_oracle  # noqa: F401 (oracle re-export)
from .comb import CombParams, build_comb, comb_witness
from .core import (
    FiniteMMSpace,
    PreconditionError,
    Relation,
    SizeGuardError,
    SpaceValidationError,
    distortion,
    mass_on,
    separation,
    to_fraction,
    validate,
)
from .gh import gh_exact
from .moduli import (
    canonical_form,
    metric_vector_of,
    phi_b,
    phi_gh,
    uniform_lift,
    weight_vector_of,
)
from .transport import is_coupling, prokhorov

DEFAULT_DIGITS = 12


def format_value(value, exact: bool = False, digits: int = DEFAULT_DIGITS) -> str:
    if value == math.inf:
        return "inf"
    q = to_fraction(value)
    if exact:
        return str(q)
    if q == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return format(d.normalize(), "f")


def _digits(args) -> int:
    if args.digits is not None:
        return args.digits
    env = os.environ.get("MMBOX_DIGITS")
    return int(env) if env else DEFAULT_DIGITS


def _emit(value, args) -> None:
    print(format_value(value, exact=args.exact, digits=_digits(args)))


def _write_or_print(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_pairs(text: str) -> Relation:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        i, _, j = chunk.partition(":")
        pairs.append((int(i), int(j)))
    return Relation.from_pairs(pairs)


def _parse_vector(text: str) -> list[Fraction]:
    return [to_fraction(chunk) for chunk in text.split(",") if chunk.strip()]


def _require_mm(space, name: str) -> FiniteMMSpace:
    if not isinstance(space, FiniteMMSpace):
        raise ValueError(f"{name} needs a 'mass' field for this command")
    return space


def cmd_validate(args) -> int:
    space = spaceio.load_space(args.file)
    violations = validate(space)
    if not violations:
        print("valid")
        return 0
    for v in violations:
        print(f"violation {v.describe()}")
    return 1


def cmd_sep(args) -> int:
    space = spaceio.load_space(args.file)
    _emit(separation(space), args)
    return 0


def cmd_dis(args) -> int:
    x = spaceio.load_space(args.fileX)
    y = spaceio.load_space(args.fileY)
    rel = _parse_pairs(args.pairs)
    _emit(distortion(rel, x, y), args)
    return 0


def cmd_gh(args) -> int:
    x = spaceio.load_space(args.fileX)
    y = spaceio.load_space(args.fileY)
    value, witness = gh_exact(x, y, guard_n=args.guard_n, prune=args.prune)
    _emit(value, args)
    if args.witness:
        print("witness: " + " ".join(f"{i}:{j}" for i, j in witness.sorted_pairs()))
    return 0


def cmd_box(args) -> int:
    x = _require_mm(spaceio.load_space(args.fileX), args.fileX)
    y = _require_mm(spaceio.load_space(args.fileY), args.fileY)
    if args.check_certificate:
        return _check_certificate(x, y, args)
    value, coupling, witness = box_exact(x, y, guard_cells=args.guard_n)
    _emit(value, args)
    if args.witness:
        sys.stdout.write(spaceio.dumps_certificate(coupling, witness, value))
    return 0


def _check_certificate(x: FiniteMMSpace, y: FiniteMMSpace, args) -> int:
    coupling, rel, claimed = spaceio.load_certificate(args.check_certificate)
    if coupling.shape != (x.n, y.n):
        print(
            f"certificate rejected: pi has shape {coupling.shape}, "
            f"expected ({x.n}, {y.n})"
        )
        return 1
    if not is_coupling(coupling, x.mass, y.mass):
        print("certificate rejected: pi is not a coupling of the two masses")
        return 1
    value = max(1 - mass_on(coupling, rel), distortion(rel, x, y))
    if value != claimed:
        print(
            "certificate rejected: recomputed value "
            f"{format_value(value, args.exact, _digits(args))} != claimed "
            f"{format_value(claimed, args.exact, _digits(args))}"
        )
        return 1
    print(
        "certificate ok: box <= "
        + format_value(value, exact=args.exact, digits=_digits(args))
    )
    return 0


def cmd_prokhorov(args) -> int:
    z = spaceio.load_space(args.fileZ)
    mu = _parse_vector(args.mu)
    nu = _parse_vector(args.nu)
    _emit(prokhorov(mu, nu, z, guard_n=args.guard_n), args)
    return 0


def cmd_canonicalize(args) -> int:
    space = spaceio.load_space(args.file)
    if isinstance(space, FiniteMMSpace):
        mv, wv = canonical_form(
            metric_vector_of(space), weight_vector_of(space), guard_n=args.guard_n
        )
        out = phi_b(mv, wv)
    else:
        mv = canonical_form(metric_vector_of(space), guard_n=args.guard_n)
        out = phi_gh(mv)
    _write_or_print(spaceio.dumps_space(out), args.output)
    return 0


def cmd_lift(args) -> int:
    space = spaceio.load_space(args.file)
    if isinstance(space, FiniteMMSpace):
        space = space.space
    _write_or_print(spaceio.dumps_space(uniform_lift(space)), args.output)
    return 0


def cmd_comb_build(args) -> int:
    t = _parse_vector(args.t)
    params = CombParams.make(t, args.mesh, depth=args.depth)
    comb = build_comb(params)
    _write_or_print(spaceio.dumps_space(comb.mm), args.output)
    return 0


def cmd_comb_witness(args) -> int:
    s = _parse_vector(args.s)
    t = _parse_vector(args.t)
    epsilon = to_fraction(args.epsilon) if args.epsilon is not None else None
    coupling, rel, eps = comb_witness(s, t, args.mesh, epsilon=epsilon)
    comb_s = build_comb(CombParams.make(s, args.mesh))
    comb_t = build_comb(CombParams.make(t, args.mesh))
    dis = distortion(rel, comb_s.mm, comb_t.mm)
    claimed = max(1 - mass_on(coupling, rel), dis)
    if args.out_s:
        spaceio.dump_space(comb_s.mm, args.out_s)
    if args.out_t:
        spaceio.dump_space(comb_t.mm, args.out_t)
    print(f"bound: {format_value(eps, args.exact, _digits(args))}")
    print(f"distortion: {format_value(dis, args.exact, _digits(args))}")
    _write_or_print(spaceio.dumps_certificate(coupling, rel, claimed), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmbox",
        description="Exact distances between finite metric (measure) spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, guard_default=None, guard_help="size guard"):
        p.add_argument("--exact", action="store_true", help="print exact fractions")
        p.add_argument(
            "--digits",
            type=int,
            default=None,
            help=f"significant digits for decimal output (default {DEFAULT_DIGITS} "
            "or MMBOX_DIGITS)",
        )
        if guard_default is not None:
            p.add_argument(
                "--guard-n", type=int, default=guard_default, help=guard_help
            )
        p.add_argument(
            "--threads",
            type=int,
            default=1,
            help="worker budget; results are identical at any value",
        )

    p = sub.add_parser("validate", help="report invariant violations of a space file")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sep", help="separation (smallest positive distance)")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_sep)

    p = sub.add_parser("dis", help="distortion of a relation between two spaces")
    p.add_argument("fileX")
    p.add_argument("fileY")
    p.add_argument(
        "--pairs", required=True, help="relation as comma-separated i:j index pairs"
    )
    add_common(p)
    p.set_defaults(func=cmd_dis)

    p = sub.add_parser("gh", help="exact Gromov-Hausdorff distance")
    p.add_argument("fileX")
    p.add_argument("fileY")
    p.add_argument("--witness", action="store_true", help="also print a minimizer")
    p.add_argument(
        "--prune",
        action="store_true",
        help="branch-and-bound search (identical result, faster on larger inputs)",
    )
    add_common(p, guard_default=7, guard_help="max points per space (default 7)")
    p.set_defaults(func=cmd_gh)

    p = sub.add_parser("box", help="exact box distance between mm-space files")
    p.add_argument("fileX")
    p.add_argument("fileY")
    p.add_argument(
        "--witness", action="store_true", help="also print the (pi, S) certificate"
    )
    p.add_argument(
        "--check-certificate",
        metavar="CERT",
        help="verify a certificate file instead of solving",
    )
    add_common(p, guard_default=36, guard_help="max |X|*|Y| cells (default 36)")
    p.set_defaults(func=cmd_box)

    p = sub.add_parser("prokhorov", help="Prokhorov distance on a common space")
    p.add_argument("fileZ")
    p.add_argument("--mu", required=True, help="first mass vector, comma-separated")
    p.add_argument("--nu", required=True, help="second mass vector, comma-separated")
    add_common(p, guard_default=12, guard_help="max points (default 12)")
    p.set_defaults(func=cmd_prokhorov)

    p = sub.add_parser("canonicalize", help="canonical relabeling of a space file")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    add_common(p, guard_default=8, guard_help="max points (default 8)")
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("lift", help="attach the uniform measure to a space file")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    add_common(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("comb", help="comb-space generators")
    comb_sub = p.add_subparsers(dest="comb_command", required=True)

    pb = comb_sub.add_parser("build", help="discretize a comb space")
    pb.add_argument("--t", required=True, help="tooth coordinates, comma-separated")
    pb.add_argument("--depth", type=int, default=None, help="tooth count")
    pb.add_argument("--mesh", type=int, required=True, help="points per tooth")
    pb.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    add_common(pb)
    pb.set_defaults(func=cmd_comb_build)

    pw = comb_sub.add_parser(
        "witness", help="block-matching certificate between two combs"
    )
    pw.add_argument("--s", required=True, help="first coordinate sequence")
    pw.add_argument("--t", required=True, help="second coordinate sequence")
    pw.add_argument("--mesh", type=int, required=True, help="points per tooth")
    pw.add_argument("--epsilon", default=None, help="requested distortion bound")
    pw.add_argument("--out-s", default=None, help="write the first comb space file")
    pw.add_argument("--out-t", default=None, help="write the second comb space file")
    pw.add_argument(
        "-o", "--output", default=None, help="certificate path (default stdout)"
    )
    add_common(pw)
    pw.set_defaults(func=cmd_comb_witness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except (
        SpaceValidationError,
        SizeGuardError,
        PreconditionError,
        spaceio.FormatError,
        ValueError,
        IndexError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
