"""Command-line front end: ``welldoc {generate,decide,verify,returns,prng}``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .criterion import Verdict, decide_welldoc
from .empirical import (
    DEFAULT_HORIZON,
    DEFAULT_LMAX,
    DEFAULT_MMAX,
    EmpiricalVerdict,
    empirical_welldoc,
)
from .errors import DomainError, InputError, WelldocError
from .prng import CombinedStream, LcgParams, tuple_coverage
from .returns import returns_by_scan, returns_complete
from .words import PrefixStream, format_word, parse_morphism, parse_word

EXIT_ERROR_INPUT = 2
EXIT_ERROR_DOMAIN = 3
EXIT_ERROR_INTERNAL = 5

DECIDE_EXIT = {
    Verdict.WELLDOC: 0,
    Verdict.NOT_WELLDOC: 1,
    Verdict.NOT_RECURRENT: 1,
}
VERIFY_EXIT = {
    EmpiricalVerdict.CONSISTENT: 0,
    EmpiricalVerdict.FALSIFIED: 1,
    EmpiricalVerdict.INCONCLUSIVE: 4,
}


def default_horizon() -> int:
    value = os.environ.get("WELLDOC_HORIZON")
    if value is None:
        return DEFAULT_HORIZON
    try:
        return int(value)
    except ValueError:
        raise InputError(f"WELLDOC_HORIZON={value!r} is not an integer") from None


def _load_morphism(args):
    if (args.morphism is None) == (args.file is None):
        raise InputError("give exactly one of -m/--morphism and -f/--file")
    if args.file is not None:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from None
    else:
        text = args.morphism
    return parse_morphism(text)


def _horizon(args) -> int:
    n = args.horizon if args.horizon is not None else default_horizon()
    if n < 0:
        raise InputError("horizon must be non-negative")
    return n


class _Output:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        if self.path is None:
            self.fh = None
            return sys.stdout
        self.fh = open(self.path, "w")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()


def _emit(args, payload: dict, text: str):
    with _Output(args.out) as out:
        if args.format == "json":
            json.dump(payload, out, indent=2)
            out.write("\n")
        else:
            out.write(text.rstrip("\n") + "\n")


def cmd_generate(args) -> int:
    phi = _load_morphism(args)
    n = _horizon(args)
    word = PrefixStream(phi, 0).prefix(n)
    with _Output(args.out) as out:
        out.write(format_word(word, phi.sigma) + "\n")
    return 0


def _decide_text(v) -> str:
    lines = [
        f"morphism: {v.morphism}",
        f"verdict: {v.verdict.value}",
        f"recurrent: {str(v.recurrent).lower()}",
        f"det: {v.det}",
    ]
    if v.returns is not None:
        sigma = v.morphism.sigma
        lines.append("returns: " + " ".join(format_word(r, sigma) for r in v.returns.words))
    if v.generation is not None:
        g = v.generation
        line = f"generates_Z: {str(g['answer']).lower()} (primes checked {g['primes_checked']}"
        if g["failing_prime"] is not None:
            line += f", fails at {g['failing_prime']}"
        lines.append(line + ")")
    lines.extend(f"reason: {r}" for r in v.reasons)
    return "\n".join(lines)


def cmd_decide(args) -> int:
    phi = _load_morphism(args)
    v = decide_welldoc(phi)
    _emit(args, v.to_dict(), _decide_text(v))
    return DECIDE_EXIT[v.verdict]


def _verify_text(report) -> str:
    lines = [f"morphism: {report.morphism}", f"verdict: {report.verdict.value}",
             f"horizon: {report.horizon}  lmax: {report.lmax}  mmax: {report.mmax}"]
    w = report.witness
    if w is not None:
        u, m, vec = w
        lines.append(f"witness: u={format_word(u, report.morphism.sigma)} m={m} missing={vec}")
    for c in report.inconclusive:
        lines.append(f"inconclusive: u={format_word(c.u, c.sigma)} m={c.m} coverage={c.coverage:.3f}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    phi = _load_morphism(args)
    if args.mmax < 1 or args.lmax < 1:
        raise InputError("--lmax and --mmax must be positive")
    horizon = _horizon(args)
    if horizon < 1:
        raise InputError("horizon must be at least 1")
    report = empirical_welldoc(phi, args.lmax, args.mmax, horizon)
    _emit(args, report.to_dict(), _verify_text(report))
    return VERIFY_EXIT[report.verdict]


def cmd_returns(args) -> int:
    phi = _load_morphism(args)
    if args.target is not None or args.horizon is not None:
        target = parse_word(args.target or "0", phi.sigma)
        rs = returns_by_scan(PrefixStream(phi, 0), target, _horizon(args))
    else:
        rs = returns_complete(phi)
    text = "\n".join(format_word(r, phi.sigma) for r in rs.words)
    _emit(args, rs.to_dict(), text + f"\ncompleteness: {rs.completeness}")
    return 0


def _byte_width(m: int) -> int:
    for width in (1, 2, 4, 8):
        if m - 1 < 256 ** width:
            return width
    raise InputError("modulus too large for binary output")


def cmd_prng(args) -> int:
    phi = _load_morphism(args)
    gens = [LcgParams.parse(t) for t in args.lcg or []]
    if len(gens) != phi.sigma:
        raise InputError(f"need {phi.sigma} --lcg quadruples, got {len(gens)}")
    n = _horizon(args)
    values = CombinedStream(phi, gens).take(n)
    summary = None
    if args.coverage is not None:
        cov, missing = tuple_coverage(values, args.coverage, n, gens[0].m)
        summary = f"coverage d={args.coverage}: {cov:.3f} (missing {missing})"
    if args.binary:
        width = _byte_width(gens[0].m)
        data = b"".join(v.to_bytes(width, "little") for v in values)
        if args.out is None:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        else:
            with open(args.out, "wb") as fh:
                fh.write(data)
        if summary:
            print(summary, file=sys.stderr)
        return 0
    with _Output(args.out) as out:
        for v in values:
            out.write(f"{v}\n")
        if summary:
            out.write(summary + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="welldoc",
        description="Morphic words: WELLDOC decision, empirical checks, combined LCGs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("-m", "--morphism", help="inline morphism, e.g. '2;0->01;1->0' or JSON")
        p.add_argument("-f", "--file", help="file holding the morphism")
        p.add_argument("-n", "--horizon", type=int, default=None,
                       help=f"prefix length / sample count (default {DEFAULT_HORIZON}, "
                            "or $WELLDOC_HORIZON)")
        p.add_argument("--out", help="write output here instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("generate", help="print a prefix of the fixed point")
    common(p, fmt=False)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("decide", help="decide WELLDOC by the determinant/returns criterion")
    common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", help="brute-force coverage of X_{u,m}")
    common(p)
    p.add_argument("--lmax", type=int, default=DEFAULT_LMAX)
    p.add_argument("--mmax", type=int, default=DEFAULT_MMAX)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("returns", help="return words (certified for 0, or scanned)")
    common(p)
    p.add_argument("--target", help="scan returns to this factor instead of certifying")
    p.set_defaults(func=cmd_returns)

    p = sub.add_parser("prng", help="emit the word-combined LCG stream")
    common(p, fmt=False)
    p.add_argument("--lcg", action="append", metavar="a,c,m,seed",
                   help="generator for the next letter (repeat once per letter)")
    p.add_argument("--coverage", type=int, metavar="D",
                   help="append the overlapping D-tuple coverage")
    p.add_argument("--binary", action="store_true",
                   help="write little-endian unsigned integers instead of text")
    p.set_defaults(func=cmd_prng)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR_DOMAIN
    except WelldocError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
