"""Command-line entry point.

Exit codes: 0 success, 1 a certificate failed, 2 invalid input or request,
3 some decode input lines were malformed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .antichain import count_exact, decode, enumerate_up_to, format_element, level_counts, lower_bound
from .growth import (
    PlanError,
    SequenceDomainError,
    build_plan,
    constant_family,
    corollary_family,
    plan_for,
    random_table_family,
    read_table,
    validate,
)
from .prefixcode import codewords_iter, format_codewords
from .verify import certify, check_claim1

EXIT_OK, EXIT_CERT, EXIT_INPUT, EXIT_DECODE = 0, 1, 2, 3
GENERATE_CAP = 1 << 22
VERIFY_CAP = 1 << 14


class InputError(Exception):
    pass


def _family(args):
    family = args.family or ("table" if args.table else "constant")
    if family == "table":
        if not args.table:
            raise InputError("--family table needs --table PATH")
        try:
            return read_table(args.table)
        except (OSError, ValueError) as exc:
            raise InputError(f"{args.table}: {exc}") from None
    if args.table:
        raise InputError("--table given together with --family " + family)
    if family == "constant":
        return constant_family(3 if args.n0 is None else args.n0)
    if family == "corollary":
        try:
            return corollary_family(args.eps, n_min=args.n0, c=args.c)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if family == "random":
        return random_table_family(args.seed)
    raise InputError(f"unknown family {family!r}")


def _setup(args, need_nmax=True):
    """Family, validated and planned. Returns ``(seq, plan, n_max)``."""
    seq = _family(args)
    n_max = args.nmax
    if n_max is None and need_nmax and args.kmax is None:
        n_max = 64
    if n_max is not None and n_max < seq.n0:
        raise InputError(f"--nmax {n_max} is below n0={seq.n0}")
    report = validate(seq, max(n_max or seq.n0, seq.checked_upto))
    if not report.valid:
        raise InputError("invalid growth sequence:\n" + "\n".join(report.lines()))
    try:
        if args.kmax is not None:
            plan = build_plan(seq, args.kmax)
            if n_max is not None and plan.reach < n_max:
                raise InputError(f"--kmax {args.kmax} reaches n={plan.reach} only, below --nmax {n_max}")
        else:
            plan = plan_for(seq, n_max)
    except (PlanError, ValueError) as exc:
        raise InputError(str(exc)) from None
    return seq, plan, n_max if n_max is not None else plan.reach


def cmd_plan(args, out) -> int:
    seq, plan, _ = _setup(args)
    cert = check_claim1(plan, seq)
    if args.format == "jsonl":
        for k, ell, a, s in plan.rows():
            print(json.dumps({"k": k, "ell": ell, "a": a, "s": str(s)}), file=out)
        print(json.dumps(cert.to_json()), file=out)
    else:
        sep = "," if args.format == "csv" else "\t"
        print(f"# {seq.describe()}", file=out)
        print(sep.join(["k", "ell_k", "a_k", "s_k"]), file=out)
        for k, ell, a, s in plan.rows():
            print(sep.join([str(k), str(ell), str(a), str(s)]), file=out)
        print(f"# claim1 {cert.verdict} s_kmax={plan.s[-1].reduced()}", file=out)
    return EXIT_OK if cert.passed else EXIT_CERT


def cmd_codes(args, out) -> int:
    _, plan, _ = _setup(args)
    for line in format_codewords(codewords_iter(plan), annotate=args.annotate):
        print(line, file=out)
    return EXIT_OK


def cmd_generate(args, out) -> int:
    seq, plan, n_max = _setup(args)
    cap = GENERATE_CAP if args.cap is None else args.cap
    total = count_exact(plan, n_max)
    if total > cap:
        print(
            f"refusing to enumerate {total} sets (cap {cap}); raise --cap or use 'count'",
            file=sys.stderr,
        )
        return EXIT_INPUT
    if args.format == "csv":
        print("k,i,bits", file=out)
    for e in enumerate_up_to(plan, n_max):
        if args.format == "jsonl":
            print(json.dumps({"k": e.block.k, "i": e.block.i, "set": sorted(e.to_set())}), file=out)
        elif args.format == "csv":
            print(f"{e.block.k},{e.block.i},{e.bits}", file=out)
        else:
            print(format_element(e, "set" if args.sets else "bits"), file=out)
    return EXIT_OK


def cmd_count(args, out) -> int:
    seq, plan, n_max = _setup(args)
    counts = level_counts(plan, n_max)
    status = EXIT_OK
    if args.format == "jsonl":
        emit = lambda n, c, f, b: print(json.dumps({"n": n, "count": c, "f_n": f, "lower_bound": b}), file=out)
    else:
        print("n,count,f_n,lower_bound_2^{n-k}-1", file=out)
        emit = lambda n, c, f, b: print(f"{n},{c},{f},{b}", file=out)
    for n, c in counts.items():
        f, b = seq.value(n), lower_bound(plan, n)
        emit(n, c, f, b)
        if not c >= b >= f:
            print(f"bound violated at n={n}", file=sys.stderr)
            status = EXIT_CERT
    return status


def cmd_verify(args, out) -> int:
    seq, plan, n_max = _setup(args)
    cap = VERIFY_CAP if args.cap is None else args.cap
    certs = certify(seq, plan, n_max, cap=cap)
    for cert in certs:
        if args.format == "text":
            print(f"{cert.kind:13s} {cert.scope:28s} {cert.verdict}", file=out)
            if not cert.passed:
                print(f"  witness: {json.dumps(cert.to_json()['witness'])}", file=out)
        else:
            print(json.dumps(cert.to_json()), file=out)
    return EXIT_OK if all(c.passed for c in certs) else EXIT_CERT


def _parse_set(line: str) -> list[int]:
    tokens = line.replace(",", " ").replace("{", " ").replace("}", " ").split()
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise InputError(f"not an integer list: {line!r}") from None
    if any(v < 1 for v in values):
        raise InputError(f"elements must be positive: {line!r}")
    return values


def cmd_decode(args, out) -> int:
    source = open(args.input) if args.input else sys.stdin
    with source:
        lines = [ln.rstrip("\n") for ln in source]
    parsed: list[list[int] | InputError] = []
    for ln in lines:
        try:
            parsed.append(_parse_set(ln))
        except InputError as exc:
            parsed.append(exc)
    reach = max((max(p) for p in parsed if isinstance(p, list) and p), default=0)
    if args.nmax is None:
        args.nmax = max(reach, 1)
    args.nmax = max(args.nmax, reach)
    seq, plan, _ = _setup(args)
    status = EXIT_OK
    for p in parsed:
        if isinstance(p, InputError):
            print(f"error: {p}", file=out)
            status = EXIT_DECODE
            continue
        idx = decode(plan, p)
        print("not a member" if idx is None else str(idx), file=out)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antichain-growth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=["constant", "corollary", "table", "random"])
    common.add_argument("--table", help="sequence CSV (n,f_n rows and a footer directive)")
    common.add_argument("--eps", type=Fraction, default=Fraction(1), help="corollary exponent, e.g. 1 or 1/2")
    common.add_argument("--c", type=Fraction, default=None, help="corollary scaling constant (default: largest certified)")
    common.add_argument("--n0", type=int, default=None, help="start index (constant) or n_min (corollary)")
    common.add_argument("--seed", type=int, default=0, help="seed for --family random")
    common.add_argument("--nmax", type=int, default=None)
    common.add_argument("--kmax", type=int, default=None)
    common.add_argument("--format", choices=["text", "jsonl", "csv"], default="text")
    common.add_argument("--cap", type=int, default=None)

    p = sub.add_parser("plan", parents=[common], help="print k, ell_k, a_k, s_k and the Kraft-mass check")
    p.set_defaults(func=cmd_plan)
    p = sub.add_parser("codes", parents=[common], help="dump codewords in (k, i) order")
    p.add_argument("--annotate", action="store_true", help="prefix each line with 'k,i,'")
    p.set_defaults(func=cmd_codes)
    p = sub.add_parser("generate", parents=[common], help="stream the members inside [nmax]")
    p.add_argument("--sets", action="store_true", help="text output as {1,3,4} instead of bits")
    p.set_defaults(func=cmd_generate)
    p = sub.add_parser("count", parents=[common], help="exact level counts as CSV")
    p.set_defaults(func=cmd_count)
    p = sub.add_parser("verify", parents=[common], help="run all certificates")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("decode", parents=[common], help="find the block of each input set")
    p.add_argument("--input", help="file with one set per line (default: stdin)")
    p.set_defaults(func=cmd_decode)
    return parser


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout if out is None else out
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PlanError, SequenceDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
