"""Command line: ``pellsum run|verify|search|cf``.

Exit status is 0 for verified/true, 1 for failed/false and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from decimal import InvalidOperation
from fractions import Fraction

from .bigreal import GAMMA, PrecisionExhausted, PrecisionPolicy, parse_decimal
from .pipeline import STAGES, PipelineConfig, emit_report, run_pipeline, verify_certificate_report
from .reduction import convergent_bracketing, expand_cf, max_partial_quotient
from .search import CLAIMED_SOLUTIONS, brute_force


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def _decimal_int(text: str) -> int:
    """Accept '4e43' or '40000...'; the value must be a positive integer."""
    try:
        value = parse_decimal(text)
    except (InvalidOperation, ValueError):
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}")
    if value.denominator != 1 or value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=_positive_int, default=192,
                        help="initial working precision in bits")
    common.add_argument("--max-precision-bits", type=_positive_int, default=8192,
                        help="precision ceiling before giving up")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="pellsum", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="replay the proof and emit a certificate")
    run.add_argument("--m-big", type=_decimal_int, default=4 * 10**43,
                     help="reduction constant M (default 4e43)")
    run.add_argument("--n-max", type=_positive_int, default=150,
                     help="brute-force threshold (final search uses max of this and the reduced bound)")
    run.add_argument("--stage", choices=STAGES, default=None,
                     help="stop after this stage (debugging)")

    ver = sub.add_parser("verify", parents=[common], help="re-check a certificate file")
    ver.add_argument("certificate", help="path to a json certificate, or - for stdin")

    search = sub.add_parser("search", parents=[common], help="enumerate solutions with n <= N")
    search.add_argument("--n-max", type=_positive_int, default=150)

    cf = sub.add_parser("cf", parents=[common], help="continued fraction of log 2 / log alpha")
    cf.add_argument("--terms", type=_positive_int, default=100)
    cf.add_argument("--m-big", type=_decimal_int, default=4 * 10**43,
                    help="report the convergents bracketing this value")
    return p


def _write(args, payload: bytes) -> None:
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload.decode())
        sys.stdout.flush()


def _policy(args, parser) -> PrecisionPolicy:
    try:
        return PrecisionPolicy(args.precision_bits, args.max_precision_bits)
    except ValueError as exc:
        parser.error(str(exc))


def cmd_run(args, parser) -> int:
    try:
        cfg = PipelineConfig(n_threshold=args.n_max, m_big=args.m_big,
                             precision=_policy(args, parser), output_format=args.format)
    except ValueError as exc:
        parser.error(str(exc))
    cert = run_pipeline(cfg, stop_after=args.stage)
    _write(args, emit_report(cert, args.format))
    if cert.verdict == "verified":
        return 0
    return 0 if cert.verdict == "incomplete" else 1


def cmd_verify(args, parser) -> int:
    try:
        if args.certificate == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(args.certificate, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        parser.error(f"cannot read certificate: {exc}")
    try:
        problems = verify_certificate_report(data)
    except ValueError as exc:
        parser.error(str(exc))
    ok = not problems
    if args.format == "json":
        payload = json.dumps({"valid": ok, "problems": problems}, indent=1) + "\n"
    else:
        payload = ("certificate valid\n" if ok else
                   "certificate INVALID\n" + "".join(f"  {p}\n" for p in problems))
    _write(args, payload.encode())
    return 0 if ok else 1


def cmd_search(args, parser) -> int:
    sols = brute_force(args.n_max)
    if args.format == "json":
        doc = {
            "n_max": str(args.n_max),
            "solutions": [[str(x) for x in t.as_list()] for t in sols],
            "not_in_claimed_list": [[str(x) for x in t.as_list()] for t in sols if t not in CLAIMED_SOLUTIONS],
        }
        payload = json.dumps(doc, indent=1) + "\n"
    else:
        lines = [f"(n, m, l, a) with n <= {args.n_max}: {len(sols)}"]
        for t in sols:
            mark = "" if t in CLAIMED_SOLUTIONS else "   <- not in the claimed list"
            lines.append(f"  {tuple(t.as_list())}{mark}")
        payload = "\n".join(lines) + "\n"
    _write(args, payload.encode())
    return 0


def cmd_cf(args, parser) -> int:
    try:
        cf = expand_cf(GAMMA, args.terms, _policy(args, parser))
    except PrecisionExhausted as exc:
        print(f"pellsum: {exc}", file=sys.stderr)
        return 1
    doc: dict = {
        "value": "log 2 / log alpha",
        "bits": str(cf.precision_bits),
        "partial_quotients": [str(a) for a in cf.partial_quotients],
    }
    try:
        br = convergent_bracketing(cf, args.m_big)
        doc["bracket"] = {"bound": str(args.m_big), "lower": str(br.lower), "upper": str(br.upper),
                          "tie": br.tie, "max_a_1_to_upper": str(max_partial_quotient(cf, br.upper))}
    except LookupError:
        doc["bracket"] = None
    if args.format == "json":
        payload = json.dumps(doc, indent=1) + "\n"
    else:
        a = cf.partial_quotients
        lines = [f"gamma = [{a[0]}; {', '.join(map(str, a[1:]))}]  ({cf.precision_bits} bits)"]
        if doc["bracket"]:
            b = doc["bracket"]
            lines.append(f"q_{b['lower']} <= {b['bound']} < q_{b['upper']}, max a_1..a_{b['upper']} = {b['max_a_1_to_upper']}")
        payload = "\n".join(lines) + "\n"
    _write(args, payload.encode())
    return 0


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "search": cmd_search, "cf": cmd_cf}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
