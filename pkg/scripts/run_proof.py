#!/usr/bin/env python3
"""Replay the proof, write the certificate, re-verify it, and print a short summary."""

import argparse
import logging
import time

from pellsum.pipeline import PipelineConfig, emit_report, run_pipeline, verify_certificate_report
from pellsum.search import CLAIMED_SOLUTIONS, SolutionTuple


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="certificate.json")
    ap.add_argument("--text", default=None, help="also write the text narrative here")
    ap.add_argument("--include-4224", action="store_true",
                    help="compare against the claimed list plus (4, 2, 2, 4)")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    expected = CLAIMED_SOLUTIONS
    if args.include_4224:
        expected = expected | {SolutionTuple(4, 2, 2, 4)}
    t = time.perf_counter()
    cert = run_pipeline(PipelineConfig(expected_solutions=expected))
    elapsed = time.perf_counter() - t
    data = emit_report(cert)
    with open(args.out, "wb") as fh:
        fh.write(data)
    if args.text:
        with open(args.text, "wb") as fh:
            fh.write(emit_report(cert, "text"))

    for name in ("reduce_n_minus_m", "reduce_n_minus_ell", "reduce_n"):
        rec = cert.stage(name)
        print(f"{name:20s} {len(rec['records']):5d} instances  {rec['note']}")
    print(f"solutions: {cert.final_solution_set}")
    print(f"verdict: {cert.verdict} ({elapsed:.1f} s)")
    if cert.failure:
        print(f"  {cert.failure['reason']}")
    t = time.perf_counter()
    problems = verify_certificate_report(data)
    print(f"re-verification: {'ok' if not problems else problems} ({time.perf_counter() - t:.1f} s)")


if __name__ == "__main__":
    main()
