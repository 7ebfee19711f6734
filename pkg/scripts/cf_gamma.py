#!/usr/bin/env python3
"""Print the certified continued fraction of log 2 / log(1 + sqrt 2) with its convergents."""

import argparse

from pellsum.bigreal import GAMMA
from pellsum.reduction import convergent_bracketing, expand_cf, max_partial_quotient


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--terms", type=int, default=100)
    ap.add_argument("--bound", type=float, default=4e43)
    args = ap.parse_args()

    cf = expand_cf(GAMMA, args.terms)
    bound = int(args.bound)
    br = convergent_bracketing(cf, bound)
    print(f"certified at {cf.precision_bits} bits")
    for k, (a, (p, q)) in enumerate(zip(cf.partial_quotients, cf.convergents)):
        mark = "  <- bracket" if k in (br.lower, br.upper) else ""
        print(f"{k:4d} a={a:<6d} q={q}{mark}")
    print(f"q_{br.lower} <= {bound:.3g} < q_{br.upper}; max a_1..a_{br.upper} = {max_partial_quotient(cf, br.upper)}")


if __name__ == "__main__":
    main()
