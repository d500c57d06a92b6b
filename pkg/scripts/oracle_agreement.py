#!/usr/bin/env python3
"""Sample closed lambda terms, compile them to I/K/S, and compare weak
normalization against the beta engine on fresh-variable-applied spines.

Prints the result as JSON.  Exits 1 if any mismatch was found, 2 if the
nonconvergence rate exceeds the threshold."""

import argparse
import json
import sys

from clsh.randterms import DEFAULT_SEED, oracle_agreement_experiment


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000, help="sample size")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--max-size", type=int, default=12,
                    help="node count cap for generated terms")
    ap.add_argument("--budget", type=int, default=50_000,
                    help="step budget per normalization")
    ap.add_argument("--max-nonconverged", type=float, default=0.05,
                    metavar="FRAC", help="tolerated nonconvergence rate")
    args = ap.parse_args()

    res = oracle_agreement_experiment(n=args.n, seed=args.seed,
                                      max_size=args.max_size,
                                      budget=args.budget)
    json.dump(res.to_json(), sys.stdout, indent=2)
    print()
    if res.mismatches:
        return 1
    if res.nonconverged_fraction > args.max_nonconverged:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
