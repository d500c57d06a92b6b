#!/usr/bin/env python3
"""Sample applicative terms and normalize each under both strategies,
leftmost-outermost and rightmost-innermost, comparing the normal forms.

Prints the result as JSON.  Exits 1 if the strategies ever disagree."""

import argparse
import json
import sys

from clsh.randterms import DEFAULT_SEED, confluence_experiment
from clsh.rewrite import CL_BASE, FULL


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000, help="sample size")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--max-size", type=int, default=10,
                    help="node count cap for generated terms")
    ap.add_argument("--budget", type=int, default=10_000,
                    help="step budget per normalization")
    ap.add_argument("--rules", choices=("base", "full"), default="full")
    args = ap.parse_args()

    res = confluence_experiment(n=args.n, seed=args.seed,
                                max_size=args.max_size, budget=args.budget,
                                rules=CL_BASE if args.rules == "base" else FULL)
    json.dump(res.to_json(), sys.stdout, indent=2)
    print()
    return 1 if res.counterexamples else 0


if __name__ == "__main__":
    sys.exit(main())
