#!/usr/bin/env python3
"""Monte Carlo zero-frequency of M_β orbits started in the attractor.

Prints the convergence curve (checkpoint, mean, sd) as CSV, then a summary on stderr.
"""
import argparse
import json
import sys

from betanormal.expansions import BetaContext
from betanormal.ergodic import frequency_experiment
from betanormal.numerics import parse_real


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", default="19/10")
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("-n", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="dump the full report instead")
    a = ap.parse_args()
    ctx = BetaContext(parse_real(a.beta, decimal_as_enclosure=True))
    rep = frequency_experiment(ctx, a.samples, a.n, a.seed)
    if a.json:
        json.dump(rep.to_dict(), sys.stdout, indent=1)
        print()
        return
    print("n,mean,sd")
    for m, mean, sd in rep.curve:
        print(f"{m},{mean:.6f},{sd:.6f}")
    print(f"mean {rep.mean:.5f} sd {rep.stdev:.5f} skipped {rep.skipped} "
          f"absorption {'ok' if rep.absorption_ok else 'VIOLATED'}", file=sys.stderr)


if __name__ == "__main__":
    main()
