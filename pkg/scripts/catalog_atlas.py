#!/usr/bin/env python3
"""Print the component catalog and Thue-Morse interval atlas at a base as JSON."""
import argparse
from betanormal.components import atlas_json, build_catalog
from betanormal.expansions import BetaContext
from betanormal.numerics import parse_real


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", default="beta_T")
    ap.add_argument("--max-period", type=int, default=8)
    ap.add_argument("-k", type=int, default=6)
    a = ap.parse_args()
    ctx = BetaContext(parse_real(a.beta))
    cat = build_catalog(ctx, max_period=a.max_period, k_max=a.k)
    print(atlas_json(ctx, cat, a.k))


if __name__ == "__main__":
    main()
