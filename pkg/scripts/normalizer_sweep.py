#!/usr/bin/env python3
"""Run the digit-balancing normalizer on seeded random points of the switch region
and tabulate fallbacks, prefix imbalance and final zero frequency per run."""
import argparse
import random
from fractions import Fraction

from betanormal.expansions import BetaContext
from betanormal.normalizer import C_BOUND, simply_normal_digits
from betanormal.numerics import Rational, parse_real
from betanormal.words import digit_stats


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", action="append", default=None,
                    help="repeatable; default 17/10, beta_KL, 179/100, beta_T")
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("-n", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()
    print("beta,run,x_num_bits,fallbacks,boundary,max_imbalance,K,freq0,stages")
    for spec in a.beta or ["17/10", "beta_KL", "179/100", "beta_T"]:
        ctx = BetaContext(parse_real(spec))
        lo, hi = ctx.switch.lo.upper, ctx.switch.hi.lower
        rng = random.Random(a.seed)
        for i in range(a.runs):
            u = Fraction(rng.getrandbits(64), 1 << 64)
            x = Rational(lo + u * (hi - lo))
            w, st = simply_normal_digits(x, ctx, a.n)
            s = digit_stats(w)
            flag = "" if st.fallback_events or s.max_prefix_imbalance <= C_BOUND + st.K else "!"
            print(f"{spec},{i},{x.value.denominator.bit_length()},{st.fallback_events},"
                  f"{st.boundary_events},{s.max_prefix_imbalance}{flag},{st.K},"
                  f"{s.zeros / a.n:.5f},{len(st.stage_ends)}")


if __name__ == "__main__":
    main()
