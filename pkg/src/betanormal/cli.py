"""Command-line front end.  Exit codes: 0 success, 1 failed assertion or
runtime failure, 2 usage error."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import components, ergodic, expansions, normalizer
from .expansions import BetaContext, CountLimits, InvalidBase, OutOfRange
from .numerics import (
    DEFAULT_PRECISION, NAMED_BASES, AlgebraicReal, IntPolynomial, PrecisionExhausted,
    Rational, Real, parse_real,
)
from .words import EPSeq, Word, WordSyntaxError, digit_stats, parse_seq

MODES = ("greedy", "lazy", "quasi-greedy", "mbeta", "simply-normal")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    beta_spec: Optional[str] = None     # None means beta_T
    beta_poly: Optional[str] = None
    bracket: Optional[str] = None
    precision_bits: int = DEFAULT_PRECISION
    n: int = 64
    max_period: int = 8
    k_max: int = 6
    fallback_policy: str = "GreedyContinue"
    output: str = "plain"
    seed: int = 0

    def base(self) -> Real:
        if self.beta_poly is not None:
            if self.beta_spec is not None:
                raise UsageError("--beta and --beta-poly are mutually exclusive")
            if self.bracket is None:
                raise UsageError("--beta-poly needs --bracket LO,HI")
            try:
                coeffs = [int(c) for c in self.beta_poly.split(",")]
                lo, hi = (Fraction(v) for v in self.bracket.split(","))
                return AlgebraicReal(IntPolynomial(coeffs), lo, hi)
            except ValueError as e:
                raise UsageError(f"bad polynomial base: {e}") from None
        if self.bracket is not None:
            raise UsageError("--bracket only applies with --beta-poly")
        try:
            return parse_real(self.beta_spec or "beta_T", decimal_as_enclosure=True)
        except (ValueError, ZeroDivisionError):
            known = ", ".join(NAMED_BASES)
            raise UsageError(f"cannot parse --beta {self.beta_spec!r} (named bases: {known})") from None

    def context(self) -> BetaContext:
        try:
            return BetaContext(self.base(), precision=self.precision_bits)
        except InvalidBase as e:
            raise UsageError(str(e)) from None


def parse_point(text: str, ctx: BetaContext):
    """A rational or decimal (taken exactly), or ``seq:`` followed by digit syntax."""
    t = text.strip()
    if t.startswith("seq:"):
        try:
            s = parse_seq(t[4:])
        except WordSyntaxError as e:
            raise UsageError(str(e)) from None
        return expansions.seq_real(s, ctx, t)
    try:
        return Rational(Fraction(t), name=t)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse x = {text!r}") from None


# ---------------------------------------------------------------------------
# output helpers

def _emit(cfg: CliConfig, obj: dict, plain: str, out) -> None:
    if cfg.output == "json":
        out.write(json.dumps(obj, indent=2, ensure_ascii=False, default=str) + "\n")
    else:
        out.write(plain.rstrip("\n") + "\n")


def _no_csv(cfg: CliConfig, cmd: str) -> None:
    if cfg.output == "csv":
        raise UsageError(f"csv output is not available for {cmd}")


def _digit_summary(w: Word) -> dict:
    st = digit_stats(w)
    return {"n": st.length, "zeros": st.zeros, "ones": st.ones,
            "freq0": round(st.freq0, 12) if st.length else None,
            "max_prefix_imbalance": st.max_prefix_imbalance}


# ---------------------------------------------------------------------------
# subcommands

def cmd_constants(cfg, args, out) -> int:
    _no_csv(cfg, "constants")
    rows = {}
    for name in ("beta_KL", "beta_T", "golden", "multinacci4", "example43"):
        e = NAMED_BASES[name].enclosure(cfg.precision_bits)
        rows[name] = {"decimal": e.decimal(args.digits),
                      "radius_log2": round(e.width_log2(), 1)}
    plain = "\n".join(f"{k:12s} {v['decimal']}" for k, v in rows.items())
    _emit(cfg, rows, plain, out)
    return 0


def cmd_alpha(cfg, args, out) -> int:
    _no_csv(cfg, "alpha")
    ctx = cfg.context()
    w = ctx.alpha(args.n)
    _emit(cfg, {"beta": ctx.name, "alpha": str(w)}, str(w), out)
    return 0


def cmd_expand(cfg, args, out) -> int:
    ctx = cfg.context()
    n = args.n
    extra = {}
    if args.mode == "quasi-greedy":
        w = ctx.alpha(n)
    else:
        if args.x is None:
            raise UsageError(f"--x is required for mode {args.mode}")
        x = parse_point(args.x, ctx)
        if args.mode == "greedy":
            w = expansions.greedy_expansion(x, ctx, n)
        elif args.mode == "lazy":
            w = expansions.lazy_expansion(x, ctx, n)
        elif args.mode == "mbeta":
            w = ergodic.mbeta_digits(x, ctx, n)
        else:
            w, st = normalizer.simply_normal_digits(x, ctx, n, _normalizer_config(cfg, args))
            extra = {"fallback_events": st.fallback_events, "K": st.K}
    summary = {"mode": args.mode, "beta": ctx.name, "x": args.x, **_digit_summary(w), **extra}
    if cfg.output == "csv":
        out.write("index,digit\n")
        out.writelines(f"{i + 1},{d}\n" for i, d in enumerate(w))
        return 0
    summary["digits"] = str(w)
    plain = str(w) + "\n" + " ".join(f"{k}={v}" for k, v in summary.items()
                                     if k not in ("digits", "mode", "x"))
    _emit(cfg, summary, plain, out)
    return 0


def cmd_univoque(cfg, args, out) -> int:
    _no_csv(cfg, "univoque")
    ctx = cfg.context()
    if (args.seq is None) == (args.x is None):
        raise UsageError("give exactly one of --seq and --x")
    if args.seq is not None:
        try:
            v = expansions.is_univoque_seq(parse_seq(args.seq), ctx, args.depth)
        except WordSyntaxError as e:
            raise UsageError(str(e)) from None
    else:
        v = expansions.is_point_univoque(parse_point(args.x, ctx), ctx, args.depth)
    _emit(cfg, {"beta": ctx.name, "verdict": v.value}, v.value, out)
    return 0


def cmd_enumerate(cfg, args, out) -> int:
    _no_csv(cfg, "enumerate")
    ctx = cfg.context()
    tree = expansions.enumerate_expansions(parse_point(args.x, ctx), ctx, args.depth)
    leaves = [str(n.prefix) for n in tree.leaves()]
    obj = {"beta": ctx.name, "x": args.x, "depth": args.depth, "leaf_count": len(leaves),
           "branch_nodes": len(tree.branch_nodes()), "leaves": leaves}
    plain = f"leaves={len(leaves)} branch_nodes={obj['branch_nodes']}\n" + "\n".join(leaves)
    _emit(cfg, obj, plain, out)
    return 0


def cmd_count(cfg, args, out) -> int:
    _no_csv(cfg, "count")
    ctx = cfg.context()
    limits = CountLimits(args.univoque_depth, args.max_branch_nodes, args.max_path_length)
    res = expansions.count_expansions(parse_point(args.x, ctx), ctx, limits)
    obj = {"beta": ctx.name, "x": args.x, **res.to_dict()}
    plain = str(res) + "".join(f"\n{w}" for w in res.expansions)
    _emit(cfg, obj, plain, out)
    return 0


def cmd_catalog(cfg, args, out) -> int:
    _no_csv(cfg, "catalog")
    ctx = cfg.context()
    recs = components.build_catalog(ctx, args.max_period, args.k, verify=args.verify)
    out.write(components.atlas_json(ctx, recs, args.k) + "\n")
    return 0


def cmd_simulate(cfg, args, out) -> int:
    ctx = cfg.context()
    rep = ergodic.frequency_experiment(ctx, args.samples, args.n, args.seed)
    if cfg.output == "csv":
        out.write("checkpoint,mean_freq0,stdev_freq0\n")
        out.writelines(f"{m},{mu:.12f},{sd:.12f}\n" for m, mu, sd in rep.curve)
        return 0 if rep.absorption_ok else 1
    plain = (f"beta={rep.beta} samples={rep.samples} n={rep.n} seed={rep.seed}\n"
             f"mean_freq0={rep.mean:.6f} stdev={rep.stdev:.6f} skipped={rep.skipped} "
             f"absorption_ok={rep.absorption_ok}\n"
             + "\n".join(f"checkpoint {m}: mean={mu:.6f} stdev={sd:.6f}" for m, mu, sd in rep.curve))
    _emit(cfg, rep.to_dict(), plain, out)
    return 0 if rep.absorption_ok else 1


def _assertion_lines(rep: dict) -> str:
    return "\n".join(f"{'PASS' if a['passed'] else 'FAIL'} {a['name']}"
                     + (f" ({a['detail']})" if a["detail"] else "") for a in rep["assertions"])


def cmd_verify(cfg, args, out) -> int:
    if args.example == "example4_2":
        _no_csv(cfg, "verify example4_2")
        try:
            rep = ergodic.verify_example_multinacci(args.k)
        except ergodic.Mismatch as e:
            sys.stderr.write(f"FAIL {e}\n")
            return 1
        _emit(cfg, rep, _assertion_lines(rep), out)
        return 0 if rep["ok"] else 1
    try:
        rep, table = ergodic.verify_example_continuum()
    except ergodic.OrbitEntersSwitch as e:
        sys.stderr.write(f"FAIL {e}\n")
        return 1
    if cfg.output == "json":
        rep["csv"] = table
        _emit(cfg, rep, "", out)
    else:
        # the table goes to stdout, the assertion report to stderr
        out.write(table)
        sys.stderr.write(_assertion_lines(rep) + "\n")
    return 0 if rep["ok"] else 1


def _normalizer_config(cfg: CliConfig, args) -> normalizer.NormalizerConfig:
    return normalizer.NormalizerConfig(max_period=cfg.max_period, k_max=cfg.k_max,
                                       discover=not getattr(args, "no_discover", False),
                                       fallback_policy=cfg.fallback_policy)


def cmd_normalize(cfg, args, out) -> int:
    _no_csv(cfg, "normalize")
    ctx = cfg.context()
    x = parse_point(args.x, ctx)
    resume = None
    if args.resume:
        with open(args.resume) as fh:
            resume = normalizer.NormalizerState.from_json(fh.read())
    w, st = normalizer.simply_normal_digits(x, ctx, args.n, _normalizer_config(cfg, args), resume)
    if args.save_state:
        with open(args.save_state, "w") as fh:
            fh.write(st.to_json())
    obj = {"beta": ctx.name, "x": args.x, "regime": st.regime, **_digit_summary(w),
           "K": st.K, "delta": str(st.delta), "bound": normalizer.C_BOUND + st.K,
           "fallback_events": st.fallback_events, "boundary_events": st.boundary_events,
           "stage_ends": st.stage_ends, "case_counts": dict(sorted(st.case_counts.items())),
           "digits": str(w)}
    keys = ("regime", "n", "freq0", "max_prefix_imbalance", "K", "bound", "fallback_events")
    plain = str(w) + "\n" + " ".join(f"{k}={obj[k]}" for k in keys)
    _emit(cfg, obj, plain, out)
    return 0


# ---------------------------------------------------------------------------
# parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("base and output")
    g.add_argument("--beta", help="named base, p/q, or decimal (decimals become enclosures); "
                                  "default beta_T")
    g.add_argument("--beta-poly", help="integer coefficients, constant term first")
    g.add_argument("--bracket", help="LO,HI isolating the root of --beta-poly")
    g.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                   help="working precision in bits (env BETANORMAL_PRECISION)")
    g.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    g.add_argument("--max-period", type=int, default=8)
    g.add_argument("-k", "--k-max", dest="k", type=int, default=6)
    g.add_argument("--fallback-policy", choices=("GreedyContinue", "Error"),
                   default="GreedyContinue")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="betanormal",
                                 description="β-expansions and simply normal digit streams")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("constants", cmd_constants, "enclosures of the named bases")
    p.add_argument("--digits", type=int, default=20)

    p = add("alpha", cmd_alpha, "prefix of the quasi-greedy expansion of 1")
    p.add_argument("-n", type=int, default=64)

    p = add("expand", cmd_expand, "digits of an expansion of x")
    p.add_argument("--mode", choices=MODES, default="greedy")
    p.add_argument("--x")
    p.add_argument("-n", type=int, default=64)
    p.add_argument("--no-discover", action="store_true")

    p = add("univoque", cmd_univoque, "does the sequence or point have a unique expansion")
    p.add_argument("--seq")
    p.add_argument("--x")
    p.add_argument("--depth", type=int, default=64)

    p = add("enumerate", cmd_enumerate, "tree of all expansion prefixes")
    p.add_argument("--x", required=True)
    p.add_argument("--depth", type=int, default=12)

    p = add("count", cmd_count, "number of expansions of x")
    p.add_argument("--x", required=True)
    p.add_argument("--univoque-depth", type=int, default=64)
    p.add_argument("--max-branch-nodes", type=int, default=4096)
    p.add_argument("--max-path-length", type=int, default=4096)

    p = add("catalog", cmd_catalog, "Thue–Morse components below β as JSON")
    p.add_argument("--verify", action="store_true", help="check every generator identity")

    p = add("simulate-mbeta", cmd_simulate, "Monte-Carlo digit frequencies of M_β")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("verify", cmd_verify, "scripted checks of the worked examples")
    p.add_argument("example", choices=("example4_2", "example4_3"))
    p.set_defaults(k=4)          # -k/--k is the largest k for example4_2

    p = add("normalize", cmd_normalize, "simply normal expansion of x")
    p.add_argument("--x", required=True)
    p.add_argument("-n", type=int, default=1000)
    p.add_argument("--no-discover", action="store_true")
    p.add_argument("--resume", help="state JSON from an earlier --save-state")
    p.add_argument("--save-state")
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    cfg = CliConfig(beta_spec=args.beta, beta_poly=args.beta_poly, bracket=args.bracket,
                    precision_bits=args.precision, n=getattr(args, "n", 64),
                    max_period=args.max_period, k_max=args.k,
                    fallback_policy=args.fallback_policy, output=args.format,
                    seed=getattr(args, "seed", 0))
    for name in ("n", "samples", "depth"):
        v = getattr(args, name, None)
        if v is not None and v < (1 if name != "depth" else 0):
            sys.stderr.write(f"betanormal: error: {name} must be positive\n")
            return 2
    try:
        return args.func(cfg, args, out)
    except (UsageError, OutOfRange, InvalidBase, WordSyntaxError,
            normalizer.PreconditionViolated) as e:
        sys.stderr.write(f"betanormal: error: {e}\n")
        return 2
    except (PrecisionExhausted, normalizer.FallbackExhausted, normalizer.Divergence,
            components.IdentityViolation, components.MonotonicityViolation) as e:
        sys.stderr.write(f"betanormal: failed: {type(e).__name__}: {e}\n")
        return 1


def main() -> None:
    sys.exit(run())
