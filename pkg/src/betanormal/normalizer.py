"""Digit streams with asymptotic zero frequency 1/2.

The switch region is split into two edge bands of width δ and a middle
band.  Edge bands emit a balanced two-digit (or, at β_T, nearly balanced
longer) block that lands in the attractor; the middle band lets the running
imbalance choose between a positive and a negative excursion of bounded
length K.  Between visits to the switch region the orbit is forced, and the
component catalog certifies that the forced stretch is a concatenation of
balanced Thue–Morse blocks.
"""
from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .components import Catalog, InInterval, LikelyUnivoque, Unknown, build_catalog
from .expansions import BetaContext, OrbitTracker, OutOfRange
from .numerics import (
    BETA_T, GOLDEN, ExprReal, PrecisionExhausted, PrecisionReal, Rational, Real,
    AlgebraicReal, as_real, decide,
)
from .words import Word, digit_stats

log = logging.getLogger(__name__)

C_BOUND = 2


class PreconditionViolated(ValueError):
    pass


class FallbackExhausted(RuntimeError):
    pass


class Divergence(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# regime detection

def is_beta_T(ctx: BetaContext) -> bool:
    b = ctx.beta_real
    if b is BETA_T:
        return True
    return (isinstance(b, AlgebraicReal) and b.poly == BETA_T.poly
            and b.enclosure(64).intersects(BETA_T.enclosure(64)))


def _check_base(ctx: BetaContext, allow_T: bool) -> None:
    if is_beta_T(ctx):
        if not allow_T:
            raise PreconditionViolated("at β_T the edge images touch the attractor boundary; "
                                       "use the δ_J construction")
        return
    try:
        above_golden = decide(lambda k: ctx.beta(k).gt(GOLDEN.enclosure(k)), 64, ctx.cap, "β > golden")
        below_T = decide(lambda k: ctx.beta(k).lt(BETA_T.enclosure(k)), 64, ctx.cap, "β < β_T")
    except PrecisionExhausted as e:
        raise PreconditionViolated(f"cannot place β relative to golden/β_T: {e}") from None
    if not above_golden:
        raise PreconditionViolated("β must exceed the golden ratio")
    if not below_T:
        raise PreconditionViolated("β must not exceed β_T")


# ---------------------------------------------------------------------------
# δ and K

def _dyadic_below(v: PrecisionReal, scale: Fraction = Fraction(7, 8), bits: int = 48) -> Fraction:
    f = v.lower * scale
    return Fraction(int(f * (1 << bits)), 1 << bits)


def _image_ok(word: Word, lo: PrecisionReal, hi: PrecisionReal, ctx: BetaContext,
              exact_end: Optional[str] = None) -> Optional[bool]:
    """Push [lo, hi] through ``word`` (affine, increasing) checking admissibility.

    True if the image lies in the open attractor; ``exact_end`` names an image
    endpoint known to land exactly on the attractor boundary, which is then
    only required to agree with it numerically."""
    k = max(lo.prec, hi.prec)
    b = ctx.beta(k)
    inv, shi = ctx.inv_beta.enclosure(k), ctx.switch_hi_real.enclosure(k)
    for d in word:
        ok = lo.ge(inv) if d else hi.le(shi)
        if ok is not True:
            return ok
        lo, hi = b * lo - d, b * hi - d
    olo, ohi = ctx.o_lo_real.enclosure(k), ctx.o_hi_real.enclosure(k)
    bottom = lo.intersects(olo) if exact_end == "lo" else lo.gt(olo)
    top = hi.intersects(ohi) if exact_end == "hi" else hi.lt(ohi)
    if top is None or bottom is None:
        return None
    return top and bottom


def _certify_band(ctx: BetaContext, words: tuple, delta: Fraction, exact: bool) -> Optional[bool]:
    """Left band [1/β, 1/β+δ] under words[0] and right band [1/(β(β−1))−δ, 1/(β(β−1))]
    under words[1] both land in the attractor."""
    def q(bits):
        inv = ctx.inv_beta.enclosure(bits)
        shi = ctx.switch_hi_real.enclosure(bits)
        d = PrecisionReal.exact(delta, bits)
        left = _image_ok(words[0], inv, inv + d, ctx, "lo" if exact else None)
        if left is not True:
            return left
        return _image_ok(words[1], shi - d, shi, ctx, "hi" if exact else None)
    try:
        return decide(q, ctx.precision, ctx.cap, "band image")
    except PrecisionExhausted:
        return None


def compute_delta(ctx: BetaContext) -> Fraction:
    """Largest convenient dyadic δ for which the edge blocks 01 / 10 land in the
    attractor interior."""
    _check_base(ctx, allow_T=False)
    k = ctx.precision + 32
    b = ctx.beta(k)
    star = (ctx.o_hi_real.enclosure(k) + 1) / b.square() - ctx.inv_beta.enclosure(k)
    half = (ctx.switch_hi_real.enclosure(k) - ctx.inv_beta.enclosure(k)) / 2
    cand = star if star.upper < half.lower else half
    if cand.sign() != 1:
        raise PreconditionViolated("no positive δ exists at this base")
    delta = _dyadic_below(cand)
    words = (Word("01"), Word("10"))
    for _ in range(64):
        if _certify_band(ctx, words, delta, False):
            return delta
        delta /= 2
    raise PreconditionViolated("could not certify a positive δ")


def edge_blocks_T(J: int) -> tuple[Word, Word]:
    return Word("011") + Word("01") * J, Word("100") + Word("10") * J


def compute_delta_J(ctx: BetaContext, J: int) -> Fraction:
    """δ_J at β_T: the blocks 011(01)^J and 100(10)^J map the edge bands into O_β.

    The left end of each band maps exactly onto an endpoint of the attractor,
    since T_1 T_1 T_0 (1/β_T) = 1/(β_T² − 1) is an identity in Z[β_T]."""
    if not is_beta_T(ctx):
        raise PreconditionViolated("δ_J is defined for β = β_T only")
    if J < 1:
        raise ValueError("J must be positive")
    k = ctx.precision + 32 + 2 * J
    b = ctx.beta(k)
    width = ctx.o_hi_real.enclosure(k) - ctx.o_lo_real.enclosure(k)
    cand = width / b ** (3 + 2 * J)
    delta = _dyadic_below(cand, bits=48 + 2 * J)
    words = edge_blocks_T(J)
    for _ in range(64):
        if _certify_band(ctx, words, delta, True):
            return delta
        delta /= 2
    raise PreconditionViolated(f"could not certify δ_{J}")


def compute_K(ctx: BetaContext, delta: Fraction, limit: int = 10_000) -> int:
    """Largest first-entry time into O_β over the middle band, after one opposite digit."""
    def one_side(bits: int) -> Optional[int]:
        b = ctx.beta(bits)
        inv = ctx.inv_beta.enclosure(bits)
        shi = ctx.switch_hi_real.enclosure(bits)
        olo = ctx.o_lo_real.enclosure(bits)
        d = PrecisionReal.exact(delta, bits)
        a, c = inv + d, shi - d
        if a.lt(c) is not True:
            raise PreconditionViolated("δ leaves no middle band")
        lo, hi = b * a - 1, b * c - 1            # after T_1
        if hi.lt(olo) is not True:
            if hi.lt(olo) is None:
                return None
            raise Divergence("T_1 maps part of the middle band straight into O_β")
        j = 0
        while True:
            j += 1
            if j > limit:
                raise Divergence("no return within the step limit")
            lo, hi = b * lo, b * hi
            done = lo.ge(olo)
            if done is True:
                return j
            if done is None:
                return None
            if hi.ge(olo) is True:
                hi = olo           # the upper part has entered; follow the rest
    # the T_0-then-T_1^j side is the mirror image under x ↦ 1/(β−1) − x
    return decide(one_side, ctx.precision, ctx.cap, "middle-band return time")


def j_schedule(n_max: int) -> list[int]:
    """J_1 < J_2 < …: smallest admissible values with 1/2 − 1/n < (J+1)/(2J+3)
    and (J+2)/(2J+3) < 1/2 + 1/n."""
    out = []
    prev = 0
    for n in range(1, n_max + 1):
        eps = Fraction(1, n)
        J = prev + 1
        while not (Fraction(1, 2) - eps < Fraction(J + 1, 2 * J + 3)
                   and Fraction(J + 2, 2 * J + 3) < Fraction(1, 2) + eps):
            J += 1
        out.append(J)
        prev = J
    return out


# ---------------------------------------------------------------------------
# configuration and state

@dataclass
class NormalizerConfig:
    max_period: int = 8
    k_max: int = 6
    discover: bool = True
    discover_period: int = 40
    delta: Optional[Fraction] = None
    K: Optional[int] = None
    fallback_policy: str = "GreedyContinue"     # or "Error"
    max_block_repeats: int = 1_000_000
    stage_min_length: Callable[[int], int] = field(default=lambda N: 2 ** N, repr=False)
    trace_limit: int = 10_000

    def __post_init__(self):
        if self.fallback_policy not in ("GreedyContinue", "Error"):
            raise ValueError("fallback_policy must be GreedyContinue or Error")
        if self.delta is not None and self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.K is not None and self.K < 1:
            raise ValueError("K must be at least 1")


@dataclass
class NormalizerState:
    zeros: int = 0
    ones: int = 0
    fallback_events: int = 0
    boundary_events: int = 0
    stage: int = 1
    stage_start: int = 0
    stage_ends: list = field(default_factory=list)       # (N, length, zeros)
    case_counts: Counter = field(default_factory=Counter)
    phase_log: list = field(default_factory=list)        # (tag, start, length)
    emitted: Word = field(default_factory=Word)
    current: Optional[PrecisionReal] = None
    K: int = 0
    delta: Optional[Fraction] = None
    regime: str = ""

    @property
    def imbalance(self) -> int:
        return self.ones - self.zeros

    def to_json(self) -> str:
        d = {
            "version": 1, "regime": self.regime, "digits": str(self.emitted),
            "fallback_events": self.fallback_events, "boundary_events": self.boundary_events,
            "stage": self.stage, "stage_start": self.stage_start,
            "stage_ends": self.stage_ends, "case_counts": dict(self.case_counts),
            "K": self.K, "delta": str(self.delta) if self.delta is not None else None,
        }
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "NormalizerState":
        d = json.loads(text)
        w = Word(d["digits"])
        st = cls(zeros=w.zeros(), ones=w.ones(), fallback_events=d["fallback_events"],
                 boundary_events=d["boundary_events"], stage=d["stage"],
                 stage_start=d["stage_start"], stage_ends=[tuple(e) for e in d["stage_ends"]],
                 case_counts=Counter(d["case_counts"]), emitted=w, K=d["K"],
                 delta=Fraction(d["delta"]) if d["delta"] else None, regime=d["regime"])
        return st


# ---------------------------------------------------------------------------
# the stream

def _catalog_for(ctx: BetaContext, cfg: NormalizerConfig) -> Catalog:
    cache = ctx.__dict__.setdefault("_catalogs", {})
    key = (cfg.max_period, cfg.k_max, cfg.discover, cfg.discover_period)
    cat = cache.get(key)
    if cat is None:
        cat = cache[key] = Catalog(ctx, build_catalog(ctx, cfg.max_period, cfg.k_max),
                                   discover=cfg.discover, discover_period=cfg.discover_period,
                                   k_max=cfg.k_max)
    return cat


class _Bands:
    """Thresholds 1/β + δ and 1/(β(β−1)) − δ with the matching K."""

    def __init__(self, ctx: BetaContext, delta: Fraction, K: int):
        self.delta, self.K = delta, K
        dr = Rational(delta)
        self.left = ExprReal(lambda k: ctx.inv_beta.enclosure(k) + dr.enclosure(k), "1/β+δ")
        self.right = ExprReal(lambda k: ctx.switch_hi_real.enclosure(k) - dr.enclosure(k),
                              "1/(β(β−1))−δ")


class Normalizer:
    def __init__(self, x, ctx: BetaContext, cfg: Optional[NormalizerConfig] = None,
                 resume: Optional[NormalizerState] = None, n_hint: int = 0):
        self.ctx = ctx
        self.cfg = cfg or NormalizerConfig()
        self.T = is_beta_T(ctx)
        _check_base(ctx, allow_T=True)
        xr = as_real(x)
        try:
            inside = decide(lambda k: _open_range(xr.enclosure(k), ctx, k), ctx.precision,
                            ctx.cap, "x range")
        except PrecisionExhausted:
            inside = False
        if not inside:
            raise OutOfRange("x must lie in (0, 1/(β−1))")
        self.catalog = _catalog_for(ctx, self.cfg)
        self.tr = OrbitTracker(ctx, xr, n_hint)
        self._bands: dict[int, _Bands] = ctx.__dict__.setdefault("_bands", {})
        self._J = j_schedule(64) if self.T else []
        st = resume or NormalizerState()
        st.regime = "beta_T" if self.T else "subcritical"
        if resume is not None:
            for d in resume.emitted:
                self.tr.push(d)
        self.state = st
        if not self.T:
            delta = self.cfg.delta if self.cfg.delta is not None else compute_delta(ctx)
            K = self.cfg.K if self.cfg.K is not None else compute_K(ctx, delta)
            b = self._bands.get(0)
            if b is None or b.delta != delta or b.K != K:
                b = self._bands[0] = _Bands(ctx, delta, K)
            st.delta, st.K = delta, K

    # -- helpers ---------------------------------------------------------------
    def bands(self) -> _Bands:
        if not self.T:
            return self._bands[0]
        J = self._J[min(self.state.stage, len(self._J)) - 1]
        b = self._bands.get(J)
        if b is None:
            delta = compute_delta_J(self.ctx, J)
            b = self._bands[J] = _Bands(self.ctx, delta, compute_K(self.ctx, delta))
        self.state.delta, self.state.K = b.delta, max(self.state.K, b.K)
        return b

    def _cmp(self, t: Real, what: str) -> int:
        c = self.tr.cmp(t)
        if c is None:
            self.state.boundary_events += 1
            log.debug("boundary event at %d (%s)", len(self.tr), what)
        return c

    def _push(self, d: int, checked: bool = False):
        if checked:
            self.tr.push_checked(d)
        else:
            self.tr.push(d)
        if d:
            self.state.ones += 1
        else:
            self.state.zeros += 1

    def _note(self, tag: str, start: int):
        st = self.state
        st.case_counts[tag] += 1
        if len(st.phase_log) < self.cfg.trace_limit:
            st.phase_log.append((tag, start, len(self.tr) - start))

    # -- one decision ------------------------------------------------------------
    def step(self):
        ctx = self.ctx
        start = len(self.tr)
        c_lo = self._cmp(ctx.o_lo_real, "O_lo")
        if c_lo is not None and c_lo < 0:
            self._push(0)
            self._note("drive", start)
            return
        c_hi = self._cmp(ctx.o_hi_real, "O_hi")
        if c_hi is not None and c_hi > 0:
            self._push(1)
            self._note("drive", start)
            return
        s_lo = self._cmp(ctx.inv_beta, "1/β")
        s_hi = self._cmp(ctx.switch_hi_real, "1/(β(β−1))")
        in_S = (s_lo is None or s_lo >= 0) and (s_hi is None or s_hi <= 0)
        if in_S:
            self._switch_case(start)
            self._maybe_advance_stage()
        else:
            self._attractor_case(start)

    def _switch_case(self, start: int):
        ctx, st = self.ctx, self.state
        b = self.bands()
        cl = self._cmp(b.left, "left band")
        if cl is None or cl < 0:
            w = edge_blocks_T(b_J(self))[0] if self.T else Word("01")
            self._push_word(w)
            self._note("left", start)
            return
        cr = self._cmp(b.right, "right band")
        if cr is not None and cr > 0:
            w = edge_blocks_T(b_J(self))[1] if self.T else Word("10")
            self._push_word(w)
            self._note("right", start)
            return
        j = 0
        if st.imbalance >= 0:
            self._push(1, checked=True)
            while self._cmp(ctx.o_lo_real, "O_lo") == -1:
                self._push(0)
                j += 1
            tag = "middle-down"
        else:
            self._push(0, checked=True)
            while self._cmp(ctx.o_hi_real, "O_hi") == 1:
                self._push(1)
                j += 1
            tag = "middle-up"
        if j > b.K or j == 0:
            log.warning("middle-band return took %d steps (K=%d)", j, b.K)
        self._note(tag, start)

    def _push_word(self, w: Word):
        for d in w:
            self._push(d, checked=True)

    def _attractor_case(self, start: int):
        y = self.tr.point()
        try:
            hit = self.catalog.locate(y, cmp=self.tr.cmp)
        except Exception as e:   # undecidable placement: treat as a catalog miss
            hit = Unknown(str(e))
        if isinstance(hit, InInterval):
            lo, hi = hit.bracket
            reps = 0
            while True:
                self._push_word(hit.block)
                reps += 1
                a, c = self.tr.cmp(lo), self.tr.cmp(hi)
                if not (a == 1 and c == -1) or reps >= self.cfg.max_block_repeats:
                    break
            self._note(f"block-{hit.side}", start)
            return
        self._fallback(start, hit)

    def _fallback(self, start: int, hit):
        st = self.state
        if self.cfg.fallback_policy == "Error":
            raise FallbackExhausted(f"catalog could not place the orbit at digit {start}: {hit}")
        st.fallback_events += 1
        ctx = self.ctx
        # forced digits until the orbit is back in the switch region
        while True:
            s_lo = self.tr.cmp(ctx.inv_beta)
            if s_lo is None or s_lo >= 0:
                s_hi = self.tr.cmp(ctx.switch_hi_real)
                if s_hi is None or s_hi <= 0:
                    break
                self._push(1)
            else:
                self._push(0)
            if len(self.tr) - start > self.cfg.max_block_repeats or len(self.tr) >= self._target:
                break
        self._note("fallback", start)

    def _maybe_advance_stage(self):
        if not self.T:
            return
        st = self.state
        n = len(self.tr)
        N = st.stage
        if n - st.stage_start < self.cfg.stage_min_length(N):
            return
        if 2 * N * abs(st.zeros * 2 - n) < 2 * n:        # |freq0 − 1/2| < 1/N
            st.stage_ends.append((N, n, st.zeros))
            st.stage = N + 1
            st.stage_start = n

    # -- driver ----------------------------------------------------------------
    _target = 0

    def run(self, n: int) -> Word:
        self._target = n
        while len(self.tr) < n:
            self.step()
        st = self.state
        st.emitted = self.tr.word()
        st.current = self.tr.point()
        return st.emitted[:n]


def _open_range(y: PrecisionReal, ctx: BetaContext, k: int) -> Optional[bool]:
    a, b = y.gt(0), y.lt(ctx.i_max_real.enclosure(k))
    if a is False or b is False:
        return False
    return None if a is None or b is None else True


def b_J(norm: Normalizer) -> int:
    return norm._J[min(norm.state.stage, len(norm._J)) - 1]


def simply_normal_digits(x, ctx: BetaContext, n: int, cfg: Optional[NormalizerConfig] = None,
                         resume: Optional[NormalizerState] = None):
    """First n digits of an expansion of x whose zero frequency tends to 1/2."""
    norm = Normalizer(x, ctx, cfg, resume, n_hint=n)
    w = norm.run(n)
    return w, norm.state
