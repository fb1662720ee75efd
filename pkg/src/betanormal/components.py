"""Component catalog of the univoque-base complement and Thue–Morse intervals.

A generator word α^0 (period m, last digit 0) defines the chain
α^{k+1} = (α^k)^+ reflect((α^k)^+) and the bases β_k with α(β_k) = (α^k)^∞.
The rotated word ω^0 = α_m α_1…α_{m−1} generates a Thue–Morse chain whose
periodic values at a fixed β are the level endpoints of a Thue–Morse
interval in the left part of the attractor; the reflected chain gives the
mirror interval on the right.
"""
from __future__ import annotations

import bisect
import json
import threading
from dataclasses import dataclass, field
from typing import Optional, Union

from .expansions import (
    BetaContext, Verdict, forced_walk, is_point_univoque, pi_beta, seq_real,
    _quasi_greedy_ring,
)
from .numerics import (
    AlgebraicReal, ExprReal, IntPolynomial, PrecisionExhausted, PrecisionReal, Real,
    as_real, decide,
)
from .words import (
    EPSeq, LastDigitNotZero, Word, digit_stats, is_primitive, plus_one, tm_chain, tm_limit_digits,
)


class NotAdmissible(ValueError):
    pass


class IdentityViolation(ArithmeticError):
    pass


class MonotonicityViolation(ArithmeticError):
    pass


class OutOfDomain(ValueError):
    pass


GOLDEN_GENERATOR = Word("10")
MAX_LEVEL_LENGTH = 1 << 13   # longest block worth expanding lazily


# ---------------------------------------------------------------------------
# words

def alpha_chain(alpha0: Word, k: int) -> Word:
    w = Word(alpha0)
    if len(w) == 0 or w.last() != 0:
        raise LastDigitNotZero(f"{w} does not end in 0")
    for _ in range(k):
        p = plus_one(w)
        w = p + p.reflect()
    return w


def omega_of(alpha0: Word) -> Word:
    """ω^0 = α_m α_1 … α_{m−1}."""
    return alpha0[-1:] + alpha0[:-1]


def _rotations(w: Word):
    m = len(w)
    mask = (1 << m) - 1
    b = w.bits
    for n in range(1, m):
        yield ((b << n) | (b >> (m - n))) & mask


def is_admissible(alpha0: Word) -> bool:
    """σ^n((α^0)^∞) ≼ (α^0)^∞ for every n (characterizes quasi-greedy expansions)."""
    return len(alpha0) >= 1 and all(r <= alpha0.bits for r in _rotations(alpha0))


def in_closure_of_univoque(alpha0: Word) -> bool:
    """Exact lexicographic test that (α^0)^∞ is the quasi-greedy expansion of a left
    component endpoint: reflect(α) ≺ σ^n(α) ≼ α for all n ≥ 0 (with 10 admitted)."""
    if alpha0 == GOLDEN_GENERATOR:
        return True
    m = len(alpha0)
    if m < 2 or alpha0.last() != 0 or alpha0[0] != 1:
        return False
    b = alpha0.bits
    refl = b ^ ((1 << m) - 1)
    for r in _rotations(alpha0):
        if r > b or r <= refl or r == b:
            return False
    return True


def lex_less_alpha(w: Word, ctx: BetaContext) -> bool:
    """Whether (w)^∞ ≺ α(β), i.e. the base generated by w lies strictly below β."""
    n = 4 * len(w) + 64
    a = ctx.alpha(n)
    p = (w * (n // len(w) + 1))[:n]
    return p.bits < a.bits


def periodic_poly(w: Word) -> IntPolynomial:
    """t^L − Σ w_i t^{L−i} − 1, whose root in (1, 2] is the base with π((w)^∞) = 1."""
    L = len(w)
    coeffs = [0] * (L + 1)
    coeffs[L] = 1
    coeffs[0] = -1
    for i, d in enumerate(w, start=1):
        if d:
            coeffs[L - i] -= 1
    return IntPolynomial(coeffs)


def base_of(w: Word, name: str = "") -> AlgebraicReal:
    return AlgebraicReal(periodic_poly(w), 1, 2, name or f"β[({w})^inf]")


# ---------------------------------------------------------------------------
# records

class ComponentRecord:
    """A connected component C_{α^0} = [β_0, β_*) and its chains."""

    def __init__(self, alpha0: Word, k_max: int = 6):
        self.alpha0 = Word(alpha0)
        self.omega0 = omega_of(self.alpha0)
        self.k_max = k_max
        self._bases: dict[int, AlgebraicReal] = {}
        self.verified = False

    @property
    def period(self) -> int:
        return len(self.alpha0)

    def alpha_k(self, k: int) -> Word:
        return alpha_chain(self.alpha0, k)

    def omega_k(self, k: int) -> Word:
        return tm_chain(self.omega0, k)

    @property
    def chains(self) -> list[tuple[Word, Word]]:
        return [(self.alpha_k(k), self.omega_k(k)) for k in range(self.k_max + 1)]

    def beta_k(self, k: int) -> AlgebraicReal:
        b = self._bases.get(k)
        if b is None:
            b = self._bases[k] = base_of(self.alpha_k(k), f"β_{k}[{self.alpha0}]")
        return b

    @property
    def beta0(self) -> PrecisionReal:
        return self.beta_k(0).enclosure(64)

    @property
    def beta_star_lower_bound(self) -> PrecisionReal:
        return self.beta_k(self.k_max).enclosure(64)

    def span_contains(self, w: Word) -> bool:
        """(α^0)^∞ ≺ w^∞ ≼ (α^{k_max})^∞, i.e. β(w) ∈ (β_0, β_{k_max}]."""
        top = self.alpha_k(self.k_max)
        n = 2 * max(len(top), len(w)) + 8
        rep = lambda u: (u * (n // len(u) + 1))[:n].bits
        v = rep(w)
        return rep(self.alpha0) < v <= rep(top)

    def __repr__(self) -> str:
        return f"ComponentRecord({self.alpha0})"


def identity_digits(rec: ComponentRecord, k: int, n: int) -> tuple[Word, Word]:
    """(first n digits of (ω^k)^∞, first n digits of 0·α(β_k)) with α computed exactly at β_k."""
    ctx_k = BetaContext(rec.beta_k(k))
    a = _quasi_greedy_ring(ctx_k, rec.beta_k(k), n - 1)
    om = rec.omega_k(k)
    return (om * (n // len(om) + 1))[:n], Word("0") + a


def component_from_generator(alpha0: Union[Word, str], ctx: BetaContext, k_max: int = 6,
                             verify: bool = True, digits: int = 96) -> ComponentRecord:
    w = Word(alpha0)
    if len(w) == 0 or w.last() != 0:
        raise LastDigitNotZero(f"{w} does not end in 0")
    if len(w) < 2 or not is_primitive(w) or not is_admissible(w):
        raise NotAdmissible(f"({w})^inf is not a quasi-greedy expansion of 1")
    rec = ComponentRecord(w, k_max)
    if verify:
        prev = None
        for k in range(k_max + 1):
            bk = rec.beta_k(k)
            if prev is not None and decide(lambda b: prev.enclosure(b).lt(bk.enclosure(b)),
                                           64, ctx.cap, "β_k ordering") is not True:
                raise IdentityViolation(f"β_{k} does not exceed β_{k - 1} for {w}")
            prev = bk
            lhs, rhs = identity_digits(rec, k, digits)
            if lhs != rhs:
                raise IdentityViolation(f"(ω^{k})^inf ≠ 0·α(β_{k}) for generator {w}")
        rec.verified = True
    return rec


def candidate_generators(max_period: int):
    """Words of length 2..max_period passing the exact closure test, by length then value."""
    for m in range(2, max_period + 1):
        if m == 2:
            yield GOLDEN_GENERATOR
            continue
        # first digit 1, last digit 0
        base = 1 << (m - 1)
        for mid in range(1 << (m - 2)):
            w = Word.from_int(base | (mid << 1), m)
            if in_closure_of_univoque(w):
                yield w


def build_catalog(ctx: BetaContext, max_period: int = 8, k_max: int = 6,
                  verify: bool = False) -> list[ComponentRecord]:
    """Components meeting [golden, β), sorted by β_0."""
    accepted: list[ComponentRecord] = []
    for w in candidate_generators(max_period):
        if not is_admissible(w) or not lex_less_alpha(w, ctx):
            continue
        if any(r.span_contains(w) for r in accepted):
            continue
        accepted.append(component_from_generator(w, ctx, k_max, verify=verify))
    accepted.sort(key=lambda r: _periodic_key(r.alpha0))
    return accepted


def _periodic_key(w: Word, n: int = 256) -> int:
    return (w * (n // len(w) + 1))[:n].bits


# ---------------------------------------------------------------------------
# Thue–Morse intervals

def _tm_value_real(omega0: Word, ctx: BetaContext, reflect: bool) -> ExprReal:
    """π_β(ω^TM) (or of its reflection) from a long prefix plus the tail bound."""
    lb = ctx.log2_beta

    def fn(bits: int) -> PrecisionReal:
        n = int((bits + 8) / lb) + 8
        pref = tm_limit_digits(omega0, n)
        if reflect:
            pref = pref.reflect()
        head = pi_beta(pref, ctx, bits + 8)
        b = ctx.beta(bits + 8)
        bound = 1 / ((b ** n) * (b - 1))
        return head.hull(head + bound)

    return ExprReal(fn, f"π(ω^TM[{omega0}])")


class TMInterval:
    """Level endpoints of one Thue–Morse interval at a fixed β (extended lazily)."""

    def __init__(self, side: str, component: ComponentRecord, ctx: BetaContext):
        self.side = side
        self.component = component
        self.ctx = ctx
        self.at_beta = ctx.beta()
        self._levels: list[Real] = []
        self._lock = threading.Lock()
        r = side == "J"
        self._tm = _tm_value_real(component.omega0, ctx, r)
        first = self.level(0)
        self.lo_real, self.hi_real = (first, self._tm) if not r else (self._tm, first)

    def block(self, k: int) -> Word:
        w = self.component.omega_k(k)
        return w.reflect() if self.side == "J" else w

    def level(self, k: int) -> Real:
        """π_β((ω^k)^∞) on side I, π_β((reflect ω^k)^∞) on side J."""
        while len(self._levels) <= k:
            with self._lock:
                j = len(self._levels)
                w = self.block(j)
                self._levels.append(seq_real(EPSeq(Word(), w), self.ctx, f"level{j}"))
        return self._levels[k]

    @property
    def levels(self) -> list[PrecisionReal]:
        return [lv.enclosure(self.ctx.precision) for lv in self._levels]

    @property
    def lo(self) -> PrecisionReal:
        return self.lo_real.enclosure(self.ctx.precision)

    @property
    def hi(self) -> PrecisionReal:
        return self.hi_real.enclosure(self.ctx.precision)

    def max_level(self) -> int:
        L = len(self.component.omega0)
        k = 0
        while (L << (k + 1)) <= MAX_LEVEL_LENGTH:
            k += 1
        return k

    def __repr__(self) -> str:
        return f"TMInterval({self.side}, {self.component.alpha0})"


def tm_intervals(rec: ComponentRecord, ctx: BetaContext, k_max: Optional[int] = None):
    k_max = rec.k_max if k_max is None else k_max
    I = TMInterval("I", rec, ctx)
    J = TMInterval("J", rec, ctx)
    for iv, sign in ((I, 1), (J, -1)):
        prev = iv.level(0)
        for k in range(1, k_max + 1):
            cur = iv.level(k)
            ok = decide(lambda b: prev.enclosure(b).lt(cur.enclosure(b)) if sign > 0
                        else prev.enclosure(b).gt(cur.enclosure(b)), ctx.precision, ctx.cap,
                        "level ordering")
            if ok is not True:
                raise MonotonicityViolation(f"levels {k - 1},{k} of {iv} are not strictly ordered")
            prev = cur
        last_ok = decide(lambda b: prev.enclosure(b).lt(iv._tm.enclosure(b)) if sign > 0
                         else prev.enclosure(b).gt(iv._tm.enclosure(b)), ctx.precision, ctx.cap,
                         "limit ordering")
        if last_ok is not True:
            raise MonotonicityViolation(f"level {k_max} of {iv} does not precede the limit")
    return I, J


# ---------------------------------------------------------------------------
# lookup

@dataclass
class InInterval:
    side: str
    component: ComponentRecord
    level: int
    block: Word
    bracket: tuple            # (lower Real, upper Real) strictly containing the point
    interval: TMInterval = field(repr=False, default=None)


@dataclass
class LikelyUnivoque:
    pass


@dataclass
class Unknown:
    reason: str = ""


class Catalog:
    """Components with their Thue–Morse intervals at one β.

    With ``discover`` set, a point in a gap triggers a search for the generator
    from the digits of its forced walk: a point inside I_{ω} follows ω^0 for
    its first |ω^0| digits, so every period up to ``discover_period`` is tried.
    """

    def __init__(self, ctx: BetaContext, records: list[ComponentRecord], discover: bool = True,
                 discover_period: int = 40, k_max: int = 6):
        self.ctx = ctx
        self.discover = discover
        self.discover_period = discover_period
        self.k_max = k_max
        self._lock = threading.Lock()
        self._keys: list[int] = []
        self.records: list[ComponentRecord] = []
        self.I: list[TMInterval] = []
        self.J: list[TMInterval] = []
        self._known: set = set()
        for r in records:
            self.add(r)

    @classmethod
    def build(cls, ctx: BetaContext, max_period: int = 8, k_max: int = 6, **kw) -> "Catalog":
        return cls(ctx, build_catalog(ctx, max_period, k_max), k_max=k_max, **kw)

    def add(self, rec: ComponentRecord) -> bool:
        with self._lock:
            if rec.alpha0 in self._known:
                return False
            key = _periodic_key(rec.alpha0)
            i = bisect.bisect(self._keys, key)
            self._keys.insert(i, key)
            self.records.insert(i, rec)
            self.I.insert(i, TMInterval("I", rec, self.ctx))
            self.J.insert(i, TMInterval("J", rec, self.ctx))
            self._known.add(rec.alpha0)
            return True

    def __len__(self) -> int:
        return len(self.records)

    # -- lookup --------------------------------------------------------------
    def locate(self, y: PrecisionReal, cmp=None):
        """Place y ∈ O_β \\ S_β in a Thue–Morse interval level bracket."""
        ctx = self.ctx
        cmp = cmp or (lambda t: y.cmp(t.enclosure(y.prec)))
        lo_o, hi_o = cmp(ctx.o_lo_real), cmp(ctx.o_hi_real)
        s_lo, s_hi = cmp(ctx.inv_beta), cmp(ctx.switch_hi_real)
        if None in (lo_o, hi_o, s_lo, s_hi):
            return Unknown("attractor membership undecidable")
        if lo_o < 0 or hi_o > 0:
            raise OutOfDomain("point lies outside the attractor")
        if s_lo >= 0 and s_hi <= 0:
            raise OutOfDomain("point lies in the switch region")
        side = "I" if s_lo < 0 else "J"
        hit = self._search(side, cmp)
        if isinstance(hit, InInterval):
            return hit
        if hit is None and self.discover and self._discover(y, side):
            hit = self._search(side, cmp)
            if isinstance(hit, InInterval):
                return hit
        if isinstance(hit, Unknown):
            return hit
        try:
            v = is_point_univoque(y, ctx, 64)
        except PrecisionExhausted:
            v = Verdict.UNKNOWN
        return LikelyUnivoque() if v is Verdict.YES else Unknown("gap between cataloged intervals")

    def _search(self, side: str, cmp):
        ivs = self.I if side == "I" else self.J
        if not ivs:
            return None
        # side I intervals increase with the key; side J decrease
        n = len(ivs)
        lo, hi = 0, n
        if side == "I":
            # last interval whose lower end is below y
            while lo < hi:
                mid = (lo + hi) // 2
                c = cmp(ivs[mid].lo_real)
                if c is None:
                    return Unknown("point on an interval endpoint")
                if c > 0:
                    lo = mid + 1
                else:
                    hi = mid
            idx = lo - 1
            if idx < 0:
                return None
            iv = ivs[idx]
            c = cmp(iv.hi_real)
        else:
            # last interval whose upper end is above y
            while lo < hi:
                mid = (lo + hi) // 2
                c = cmp(ivs[mid].hi_real)
                if c is None:
                    return Unknown("point on an interval endpoint")
                if c < 0:
                    lo = mid + 1
                else:
                    hi = mid
            idx = lo - 1
            if idx < 0:
                return None
            iv = ivs[idx]
            c = -cmp(iv.lo_real) if cmp(iv.lo_real) is not None else None
        if c is None:
            return Unknown("point at a Thue–Morse limit")
        if c >= 0:
            return None
        return self._bracket(iv, cmp)

    def _bracket(self, iv: TMInterval, cmp):
        s = 1 if iv.side == "I" else -1
        top = iv.max_level()
        for k in range(top):
            a, b = iv.level(k), iv.level(k + 1)
            ca, cb = cmp(a), cmp(b)
            if ca is None or cb is None:
                return Unknown("point on a level endpoint")
            if s * ca > 0 and s * cb < 0:
                bracket = (a, b) if s > 0 else (b, a)
                return InInterval(iv.side, iv.component, k, iv.block(k), bracket, iv)
            if s * ca <= 0:
                return Unknown("point on a level endpoint")
        return Unknown("level beyond the lazily expanded range")

    def _discover(self, y: PrecisionReal, side: str) -> bool:
        try:
            walk = forced_walk(y, self.ctx, self.discover_period + 1)
        except Exception:
            return False
        w = walk.digits if side == "I" else walk.digits.reflect()
        added = False
        for m in range(2, min(len(w), self.discover_period) + 1):
            om = w[:m]
            a0 = om[1:] + om[:1]
            if a0 in self._known or not in_closure_of_univoque(a0):
                continue
            if not lex_less_alpha(a0, self.ctx):
                continue
            if any(r.span_contains(a0) for r in self.records):
                continue
            added |= self.add(ComponentRecord(a0, self.k_max))
        return added


def locate(y: PrecisionReal, ctx: BetaContext, catalog: Union[Catalog, list]):
    if not isinstance(catalog, Catalog):
        catalog = Catalog(ctx, list(catalog), discover=False)
    return catalog.locate(y)


def phi_map(q, ctx: BetaContext, bits: Optional[int] = None) -> PrecisionReal:
    """π_β(0·α(q)) for q ∈ [golden, β), with the tail bound folded into the enclosure."""
    from .numerics import GOLDEN
    qr = as_real(q)
    bits = bits or ctx.precision
    same = qr is GOLDEN or (isinstance(qr, AlgebraicReal) and qr.poly == GOLDEN.poly
                            and qr.enclosure(64).intersects(GOLDEN.enclosure(64)))
    ok_lo = same or decide(lambda b: qr.enclosure(b).ge(GOLDEN.enclosure(b)), 64, ctx.cap,
                           "q ≥ golden")
    ok_hi = decide(lambda b: qr.enclosure(b).lt(ctx.beta(b)), 64, ctx.cap, "q < β")
    if not (ok_lo and ok_hi):
        raise OutOfDomain("q must lie in [golden, β)")
    n = int((bits + 8) / ctx.log2_beta) + 8
    a = BetaContext(qr, ctx.precision, ctx.cap).alpha(n)
    head = pi_beta(Word("0") + a, ctx, bits + 8)
    b = ctx.beta(bits + 8)
    return head.hull(head + 1 / ((b ** (n + 1)) * (b - 1)))


# ---------------------------------------------------------------------------
# serialization

def _dec(x: PrecisionReal, digits: int = 20) -> dict:
    return {"decimal": x.decimal(digits), "error": f"{float(x.radius):.3e}"}


def atlas(ctx: BetaContext, catalog: Union[Catalog, list], k_max: int = 6) -> dict:
    recs = catalog.records if isinstance(catalog, Catalog) else catalog
    out = []
    for r in recs:
        I, J = tm_intervals(r, ctx, k_max)
        out.append({
            "alpha0": str(r.alpha0),
            "beta0": _dec(r.beta0),
            "omega0": str(r.omega0),
            "levels": [I.level(k).enclosure(ctx.precision).decimal(20) for k in range(k_max + 1)],
            "interval_I": [I.lo.decimal(20), I.hi.decimal(20)],
            "interval_J": [J.lo.decimal(20), J.hi.decimal(20)],
        })
    return {"beta": ctx.beta().decimal(20), "components": out}


def atlas_json(ctx: BetaContext, catalog, k_max: int = 6) -> str:
    return json.dumps(atlas(ctx, catalog, k_max), indent=2)
