"""β-expansions: evaluation, the maps T_0/T_1, classic expansions, univoque
tests, and enumeration/counting of expansions through the switch region."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Union

import gmpy2

from .numerics import (
    DEFAULT_PRECISION, GUARD_BITS, PRECISION_CAP, AlgebraicReal, ExprReal,
    Interval, PrecisionExhausted, PrecisionReal, Rational, Real, as_real, decide,
)
from .words import EPSeq, Word, compare_prefix

mpz = gmpy2.mpz


class OutOfRange(ValueError):
    """A point lies outside the interval required by the operation."""


class InvalidBase(ValueError):
    pass


class Verdict(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


class BetaContext:
    """A base β ∈ (1, 2] with its landmarks and a cached prefix of α(β)."""

    def __init__(self, beta: Union[Real, PrecisionReal, int, Fraction, str],
                 precision: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP):
        if isinstance(beta, str):
            from .numerics import parse_real
            beta = parse_real(beta, decimal_as_enclosure=True)
        self.beta_real: Real = as_real(beta)
        self.precision = precision
        self.cap = cap
        b = self.beta_real
        if b.refinable:
            ok = decide(lambda bits: _in_base_range(b.enclosure(bits)), 64, max(cap, 64),
                        "range check for β")
        else:
            ok = _in_base_range(b.ball)  # type: ignore[attr-defined]
        if ok is not True:
            raise InvalidBase(f"β must lie in (1, 2]; got {b!r}")
        self._alpha_lock = threading.Lock()
        self._alpha = Word()

        enc = b.enclosure
        self.inv_beta = ExprReal(lambda k: 1 / enc(k), "1/β")
        self.switch_hi_real = ExprReal(lambda k: 1 / (enc(k) * (enc(k) - 1)), "1/(β(β−1))")
        self.i_max_real = ExprReal(lambda k: 1 / (enc(k) - 1), "1/(β−1)")
        self.o_lo_real = ExprReal(lambda k: 1 / (enc(k).square() - 1), "1/(β²−1)")
        self.o_hi_real = ExprReal(lambda k: enc(k) / (enc(k).square() - 1), "β/(β²−1)")
        self.cut_real = ExprReal(lambda k: 1 / (2 * (enc(k) - 1)), "1/(2(β−1))")
        self.a_lo_real = ExprReal(lambda k: enc(k) / (2 * (enc(k) - 1)) - 1, "β/(2(β−1))−1")
        self.a_hi_real = ExprReal(lambda k: enc(k) / (2 * (enc(k) - 1)), "β/(2(β−1))")
        self.zero_real = Rational(0)

    # enclosures at working precision
    def beta(self, bits: Optional[int] = None) -> PrecisionReal:
        return self.beta_real.enclosure(bits or self.precision)

    @property
    def name(self) -> str:
        return self.beta_real.name or self.beta().decimal(12)

    @property
    def i_max(self) -> PrecisionReal:
        return self.i_max_real.enclosure(self.precision)

    @property
    def switch(self) -> Interval:
        return Interval(self.inv_beta.enclosure(self.precision),
                        self.switch_hi_real.enclosure(self.precision))

    @property
    def attractor(self) -> Interval:
        return Interval(self.o_lo_real.enclosure(self.precision),
                        self.o_hi_real.enclosure(self.precision))

    @property
    def log2_beta(self) -> float:
        return math.log2(float(self.beta(64).upper))

    def alpha(self, n: int) -> Word:
        """First n digits of the quasi-greedy expansion of 1."""
        if len(self._alpha) >= n:
            return self._alpha[:n]
        with self._alpha_lock:
            if len(self._alpha) < n:
                # a fixed-accuracy base gets no speculative look-ahead
                ahead = max(n, 2 * len(self._alpha), 64) if self.beta_real.refinable else n
                self._alpha = _quasi_greedy(self, ahead)
        return self._alpha[:n]

    def __repr__(self) -> str:
        return f"BetaContext({self.name})"


def _in_base_range(b: PrecisionReal) -> Optional[bool]:
    a, c = b.gt(1), b.le(2)
    if a is False or c is False:
        return False
    if a is None or c is None:
        return None
    return True


def _point(x, ctx: BetaContext, bits: Optional[int] = None) -> PrecisionReal:
    if isinstance(x, PrecisionReal):
        return x
    return as_real(x).enclosure(bits or ctx.precision)


# ---------------------------------------------------------------------------
# evaluation and maps

def _sum_inverse_powers(w: Word, r: PrecisionReal) -> PrecisionReal:
    """sum_i w_i r^i for i = 1..|w|, by Horner from the right."""
    acc = PrecisionReal.exact(0, r.prec)
    bits = w.bits
    for i in range(len(w)):
        if (bits >> i) & 1:
            acc = acc + 1
        acc = acc * r
    return acc


def pi_beta(s: Union[EPSeq, Word], ctx: BetaContext, bits: Optional[int] = None) -> PrecisionReal:
    """Value Σ s_i β^{-i} of a finite word or eventually periodic sequence."""
    prec = (bits or ctx.precision) + GUARD_BITS
    r = 1 / ctx.beta(prec)
    if isinstance(s, Word):
        return _sum_inverse_powers(s, r)
    head = _sum_inverse_powers(s.preperiod, r)
    L = len(s.period)
    per = _sum_inverse_powers(s.period, r) / (1 - r ** L)
    return head + per * r ** len(s.preperiod)


def seq_real(s: Union[EPSeq, Word], ctx: BetaContext, name: str = "") -> ExprReal:
    """π_β(s) as a refinable real."""
    return ExprReal(lambda k: pi_beta(s, ctx, k), name or str(s))


def apply_map(d: int, x: PrecisionReal, ctx: BetaContext) -> PrecisionReal:
    b = ctx.beta(max(x.prec, ctx.precision))
    y = b * x
    return y - 1 if d else y


def apply_word(w: Word, x, ctx: BetaContext, bits: Optional[int] = None) -> PrecisionReal:
    y = _point(x, ctx, bits)
    b = ctx.beta(max(y.prec, bits or ctx.precision))
    for d in w:
        y = b * y
        if d:
            y = y - 1
    return y


def orbit(x, w: Word, ctx: BetaContext, bits: Optional[int] = None) -> list[PrecisionReal]:
    y = _point(x, ctx, bits)
    b = ctx.beta(max(y.prec, bits or ctx.precision))
    out = []
    for d in w:
        y = b * y
        if d:
            y = y - 1
        out.append(y)
    return out


# ---------------------------------------------------------------------------
# quasi-greedy expansion of 1

def _quasi_greedy(ctx: BetaContext, n: int) -> Word:
    b = ctx.beta_real
    if isinstance(b, Rational):
        return _quasi_greedy_rational(b.value, n)
    if isinstance(b, AlgebraicReal) and b.poly.is_monic():
        return _quasi_greedy_ring(ctx, b, n)
    return _quasi_greedy_numeric(ctx, n)


def _quasi_greedy_rational(beta: Fraction, n: int) -> Word:
    x = Fraction(1)
    bits = 0
    for _ in range(n):
        y = beta * x
        d = 1 if y > 1 else 0
        bits = (bits << 1) | d
        x = y - d
    return Word.from_int(bits, n)


def _quasi_greedy_ring(ctx: BetaContext, b: AlgebraicReal, n: int) -> Word:
    """Exact orbit in Z[β] = Z[t]/(p): ties βx = 1 are detected as the zero element."""
    p = b.poly.coeffs
    d = len(p) - 1
    x = [1] + [0] * (d - 1)
    bits = 0
    for _ in range(n):
        # y = β·x, reduced with t^d = -(p_0 + ... + p_{d-1} t^{d-1})
        top = x[-1]
        y = [0] + x[:-1]
        if top:
            for i in range(d):
                y[i] -= top * p[i]
        r = y[:]
        r[0] -= 1
        s = _ring_sign(r, b, ctx)
        dig = 1 if s > 0 else 0
        bits = (bits << 1) | dig
        if dig:
            y[0] -= 1
        x = y
    return Word.from_int(bits, n)


def _ring_sign(r: list[int], b: AlgebraicReal, ctx: BetaContext) -> int:
    if not any(r):
        return 0
    mag = max(abs(c) for c in r).bit_length()
    prec = 64 + mag + len(r)
    limit = max(ctx.cap, prec) * 8
    while True:
        beta = b.enclosure(prec)
        acc = PrecisionReal.exact(r[-1], beta.prec)
        for c in reversed(r[:-1]):
            acc = acc * beta + c
        s = acc.sign()
        if s is not None:
            return s
        if prec > limit:
            raise PrecisionExhausted("sign of an element of Z[β] is undecidable; "
                                     "the defining polynomial may be reducible")
        prec *= 2


def _quasi_greedy_numeric(ctx: BetaContext, n: int) -> Word:
    prec = ctx.precision + int(n * ctx.log2_beta) + 32
    limit = ctx.cap + int(n * ctx.log2_beta) + 64
    while True:
        beta = ctx.beta(prec)
        x = PrecisionReal.exact(1, beta.prec)
        bits = 0
        for i in range(n):
            y = beta * x
            c = y.gt(1)
            if c is None:
                break
            dig = 1 if c else 0
            bits = (bits << 1) | dig
            x = y - dig
        else:
            return Word.from_int(bits, n)
        if prec >= limit or not ctx.beta_real.refinable:
            raise PrecisionExhausted(
                f"digit {i + 1} of α(β) needs βx > 1 decided at the tie; "
                "use an exact (polynomial or rational) base")
        prec = min(2 * prec, limit)


def quasi_greedy_alpha(ctx: BetaContext, n: int) -> Word:
    if n < 1:
        raise ValueError("n must be positive")
    return ctx.alpha(n)


# ---------------------------------------------------------------------------
# incremental orbit tracking for long digit streams

class OrbitTracker:
    """Follows y_n = β^n x − Σ d_i β^{n−i} for long digit streams.

    Deciding digit n needs y_n to a fixed accuracy, which in turn needs x and
    β to about n·log2(β) bits.  The tracker keeps a cheap working enclosure of
    y at ``work`` bits and periodically re-anchors it from a high-precision
    value computed with a table of powers of β, so the per-digit cost stays
    at the working precision.
    """

    CHUNK = 256

    def __init__(self, ctx: BetaContext, x, n_hint: int = 0, work: int = 192):
        self.ctx = ctx
        self.x = as_real(x)
        self.work = max(work, ctx.precision + 32)
        self.digits = bytearray()
        self._logb = ctx.log2_beta
        self._th: dict[int, tuple] = {}
        W = self.work
        bw = ctx.beta(W).with_prec(W)
        self._bl, self._bh = mpz(bw.lo), mpz(bw.hi)
        self._one = mpz(1) << W
        self._refresh = mpz(1) << (W // 2)
        self._set_precision(W + 96 + int(n_hint * self._logb))

    # -- precision management ------------------------------------------------
    def _budget(self) -> int:
        return self.ctx.cap + self.work + int(len(self.digits) * self._logb) + 64

    def _set_precision(self, P: int):
        self.P = P
        b = self.ctx.beta(P).with_prec(P)
        bl, bh = mpz(b.lo), mpz(b.hi)
        one = mpz(1) << P
        pw = [(one, one)]
        lo, hi = one, one
        for _ in range(self.CHUNK):
            lo, hi = (lo * bl) >> P, -((-(hi * bh)) >> P)
            pw.append((lo, hi))
        self._pw = pw
        x = self.x.enclosure(P).with_prec(P)
        Yl, Yh = mpz(x.lo), mpz(x.hi)
        n = len(self.digits)
        pos = 0
        while pos < n:
            j = min(self.CHUNK, n - pos)
            Yl, Yh = self._advance(Yl, Yh, pos, j)
            pos += j
        self._Y = (Yl, Yh)
        self._m = n
        self._load_working()

    def _advance(self, Yl, Yh, start: int, j: int):
        P = self.P
        pl, ph = self._pw[j]
        if Yl >= 0:
            lo, hi = (Yl * pl) >> P, -((-(Yh * ph)) >> P)
        else:
            prods = (Yl * pl, Yl * ph, Yh * pl, Yh * ph)
            lo, hi = min(prods) >> P, -((-max(prods)) >> P)
        pw = self._pw
        dl = dh = 0
        digs = self.digits
        for i in range(j):
            if digs[start + i]:
                a, b = pw[j - 1 - i]
                dl += a
                dh += b
        return lo - dh, hi - dl

    def _load_working(self):
        Yl, Yh = self._Y
        s = self.P - self.work
        self._yl, self._yh = Yl >> s, -((-Yh) >> s)

    def _reanchor(self) -> bool:
        """Refresh the working enclosure; returns False if it could not be tightened."""
        n = len(self.digits)
        j = n - self._m
        if j:
            Yl, Yh = self._Y
            pos = self._m
            while pos < n:
                k = min(self.CHUNK, n - pos)
                Yl, Yh = self._advance(Yl, Yh, pos, k)
                pos += k
            self._Y = (Yl, Yh)
            self._m = n
        Yl, Yh = self._Y
        if (Yh - Yl) >> (self.P - self.work) > 4:
            P = max(2 * self.P, self.P + int(self._logb * 64))
            budget = self._budget()
            if self.P >= budget:
                self._load_working()
                return False
            self._set_precision(min(P, budget))
            return True
        self._load_working()
        return True

    # -- stepping --------------------------------------------------------------
    def push(self, d: int):
        """Apply T_d without checking admissibility."""
        yl, yh = self._yl, self._yh
        bl, bh = self._bl, self._bh
        W = self.work
        if yl >= 0:
            lo, hi = (yl * bl) >> W, -((-(yh * bh)) >> W)
        else:
            prods = (yl * bl, yl * bh, yh * bl, yh * bh)
            lo, hi = min(prods) >> W, -((-max(prods)) >> W)
        if d:
            lo -= self._one
            hi -= self._one
        self._yl, self._yh = lo, hi
        self.digits.append(d)
        if hi - lo > self._refresh or len(self.digits) - self._m >= self.CHUNK:
            self._reanchor()

    def push_checked(self, d: int):
        """Apply T_d after certifying that digit d is admissible at the current point."""
        if d:
            ok = self.cmp(self.ctx.inv_beta)
            good = ok is not None and ok >= 0
        else:
            ok = self.cmp(self.ctx.switch_hi_real)
            good = ok is not None and ok <= 0
        if ok is None:
            raise PrecisionExhausted("admissibility of the next digit is undecidable")
        if not good:
            raise OutOfRange(f"digit {d} is not admissible at step {len(self.digits)}")
        self.push(d)

    def push_word(self, w: Word, checked: bool = True):
        for d in w:
            if checked:
                self.push_checked(d)
            else:
                self.push(d)

    # -- comparisons -------------------------------------------------------------
    def _threshold(self, t: Real):
        key = id(t)
        v = self._th.get(key)
        if v is None:
            e = t.enclosure(self.work).with_prec(self.work)
            v = (mpz(e.lo), mpz(e.hi), t)
            self._th[key] = v
        return v

    def cmp(self, t: Real) -> Optional[int]:
        """Sign of y − t: -1 or 1 when certified, None if undecidable within budget."""
        tl, th, _ = self._threshold(t)
        if self._yh < tl:
            return -1
        if self._yl > th:
            return 1
        if len(self.digits) != self._m:
            self._reanchor()
            if self._yh < tl:
                return -1
            if self._yl > th:
                return 1
        while True:
            Yl, Yh = self._Y
            e = t.enclosure(self.P).with_prec(self.P)
            if Yh < e.lo:
                return -1
            if Yl > e.hi:
                return 1
            if self.P >= self._budget():
                return None
            self._set_precision(min(2 * self.P, self._budget()))

    def lt(self, t: Real) -> Optional[bool]:
        c = self.cmp(t)
        return None if c is None else c < 0

    def gt(self, t: Real) -> Optional[bool]:
        c = self.cmp(t)
        return None if c is None else c > 0

    def point(self) -> PrecisionReal:
        return PrecisionReal._raw(int(self._yl), int(self._yh), self.work)

    def precise_point(self) -> PrecisionReal:
        self._reanchor()
        Yl, Yh = self._Y
        return PrecisionReal._raw(int(Yl), int(Yh), self.P)

    def word(self) -> Word:
        return Word(list(self.digits)) if len(self.digits) < 64 else \
            Word.from_int(int(bytes(self.digits).translate(_ASCII), 2), len(self.digits))

    def __len__(self) -> int:
        return len(self.digits)


_ASCII = bytes.maketrans(b"\x00\x01", b"01")


def _check_range(tr: OrbitTracker, ctx: BetaContext):
    lo = tr.cmp(ctx.zero_real)
    hi = tr.cmp(ctx.i_max_real)
    if lo == -1 or hi == 1:
        raise OutOfRange("x must lie in [0, 1/(β−1)]")


def _stream(x, ctx: BetaContext, n: int, rule) -> Word:
    tr = OrbitTracker(ctx, x, n)
    _check_range(tr, ctx)
    for _ in range(n):
        d = rule(tr)
        tr.push(d)
    return tr.word()


def greedy_expansion(x, ctx: BetaContext, n: int) -> Word:
    """Digit 1 whenever y ≥ 1/β."""
    def rule(tr: OrbitTracker) -> int:
        c = tr.cmp(ctx.inv_beta)
        if c is None:
            y = exact_orbit_point(tr)
            if y is not None and y == 1 / ctx.beta_real.value:
                return 1
            raise PrecisionExhausted("greedy digit undecidable (point at 1/β?)")
        return 1 if c > 0 else 0
    return _stream(x, ctx, n, rule)


def lazy_expansion(x, ctx: BetaContext, n: int) -> Word:
    """Digit 0 whenever βy ≤ 1/(β−1), i.e. y ≤ 1/(β(β−1))."""
    def rule(tr: OrbitTracker) -> int:
        c = tr.cmp(ctx.switch_hi_real)
        if c is None:
            y, b = exact_orbit_point(tr), ctx.beta_real
            if y is not None and y == 1 / (b.value * (b.value - 1)):
                return 0
            raise PrecisionExhausted("lazy digit undecidable (point at 1/(β(β−1))?)")
        return 0 if c < 0 else 1
    return _stream(x, ctx, n, rule)


def exact_orbit_point(tr: OrbitTracker) -> Optional[Fraction]:
    """Replay the orbit in exact rationals when both β and x are rational."""
    b = tr.ctx.beta_real
    if not (isinstance(b, Rational) and isinstance(tr.x, Rational)):
        return None
    y = tr.x.value
    for d in tr.digits:
        y = b.value * y - d
    return y


# ---------------------------------------------------------------------------
# univoque tests

def is_univoque_seq(s: EPSeq, ctx: BetaContext, depth: int = 64) -> Verdict:
    """Lexicographic test: tails after a 0 are ≺ α(β), tails after a 1 are ≻ reflect(α(β))."""
    a = ctx.alpha(depth)
    abar = a.reflect()
    unknown = False
    for prev, tail in s.tails():
        t = tail.prefix(depth)
        c = compare_prefix(t, a if prev == 0 else abar)
        if prev == 0 and c > 0 or prev == 1 and c < 0:
            return Verdict.NO
        if c == 0:
            unknown = True
    return Verdict.UNKNOWN if unknown else Verdict.YES


@dataclass
class ForcedWalk:
    verdict: Verdict
    digits: Word
    point: Optional[PrecisionReal]  # first branch point reached (verdict NO)


def _classify(y: PrecisionReal, ctx: BetaContext, bits: int):
    """'0' if y < 1/β, '1' if y > 1/(β(β−1)), 'S' if inside the open switch region,
    'lo'/'hi' if the walk is outside I_β, None if undecidable."""
    s_lo = ctx.inv_beta.enclosure(bits)
    s_hi = ctx.switch_hi_real.enclosure(bits)
    a = y.lt(s_lo)
    if a is True:
        if y.lt(0) is True:
            return "lo"
        return "0"
    b = y.gt(s_hi)
    if b is True:
        if y.gt(ctx.i_max_real.enclosure(bits)) is True:
            return "hi"
        return "1"
    if a is False and b is False and y.gt(s_lo) is True and y.lt(s_hi) is True:
        return "S"
    return None


def forced_walk(x, ctx: BetaContext, depth: int, bits: Optional[int] = None) -> ForcedWalk:
    """Follow forced digits from x until a branch point or ``depth`` digits."""
    bits = bits or ctx.precision
    cap = ctx.cap
    xr = x if isinstance(x, PrecisionReal) else as_real(x)
    while True:
        y = xr if isinstance(xr, PrecisionReal) else xr.enclosure(bits)
        y = y.with_prec(max(y.prec, bits + GUARD_BITS))
        b = ctx.beta(y.prec)
        digs = []
        undecided = False
        for _ in range(depth):
            c = _classify(y, ctx, y.prec)
            if c is None:
                undecided = True
                break
            if c in ("lo", "hi"):
                raise OutOfRange("orbit left [0, 1/(β−1)]")
            if c == "S":
                return ForcedWalk(Verdict.NO, Word(digs), y)
            d = 1 if c == "1" else 0
            digs.append(d)
            y = b * y - d if d else b * y
        else:
            return ForcedWalk(Verdict.YES, Word(digs), None)
        if not undecided or isinstance(xr, PrecisionReal) or bits >= cap:
            return ForcedWalk(Verdict.UNKNOWN, Word(digs), y)
        bits = min(2 * bits, cap)


def is_point_univoque(x, ctx: BetaContext, depth: int = 64) -> Verdict:
    """Yes if the orbit stays out of the switch region for ``depth`` steps."""
    y = _point(x, ctx)
    if y.lt(0) is True or y.gt(ctx.i_max_real.enclosure(y.prec)) is True:
        raise OutOfRange("x must lie in (0, 1/(β−1))")
    return forced_walk(x, ctx, depth).verdict


# ---------------------------------------------------------------------------
# enumeration

@dataclass
class ExpansionNode:
    prefix: Word
    point: PrecisionReal
    status: str  # forced0 | forced1 | branch | dead


@dataclass
class ExpansionTree:
    x: object
    depth: int
    nodes: list[ExpansionNode]

    def leaves(self) -> list[ExpansionNode]:
        return [n for n in self.nodes if len(n.prefix) == self.depth and n.status != "dead"]

    def leaf_count(self) -> int:
        return len(self.leaves())

    def branch_nodes(self) -> list[ExpansionNode]:
        return [n for n in self.nodes if n.status == "branch" and len(n.prefix) < self.depth]


def _admissible(y: PrecisionReal, ctx: BetaContext, bits: int):
    s_lo = ctx.inv_beta.enclosure(bits)
    s_hi = ctx.switch_hi_real.enclosure(bits)
    zero_ok = y.le(s_hi)
    one_ok = y.ge(s_lo)
    if zero_ok is None or one_ok is None:
        return None
    in_range = y.ge(0) is not False and y.le(ctx.i_max_real.enclosure(bits)) is not False
    if not in_range:
        return "dead"
    if zero_ok and one_ok:
        return "branch"
    if zero_ok:
        return "forced0"
    if one_ok:
        return "forced1"
    return "dead"


def enumerate_expansions(x, ctx: BetaContext, depth: int) -> ExpansionTree:
    """All admissible digit prefixes of length ≤ depth, as a tree."""
    xr = as_real(x) if not isinstance(x, PrecisionReal) else x
    root = _point(xr, ctx)
    if root.lt(0) is True or root.gt(ctx.i_max) is True:
        raise OutOfRange("x must lie in [0, 1/(β−1)]")
    bits = ctx.precision + GUARD_BITS
    beta = ctx.beta(bits)
    nodes: list[ExpansionNode] = []
    stack = [(Word(), root.with_prec(max(root.prec, bits)))]
    while stack:
        prefix, y = stack.pop()
        status = _admissible(y, ctx, y.prec)
        if status is None:
            y, status = _escalate_node(xr, prefix, ctx)
        nodes.append(ExpansionNode(prefix, y, status))
        if len(prefix) == depth or status == "dead":
            continue
        b = beta if beta.prec == y.prec else ctx.beta(y.prec)
        if status in ("forced1", "branch"):
            stack.append((prefix + _ONE, b * y - 1))
        if status in ("forced0", "branch"):
            stack.append((prefix + _ZERO, b * y))
    nodes.sort(key=lambda n: (len(n.prefix), n.prefix.bits))
    return ExpansionTree(x, depth, nodes)


_ZERO = Word("0")
_ONE = Word("1")


def _exact_status(y: Fraction, b: Fraction) -> str:
    if y < 0 or y > 1 / (b - 1):
        return "dead"
    zero_ok, one_ok = y <= 1 / (b * (b - 1)), y >= 1 / b
    return "branch" if zero_ok and one_ok else "forced0" if zero_ok else "forced1"


def _escalate_node(xr, prefix: Word, ctx: BetaContext):
    b = ctx.beta_real
    if isinstance(xr, Rational) and isinstance(b, Rational):
        # an exact tie on a switch edge: settle it in rationals
        y = xr.value
        for d in prefix:
            y = b.value * y - d
        bits = ctx.precision + GUARD_BITS
        return PrecisionReal.exact(y, bits), _exact_status(y, b.value)
    if isinstance(xr, PrecisionReal):
        raise PrecisionExhausted("boundary membership undecidable for a fixed enclosure")
    bits = 2 * (ctx.precision + GUARD_BITS)
    while bits <= ctx.cap:
        y = apply_word(prefix, xr.enclosure(bits + len(prefix)), ctx, bits + len(prefix))
        status = _admissible(y, ctx, y.prec)
        if status is not None:
            return y, status
        bits *= 2
    raise PrecisionExhausted(f"switch-region membership undecidable after prefix {prefix}")


# ---------------------------------------------------------------------------
# counting

@dataclass
class CountLimits:
    univoque_depth: int = 64
    max_branch_nodes: int = 4096
    max_path_length: int = 4096


@dataclass
class CountResult:
    kind: str  # exactly | at_least | continuum | unknown
    k: int
    expansions: list[Word] = field(default_factory=list)
    returns: list[tuple[int, Word]] = field(default_factory=list)
    branch_nodes: int = 0
    limits: Optional[CountLimits] = None

    def __str__(self) -> str:
        return {"exactly": f"Exactly({self.k})", "at_least": f"AtLeast({self.k})",
                "continuum": "ContinuumWitness", "unknown": "Unknown"}[self.kind]

    def to_dict(self) -> dict:
        return {"result": str(self), "kind": self.kind, "k": self.k,
                "expansion_prefixes": [str(w) for w in self.expansions],
                "return_words": [str(w) for _, w in self.returns],
                "branch_nodes": self.branch_nodes}


def count_expansions(x, ctx: BetaContext, limits: Optional[CountLimits] = None) -> CountResult:
    """Count expansions by walking forced segments between branch points.

    A path ends as a unique continuation when its forced walk survives
    ``univoque_depth`` steps.  A branch point whose value recurs further down
    the same path yields a return word; two distinct return words to one
    node certify a continuum of expansions.
    """
    limits = limits or CountLimits()
    xr = x if isinstance(x, PrecisionReal) else as_real(x)
    y0 = _point(xr, ctx)
    if y0.le(0) is True or y0.ge(ctx.i_max) is True:
        raise OutOfRange("x must lie in (0, 1/(β−1))")
    bits = ctx.precision + GUARD_BITS
    beta = ctx.beta(bits)
    found: list[Word] = []
    returns: list[tuple[int, Word]] = []
    branch_values: list[PrecisionReal] = []   # indexed by node id
    branch_prefix: list[Word] = []
    stack = [(Word(), y0.with_prec(max(y0.prec, bits)), ())]
    unknown = False
    while stack:
        prefix, y, ancestors = stack.pop()
        walk = forced_walk(y, ctx, limits.univoque_depth)
        if walk.verdict is Verdict.UNKNOWN and not isinstance(xr, PrecisionReal):
            # re-evaluate the whole path at higher precision
            walk = forced_walk(ExprReal(lambda k, p=prefix: apply_word(p, xr.enclosure(k + len(p)), ctx, k + len(p))),
                               ctx, limits.univoque_depth)
        if walk.verdict is Verdict.YES:
            found.append(prefix + walk.digits)
            continue
        if walk.verdict is Verdict.UNKNOWN:
            unknown = True
            continue
        z = walk.point
        here = prefix + walk.digits
        if len(here) > limits.max_path_length or len(branch_values) >= limits.max_branch_nodes:
            unknown = True
            continue
        hit = next((a for a in ancestors if branch_values[a].intersects(z)), None)
        if hit is not None:
            returns.append((hit, here[len(branch_prefix[hit]):]))
            continue
        node = len(branch_values)
        branch_values.append(z)
        branch_prefix.append(here)
        zb = z if z.prec == beta.prec else z.with_prec(beta.prec)
        b = ctx.beta(zb.prec)
        stack.append((here + _ONE, b * zb - 1, ancestors + (node,)))
        stack.append((here + _ZERO, b * zb, ancestors + (node,)))
    found.sort(key=lambda w: str(w))
    per_node: dict[int, set] = {}
    for node, w in returns:
        per_node.setdefault(node, set()).add(w)
    if any(len(ws) >= 2 for ws in per_node.values()):
        kind = "continuum"
    elif returns:
        kind = "at_least"
    elif unknown:
        kind = "unknown" if not found else "at_least"
    else:
        kind = "exactly"
    return CountResult(kind, len(found), found, returns, len(branch_values), limits)
