"""The piecewise-linear map M_β, Monte-Carlo frequency experiments, and the
scripted checks for the multinacci and continuum examples."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import random
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .expansions import (
    BetaContext, CountLimits, OrbitTracker, OutOfRange, apply_word, count_expansions,
    orbit, pi_beta, seq_real,
)
from .numerics import (
    EXAMPLE43, MULTINACCI4, AlgebraicReal, ExprReal, PrecisionExhausted, PrecisionReal,
    Rational, as_real,
)
from .words import EPSeq, Word, digit_stats

log = logging.getLogger(__name__)


class CutPointHit(ArithmeticError):
    pass


class Mismatch(AssertionError):
    def __init__(self, k: int, found: str):
        super().__init__(f"x_{k}: expected Exactly({k}), found {found}")
        self.k, self.found = k, found


class OrbitEntersSwitch(AssertionError):
    pass


# ---------------------------------------------------------------------------
# M_β

@dataclass
class MBetaRun:
    beta: str
    x0: str
    n_steps: int
    digits: Word
    entered_at: Optional[int]           # first step with the orbit in A_β
    absorption_ok: bool
    checkpoints: list = field(default_factory=list)    # (n, freq0)

    @property
    def freq0(self) -> float:
        return digit_stats(self.digits).freq0


def _mbeta_tracker(x, ctx: BetaContext, n: int) -> OrbitTracker:
    tr = OrbitTracker(ctx, x, n)
    lo, hi = tr.cmp(ctx.zero_real), tr.cmp(ctx.i_max_real)
    if lo == -1 or hi == 1:
        raise OutOfRange("x must lie in [0, 1/(β−1)]")
    return tr


def _mbeta_digit(tr: OrbitTracker, ctx: BetaContext) -> int:
    c = tr.cmp(ctx.cut_real)
    if c is None:
        raise PrecisionExhausted(f"orbit at the cut point 1/(2(β−1)) at step {len(tr)}")
    return 0 if c < 0 else 1


def mbeta_digits(x, ctx: BetaContext, n: int) -> Word:
    tr = _mbeta_tracker(x, ctx, n)
    for _ in range(n):
        tr.push(_mbeta_digit(tr, ctx))
    return tr.word()


def mbeta_run(x, ctx: BetaContext, n: int, checkpoints=()) -> MBetaRun:
    """M_β digits with the absorption invariant checked at every step."""
    tr = _mbeta_tracker(x, ctx, n)
    entered = None
    ok = True
    marks = sorted(set(checkpoints))
    pts = []
    zeros = 0
    for i in range(n):
        inside = tr.cmp(ctx.a_lo_real) != -1 and tr.cmp(ctx.a_hi_real) != 1
        if inside and entered is None:
            entered = i
        elif entered is not None and not inside:
            ok = False
        d = _mbeta_digit(tr, ctx)
        zeros += 1 - d
        tr.push(d)
        if marks and i + 1 == marks[0]:
            pts.append((i + 1, zeros / (i + 1)))
            marks.pop(0)
    return MBetaRun(ctx.name, str(getattr(x, "name", x)), n, tr.word(), entered, ok, pts)


def reflect_conjugacy_check(x, ctx: BetaContext, n: int) -> bool:
    """M^n(x) = 1/(β−1) − M^n(1/(β−1) − x) along the first n steps."""
    xr = as_real(x)
    xbar = ExprReal(lambda k: ctx.i_max_real.enclosure(k) - xr.enclosure(k), "1/(β−1)−x")
    a, b = _mbeta_tracker(xr, ctx, n), _mbeta_tracker(xbar, ctx, n)
    for i in range(n + 1):
        s = a.point() + b.point()
        if not s.intersects(ctx.i_max_real.enclosure(s.prec)):
            return False
        if i == n:
            break
        ca, cb = a.cmp(ctx.cut_real), b.cmp(ctx.cut_real)
        if ca is None or cb is None or ca == 0 or cb == 0:
            raise CutPointHit(f"cut point reached at step {i}")
        da, db = (0 if ca < 0 else 1), (0 if cb < 0 else 1)
        if da + db != 1:
            return False
        a.push(da)
        b.push(db)
    return True


@dataclass
class FrequencyReport:
    beta: str
    samples: int
    n: int
    seed: int
    mean: float
    stdev: float
    histogram: dict
    curve: list            # (checkpoint, mean, stdev)
    absorption_ok: bool
    skipped: int
    freqs: list = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d.pop("freqs")
        return d


def sample_attractor_point(ctx: BetaContext, rng: random.Random, bits: int = 64) -> ExprReal:
    """Uniform dyadic offset u ∈ [0, 1) giving x = (β/(2(β−1)) − 1) + u ∈ A_β."""
    u = Fraction(rng.getrandbits(bits), 1 << bits)
    ur = Rational(u)
    return ExprReal(lambda k: ctx.a_lo_real.enclosure(k) + ur.enclosure(k), "A_lo+u")


def frequency_experiment(ctx: BetaContext, samples: int, n: int, seed: int,
                         bins: int = 20) -> FrequencyReport:
    if samples < 1 or n < 1:
        raise ValueError("samples and n must be positive")
    rng = random.Random(seed)
    # enough random bits that an n-step orbit never runs out of them (β = 2 would
    # otherwise land every short dyadic on the cut point)
    bits = 64 + math.ceil(n * ctx.log2_beta)
    marks = sorted({max(1, n // 10), max(1, n // 4), max(1, n // 2), n})
    freqs, curves, skipped, absorbed = [], [], 0, True
    for _ in range(samples):
        x = sample_attractor_point(ctx, rng, bits)
        try:
            run = mbeta_run(x, ctx, n, marks)
        except PrecisionExhausted:
            skipped += 1
            log.info("sample skipped at the cut point")
            continue
        absorbed &= run.absorption_ok
        freqs.append(run.freq0)
        curves.append([f for _, f in run.checkpoints])
    hist: dict = {}
    for f in freqs:
        b = min(int(f * bins), bins - 1)
        key = f"{b / bins:.2f}-{(b + 1) / bins:.2f}"
        hist[key] = hist.get(key, 0) + 1
    curve = []
    for j, m in enumerate(marks):
        col = [c[j] for c in curves]
        curve.append((m, statistics.fmean(col) if col else math.nan,
                      statistics.pstdev(col) if len(col) > 1 else 0.0))
    return FrequencyReport(ctx.name, samples, n, seed,
                           statistics.fmean(freqs) if freqs else math.nan,
                           statistics.pstdev(freqs) if len(freqs) > 1 else 0.0,
                           dict(sorted(hist.items())), curve, absorbed, skipped, freqs)


# ---------------------------------------------------------------------------
# exact word identities in Z[β]

def words_equal_exact(u: Word, v: Word, beta: AlgebraicReal) -> bool:
    """π_β(u 0^∞) = π_β(v 0^∞) decided exactly modulo the minimal polynomial."""
    L = max(len(u), len(v))
    diff = [0] * (L + 1)             # coefficient of t^j
    for w, s in ((u, 1), (v, -1)):
        for i, d in enumerate(w, start=1):
            if d:
                diff[L - i] += s
    p = beta.poly.coeffs
    deg = len(p) - 1
    for j in range(L, deg - 1, -1):         # reduce with the monic poly
        c = diff[j]
        if c:
            for i in range(deg + 1):
                diff[j - deg + i] -= c * p[i]
    return not any(diff)


def _assert(report: dict, name: str, ok: bool, detail: str = "") -> bool:
    report["assertions"].append({"name": name, "passed": bool(ok), "detail": detail})
    return ok


def multinacci_point(k: int) -> EPSeq:
    """01^{4k−1}(011)^∞."""
    return EPSeq(Word("0") + Word("1") * (4 * k - 1), Word("011"))


def tail_periodic_start(w: Word, period: Word) -> Optional[int]:
    """Smallest s with w[s:] following some rotation of ``period``."""
    L = len(period)
    rots = {(period * 2)[i:i + L] for i in range(L)}
    n = len(w)
    start = None
    for s in range(n - 1, -1, -1):
        tail = w[s:]
        if any((r * (len(tail) // L + 1))[:len(tail)] == tail for r in rots):
            start = s
        else:
            break
    return start


def verify_example_multinacci(k_max: int = 4, depth: int = 48,
                              limits: Optional[CountLimits] = None) -> dict:
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    ctx = BetaContext(MULTINACCI4)
    report = {"beta": ctx.beta().decimal(20), "x": [], "assertions": [], "stats": {}}
    _assert(report, "substitution 1·0^∞ ~ 0·1^4·0^∞",
            words_equal_exact(Word("1"), Word("01111"), MULTINACCI4))
    for k in range(1, k_max + 1):
        s = multinacci_point(k)
        x = seq_real(s, ctx, f"x_{k}")
        report["x"].append({"k": k, "seq": str(s), "value": x.enclosure(64).decimal(15)})
        res = count_expansions(x, ctx, limits)
        if res.kind != "exactly" or res.k != k:
            raise Mismatch(k, str(res))
        _assert(report, f"x_{k} has exactly {k} expansions", True, str(res))
        for w in res.expansions:
            pref = w[:depth]
            st = tail_periodic_start(pref, Word("011"))
            half = pref[depth // 2:]
            f0 = half.zeros() / len(half)
            _assert(report, f"x_{k} expansion {pref[:12]}… ends in (011)^inf by depth {depth}",
                    st is not None and st < depth - 6, f"tail from digit {st}")
            _assert(report, f"x_{k} expansion {pref[:12]}… tail freq0 ≤ 1/3",
                    f0 <= 1 / 3 + 1e-12, f"{f0:.4f}")
        report["stats"][f"k{k}"] = res.to_dict()
    report["ok"] = all(a["passed"] for a in report["assertions"])
    return report


# ---------------------------------------------------------------------------
# the continuum example

WORD_C = Word("1000") + Word("110") * 4      # 10^3 (110)^4
WORD_D = Word("011111")                      # 0 1^5
ROUNDED_SWITCH = (Fraction("0.542276"), Fraction("0.642445"))


def verify_example_continuum(bits: int = 256) -> tuple[dict, str]:
    """Both substitution words fix x and keep its orbit out of the switch region."""
    ctx = BetaContext(EXAMPLE43, precision=bits)
    x = pi_beta(EPSeq(Word(), WORD_D), ctx, bits)
    sw = ctx.switch
    report = {"beta": ctx.beta().decimal(20), "x": x.decimal(20),
              "switch": [sw.lo.decimal(12), sw.hi.decimal(12)], "assertions": [], "stats": {}}
    rows = []
    rlo, rhi = (PrecisionReal.exact(v, bits) for v in ROUNDED_SWITCH)
    for tag, word in (("L", WORD_C), ("R", WORD_D)):
        pts = orbit(x, word, ctx, bits)
        # x itself is the branch point; every later digit must be the forced one
        for i in range(1, len(word)):
            y, d = pts[i - 1], word[i]
            if not (y.lt(sw.lo) is True and d == 0 or y.gt(sw.hi) is True and d == 1):
                raise OrbitEntersSwitch(f"{tag}{i}: digit {d} is not forced")
        for i, y in enumerate(pts[:-1], start=1):
            outside = y.lt(sw.lo) is True or y.gt(sw.hi) is True
            outside_r = y.lt(rlo) is True or y.gt(rhi) is True
            if not (outside and outside_r):
                raise OrbitEntersSwitch(f"{tag}{i} = {y.decimal(10)} meets the switch region")
            rows.append((f"{tag}{i}", y.decimal(12), sw.lo.decimal(12), sw.hi.decimal(12)))
        fixes = pts[-1].intersects(x) and pts[-1].width_log2() < -bits // 2
        _assert(report, f"word {word} maps x to x", fixes, f"|T(x) − x| ≤ 2^{pts[-1].width_log2():.0f}")
    _assert(report, "15 L-orbit points outside the switch region",
            sum(r[0].startswith("L") for r in rows) == 15)
    _assert(report, "5 R-orbit points outside the switch region",
            sum(r[0].startswith("R") for r in rows) == 5)
    report["ok"] = all(a["passed"] for a in report["assertions"])
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["step", "value", "switch_lo", "switch_hi"])
    wr.writerows(rows)
    return report, buf.getvalue()


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False)
