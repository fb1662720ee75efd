"""Certified real arithmetic on dyadic intervals, root isolation, and named bases.

A :class:`PrecisionReal` is a closed interval ``[lo, hi] * 2**-prec`` with
integer endpoints.  Every operation rounds outward, so the true value of any
composed expression stays inside the result.  Comparisons are three-valued:
they answer ``True``/``False`` when the enclosures separate and ``None`` when
they overlap, and callers escalate precision on ``None``.

:class:`Real` objects describe numbers that can be re-enclosed at any
precision (rationals, polynomial roots, roots of monotone functions, and lazy
expressions of other reals).
"""
from __future__ import annotations

import math
import os
import threading
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

import gmpy2

DEFAULT_PRECISION = int(os.environ.get("BETANORMAL_PRECISION", "128"))
PRECISION_CAP = int(os.environ.get("BETANORMAL_PRECISION_CAP", "4096"))
GUARD_BITS = 16

Number = Union[int, Fraction]


class NoSignChange(ValueError):
    """The function has the same sign at both ends of the bracket."""


class PrecisionExhausted(ArithmeticError):
    """Refinement was needed beyond the precision budget."""


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to an exact rational")


class PrecisionReal:
    """Closed dyadic interval ``[lo/2^prec, hi/2^prec]``.

    ``PrecisionReal(center, radius, precision_bits)`` builds the smallest
    representable enclosure of ``[center - radius, center + radius]``.
    """

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, center: Number = 0, radius: Number = 0,
                 precision_bits: int = DEFAULT_PRECISION):
        c = _to_fraction(center)
        r = _to_fraction(radius)
        if r < 0:
            raise ValueError("radius must be non-negative")
        scale = 1 << precision_bits
        a, b = (c - r) * scale, (c + r) * scale
        self.lo = a.numerator // a.denominator
        self.hi = -((-b.numerator) // b.denominator)
        self.prec = precision_bits

    @classmethod
    def _raw(cls, lo: int, hi: int, prec: int) -> "PrecisionReal":
        obj = cls.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        obj.prec = prec
        return obj

    @classmethod
    def exact(cls, value: Number, prec: int = DEFAULT_PRECISION) -> "PrecisionReal":
        return cls(value, 0, prec)

    @classmethod
    def from_bounds(cls, lower: Number, upper: Number,
                    prec: int = DEFAULT_PRECISION) -> "PrecisionReal":
        lower, upper = _to_fraction(lower), _to_fraction(upper)
        if lower > upper:
            raise ValueError("lower bound exceeds upper bound")
        scale = 1 << prec
        a, b = lower * scale, upper * scale
        return cls._raw(a.numerator // a.denominator,
                        -((-b.numerator) // b.denominator), prec)

    # -- views -------------------------------------------------------------
    @property
    def precision_bits(self) -> int:
        return self.prec

    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo, 1 << self.prec)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi, 1 << self.prec)

    @property
    def center(self) -> Fraction:
        return Fraction(self.lo + self.hi, 1 << (self.prec + 1))

    @property
    def radius(self) -> Fraction:
        return Fraction(self.hi - self.lo, 1 << (self.prec + 1))

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo, 1 << self.prec)

    def width_log2(self) -> float:
        """log2 of the interval width (``-inf`` for a point)."""
        w = self.hi - self.lo
        if w == 0:
            return -math.inf
        return w.bit_length() - self.prec

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __float__(self) -> float:
        return float(self.center)

    def __repr__(self) -> str:
        return f"PrecisionReal({self.decimal(20)} ± 2^{self.width_log2():.0f})"

    def decimal(self, digits: int = 30) -> str:
        """Decimal rendering of the center with ``digits`` significant places."""
        c = self.center
        if c == 0:
            return "0"
        sign = "-" if c < 0 else ""
        c = abs(c)
        e = math.floor(math.log10(c.numerator) - math.log10(c.denominator))
        scaled = c * Fraction(10) ** (digits - 1 - e)
        m = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
        s = str(m)
        if len(s) > digits:
            e += 1
            s = s[:digits]
        if e >= 0:
            if e + 1 >= len(s):
                return sign + s + "0" * (e + 1 - len(s))
            return sign + s[: e + 1] + "." + s[e + 1:]
        return sign + "0." + "0" * (-e - 1) + s

    # -- precision handling ----------------------------------------------
    def with_prec(self, prec: int) -> "PrecisionReal":
        if prec == self.prec:
            return self
        if prec > self.prec:
            s = prec - self.prec
            return PrecisionReal._raw(self.lo << s, self.hi << s, prec)
        s = self.prec - prec
        return PrecisionReal._raw(self.lo >> s, -((-self.hi) >> s), prec)

    def _coerce(self, other) -> "PrecisionReal":
        if isinstance(other, PrecisionReal):
            return other
        return PrecisionReal.exact(_to_fraction(other), self.prec)

    def _aligned(self, other):
        o = self._coerce(other)
        if o.prec == self.prec:
            return self.lo, self.hi, o.lo, o.hi, self.prec
        p = max(self.prec, o.prec)
        a, b = self.with_prec(p), o.with_prec(p)
        return a.lo, a.hi, b.lo, b.hi, p

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "PrecisionReal":
        return PrecisionReal._raw(-self.hi, -self.lo, self.prec)

    def __add__(self, other) -> "PrecisionReal":
        al, ah, bl, bh, p = self._aligned(other)
        return PrecisionReal._raw(al + bl, ah + bh, p)

    __radd__ = __add__

    def __sub__(self, other) -> "PrecisionReal":
        al, ah, bl, bh, p = self._aligned(other)
        return PrecisionReal._raw(al - bh, ah - bl, p)

    def __rsub__(self, other) -> "PrecisionReal":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PrecisionReal":
        if isinstance(other, int):
            if other >= 0:
                return PrecisionReal._raw(self.lo * other, self.hi * other, self.prec)
            return PrecisionReal._raw(self.hi * other, self.lo * other, self.prec)
        al, ah, bl, bh, p = self._aligned(other)
        if al >= 0 and bl >= 0:
            lo, hi = al * bl, ah * bh
        else:
            prods = (al * bl, al * bh, ah * bl, ah * bh)
            lo, hi = min(prods), max(prods)
        return PrecisionReal._raw(lo >> p, -((-hi) >> p), p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PrecisionReal":
        al, ah, bl, bh, p = self._aligned(other)
        if bl <= 0 <= bh:
            raise ZeroDivisionError("divisor enclosure contains zero")
        nums = (al << p, ah << p)
        lows = [_floor_div(n, d) for n in nums for d in (bl, bh)]
        highs = [_ceil_div(n, d) for n in nums for d in (bl, bh)]
        return PrecisionReal._raw(min(lows), max(highs), p)

    def __rtruediv__(self, other) -> "PrecisionReal":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "PrecisionReal":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = PrecisionReal.exact(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base.square()
        return result

    def square(self) -> "PrecisionReal":
        lo, hi = self.lo, self.hi
        if lo >= 0:
            a, b = lo * lo, hi * hi
        elif hi <= 0:
            a, b = hi * hi, lo * lo
        else:
            a, b = 0, max(lo * lo, hi * hi)
        return PrecisionReal._raw(a >> self.prec, -((-b) >> self.prec), self.prec)

    def hull(self, other: "PrecisionReal") -> "PrecisionReal":
        al, ah, bl, bh, p = self._aligned(other)
        return PrecisionReal._raw(min(al, bl), max(ah, bh), p)

    # -- three-valued comparisons -----------------------------------------
    def cmp(self, other) -> Optional[int]:
        """-1 / 1 when the enclosures separate, 0 for equal points, else None."""
        al, ah, bl, bh, _ = self._aligned(other)
        if ah < bl:
            return -1
        if al > bh:
            return 1
        if al == ah == bl == bh:
            return 0
        return None

    def lt(self, other) -> Optional[bool]:
        al, ah, bl, bh, _ = self._aligned(other)
        if ah < bl:
            return True
        if al >= bh:
            return False
        return None

    def le(self, other) -> Optional[bool]:
        al, ah, bl, bh, _ = self._aligned(other)
        if ah <= bl:
            return True
        if al > bh:
            return False
        return None

    def gt(self, other) -> Optional[bool]:
        r = self.le(other)
        return None if r is None else not r

    def ge(self, other) -> Optional[bool]:
        r = self.lt(other)
        return None if r is None else not r

    def sign(self) -> Optional[int]:
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def contains(self, value) -> bool:
        """True when the number (or whole enclosure) ``value`` lies inside."""
        al, ah, bl, bh, _ = self._aligned(value)
        return al <= bl and bh <= ah

    def intersects(self, other) -> bool:
        al, ah, bl, bh, _ = self._aligned(other)
        return not (ah < bl or bh < al)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrecisionReal):
            return NotImplemented
        return (self.lo, self.hi, self.prec) == (other.lo, other.hi, other.prec)

    def __hash__(self) -> int:
        return hash((self.lo, self.hi, self.prec))


class Interval:
    """Closed interval with enclosure endpoints; membership is three-valued."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: PrecisionReal, hi: PrecisionReal):
        if lo.gt(hi) is True:
            raise ValueError("interval endpoints out of order")
        self.lo = lo
        self.hi = hi

    def contains(self, x: PrecisionReal) -> Optional[bool]:
        a, b = self.lo.le(x), x.le(self.hi)
        if a is False or b is False:
            return False
        if a is True and b is True:
            return True
        return None

    def interior_contains(self, x: PrecisionReal) -> Optional[bool]:
        a, b = self.lo.lt(x), x.lt(self.hi)
        if a is False or b is False:
            return False
        if a is True and b is True:
            return True
        return None

    def disjoint(self, other: "Interval") -> Optional[bool]:
        if self.hi.lt(other.lo) is True or other.hi.lt(self.lo) is True:
            return True
        if self.hi.ge(other.lo) is True and other.hi.ge(self.lo) is True:
            return False
        return None

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        return f"[{self.lo.decimal(12)}, {self.hi.decimal(12)}]"


class IntPolynomial:
    """Integer polynomial with ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("the zero polynomial has no leading coefficient")
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, x):
        if isinstance(x, PrecisionReal):
            return self.eval_ball(x)
        x = _to_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_ball(self, x: PrecisionReal) -> PrecisionReal:
        acc = PrecisionReal.exact(self.coeffs[-1], x.prec)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def sign_at_dyadic(self, m: int, k: int) -> int:
        """Exact sign of p(m / 2^k)."""
        return _sign(self.scaled_value(m, k))

    def scaled_value(self, m: int, k: int) -> int:
        """The integer p(m/2^k) * 2^(k*deg), computed exactly."""
        m = gmpy2.mpz(m)
        d = self.degree
        acc = gmpy2.mpz(self.coeffs[-1])
        for j, c in enumerate(reversed(self.coeffs[:-1]), start=1):
            acc = acc * m + (gmpy2.mpz(c) << (k * j)) if c else acc * m
        return int(acc)

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            raise ValueError("derivative of a constant is the zero polynomial")
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            body = ("" if mag == 1 and i else str(mag)) + ("x" if i else "") + (f"^{i}" if i > 1 else "")
            terms.append(("-" if c < 0 else "+") + body)
        s = "".join(terms)
        return "IntPolynomial(" + (s[1:] if s.startswith("+") else s) + ")"


def _sign(v) -> int:
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# bracketing solver

def _bracket_solve(sign_value: Callable[[int, int], tuple], a: int, b: int,
                   q: int, target: int):
    """Shrink the dyadic bracket ``[a, b] / 2^q`` to width at most ``2^-target``.

    ``sign_value(m, q)`` returns ``(sign, approx)`` at m/2^q: the certified
    sign (``None`` if undecidable) and an integer proportional to the value
    with a scale shared by all calls.  Steps are secant steps on the two
    latest iterates, replaced by bisection whenever they leave the bracket or
    stop shrinking; once a step is below the target width the bracket is
    closed by probing both sides of the last iterate.
    """
    sa, fa = sign_value(a, q)
    sb, fb = sign_value(b, q)
    if sa is None or sb is None:
        raise PrecisionExhausted("sign at a bracket endpoint is undecidable")
    if sa == 0:
        return a, a
    if sb == 0:
        return b, b
    if sa == sb:
        raise NoSignChange("no sign change on the bracket")
    goal = 1 << max(q - target, 0)
    x0, f0, x1, f1 = a, fa, b, fb
    last_step = b - a
    slow = 0
    for _ in range(8 * q + 64):
        if b - a <= goal:
            return a, b
        x2 = x1 - (f1 * (x1 - x0)) // (f1 - f0) if f1 != f0 else (a + b) >> 1
        if not (a < x2 < b):
            # the secant overshoots an endpoint: the root is likely within a
            # hair of it, so try to close the bracket there
            h = max(goal >> 2, 1)
            if x2 >= b and b - h > a:
                sp, _ = sign_value(b - h, q)
                if sp == sa:
                    return b - h, b
            elif x2 <= a and a + h < b:
                sp, _ = sign_value(a + h, q)
                if sp == sb:
                    return a, a + h
            x2 = (a + b) >> 1
            slow = 0
        elif slow >= 2:
            x2 = (a + b) >> 1
            slow = 0
        s2, f2 = sign_value(x2, q)
        if s2 is None:
            # x2 lies in the evaluation noise around the root: probe either side.
            h = max(goal >> 2, 1)
            sl, _ = sign_value(x2 - h, q)
            sr, _ = sign_value(x2 + h, q)
            if sl is not None and sl == sa and sr == sb:
                return x2 - h, x2 + h
            raise PrecisionExhausted("function sign undecidable near the root")
        if s2 == 0:
            return x2, x2
        if s2 == sa:
            a = x2
        else:
            b = x2
        step = abs(x2 - x1)
        slow = slow + 1 if 2 * step > last_step else 0
        last_step = step
        x0, f0, x1, f1 = x1, f1, x2, f2
        h = max(goal >> 2, 1)
        if 8 * step <= goal and b - a > goal:
            lo_p, hi_p = max(x2 - h, a), min(x2 + h, b)
            sl, _ = sign_value(lo_p, q) if lo_p != a else (sa, None)
            sr, _ = sign_value(hi_p, q) if hi_p != b else (sb, None)
            if sl == sa and sr == sb:
                return lo_p, hi_p
    raise PrecisionExhausted("bracket refinement did not converge")


def _as_dyadic_bounds(lo, hi, q: int) -> tuple:
    lo_f = lo.lower if isinstance(lo, PrecisionReal) else _to_fraction(lo)
    hi_f = hi.upper if isinstance(hi, PrecisionReal) else _to_fraction(hi)
    a = lo_f * (1 << q)
    b = hi_f * (1 << q)
    return -((-a.numerator) // a.denominator), b.numerator // b.denominator


def isolate_root(p: IntPolynomial, lo, hi, bits: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Enclosure of width at most 2^-bits of the root of ``p`` bracketed by [lo, hi]."""
    q = bits + GUARD_BITS
    a, b = _as_dyadic_bounds(lo, hi, q)

    def sv(m: int, k: int):
        v = p.scaled_value(m, k)
        return _sign(v), v

    a, b = _bracket_solve(sv, a, b, q, bits)
    return PrecisionReal._raw(a, b, q)


def solve_value_equation(f: Callable[[PrecisionReal], PrecisionReal], lo, hi,
                         bits: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Enclosure of width at most 2^-bits of the zero of ``f`` on [lo, hi].

    ``f`` is evaluated on point enclosures at a working precision a little
    above ``bits`` and must return an enclosure of the function value.
    """
    q = bits + GUARD_BITS
    work = q + 32
    a, b = _as_dyadic_bounds(lo, hi, q)

    def sv(m: int, k: int):
        y = f(PrecisionReal._raw(m << (work - k), m << (work - k), work))
        y = y.with_prec(work)
        return y.sign(), (y.lo + y.hi) >> 1

    a, b = _bracket_solve(sv, a, b, q, bits)
    return PrecisionReal._raw(a, b, q)


# ---------------------------------------------------------------------------
# refinable reals

class Real:
    """A real number that can be enclosed to any requested precision."""

    name: str = ""
    refinable = True

    def __init__(self):
        self._lock = threading.Lock()
        self._cache: dict[int, PrecisionReal] = {}

    def enclosure(self, bits: int = DEFAULT_PRECISION) -> PrecisionReal:
        cached = self._cache.get(bits)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._cache.get(bits)
            if cached is None:
                cached = self._compute(bits)
                self._cache[bits] = cached
        return cached

    def _compute(self, bits: int) -> PrecisionReal:
        raise NotImplementedError

    def __float__(self) -> float:
        return float(self.enclosure(64).center)

    def __repr__(self) -> str:
        label = self.name or type(self).__name__
        return f"<{label} ≈ {self.enclosure(64).decimal(15)}>"


class Rational(Real):
    def __init__(self, value, name: str = ""):
        super().__init__()
        self.value = _to_fraction(value)
        v = self.value
        small = v.numerator.bit_length() + v.denominator.bit_length() <= 256
        self.name = name or (str(v) if small else f"<rational of {v.denominator.bit_length()} bits>")

    def _compute(self, bits: int) -> PrecisionReal:
        return PrecisionReal.exact(self.value, bits + GUARD_BITS)


class AlgebraicReal(Real):
    """The unique root of an integer polynomial inside a rational bracket."""

    def __init__(self, poly: IntPolynomial, lo, hi, name: str = ""):
        super().__init__()
        self.poly = poly if isinstance(poly, IntPolynomial) else IntPolynomial(poly)
        self.bracket = (_to_fraction(lo), _to_fraction(hi))
        self.name = name
        self._best: Optional[PrecisionReal] = None
        lo_s = _sign(self.poly(self.bracket[0]))
        hi_s = _sign(self.poly(self.bracket[1]))
        if lo_s == hi_s and lo_s != 0:
            raise NoSignChange(f"{self.poly} has no sign change on {self.bracket}")

    def _compute(self, bits: int) -> PrecisionReal:
        best = self._best
        if best is not None and best.width_log2() <= -bits:
            return best
        lo, hi = (best.lower, best.upper) if best is not None else self.bracket
        enc = isolate_root(self.poly, lo, hi, bits)
        if best is None or enc.width_log2() < best.width_log2():
            self._best = enc
        return enc


class SolvedReal(Real):
    """The unique zero of a sign-changing function on a rational bracket."""

    def __init__(self, f: Callable[[PrecisionReal], PrecisionReal], lo, hi, name: str = ""):
        super().__init__()
        self.f = f
        self.bracket = (_to_fraction(lo), _to_fraction(hi))
        self.name = name
        self._best: Optional[PrecisionReal] = None

    def _compute(self, bits: int) -> PrecisionReal:
        best = self._best
        if best is not None and best.width_log2() <= -bits:
            return best
        lo, hi = (best.lower, best.upper) if best is not None else self.bracket
        enc = solve_value_equation(self.f, lo, hi, bits)
        if best is None or enc.width_log2() < best.width_log2():
            self._best = enc
        return enc


class FixedReal(Real):
    """A number known only through one enclosure (e.g. a decimal input)."""

    refinable = False

    def __init__(self, ball: PrecisionReal, name: str = ""):
        super().__init__()
        self.ball = ball
        self.name = name

    def _compute(self, bits: int) -> PrecisionReal:
        # the ball never tightens; comparisons it cannot settle surface as
        # undecided results and, eventually, PrecisionExhausted in the caller
        return self.ball

    def __repr__(self) -> str:
        return f"<{self.name or 'fixed'} ± 2^{self.ball.width_log2():.0f}>"


class ExprReal(Real):
    """A real defined by ``fn(bits) -> PrecisionReal`` (e.g. an expression in β)."""

    def __init__(self, fn: Callable[[int], PrecisionReal], name: str = ""):
        super().__init__()
        self.fn = fn
        self.name = name

    def _compute(self, bits: int) -> PrecisionReal:
        extra = GUARD_BITS
        prev = math.inf
        for _ in range(8):
            enc = self.fn(bits + extra)
            w = enc.width_log2()
            if w <= -bits:
                return enc
            if w >= prev - 1:
                # inputs known only to fixed accuracy: the enclosure stopped shrinking
                return enc
            prev = w
            extra = 2 * extra + int(w + bits) + 1
        raise PrecisionExhausted(f"could not enclose {self.name or 'expression'} to {bits} bits")


def as_real(x) -> Real:
    if isinstance(x, Real):
        return x
    if isinstance(x, PrecisionReal):
        return FixedReal(x)
    return Rational(x)


def decide(query: Callable[[int], Optional[object]], bits: int = DEFAULT_PRECISION,
           cap: int = PRECISION_CAP, what: str = "comparison"):
    """Evaluate a three-valued ``query(bits)`` with precision doubling up to ``cap``."""
    while True:
        r = query(bits)
        if r is not None:
            return r
        if bits >= cap:
            raise PrecisionExhausted(f"{what} undecidable at {bits} bits")
        bits = min(2 * bits, cap)


# ---------------------------------------------------------------------------
# named bases

def thue_morse_series(z: PrecisionReal) -> PrecisionReal:
    """Enclosure of sum_{i>=0} t_i z^i for 0 < z < 1, with t the Thue–Morse sequence.

    Uses sum (-1)^{t_i} z^i = prod_k (1 - z^{2^k}) and t_i = (1 - (-1)^{t_i})/2.
    """
    prec = z.prec
    one = PrecisionReal.exact(1, prec)
    prod = one
    zk = z
    while zk.hi > 1:
        prod = prod * (one - zk)
        zk = zk.square()
    # remaining factors lie in [1 - 2 z^{2^{K+1}}, 1]
    tail = PrecisionReal.from_bounds(1 - 2 * zk.upper, 1, prec)
    prod = prod * tail
    geom = one / (one - z)
    return (geom - prod) * Fraction(1, 2)


def _kl_equation(beta: PrecisionReal) -> PrecisionReal:
    return thue_morse_series(1 / beta) - 1


def periodic_value(period: str, beta: PrecisionReal) -> PrecisionReal:
    """Closed form of sum over (period)^infinity of d_i beta^-i."""
    num = PrecisionReal.exact(0, beta.prec)
    for ch in period:
        num = num * beta + (1 if ch == "1" else 0)
    return num / (beta ** len(period) - 1)


def _example43_equation(beta: PrecisionReal) -> PrecisionReal:
    return periodic_value("1000" + "110" * 4, beta) - periodic_value("011111", beta)


GOLDEN = AlgebraicReal(IntPolynomial([-1, -1, 1]), 1, 2, name="golden")
BETA_T = AlgebraicReal(IntPolynomial([1, -2, -1, 1]), 1, 2, name="beta_T")
MULTINACCI4 = AlgebraicReal(IntPolynomial([-1, -1, -1, -1, 1]), 1, 2, name="multinacci4")
BETA_KL = SolvedReal(_kl_equation, Fraction(3, 2), 2, name="beta_KL")
EXAMPLE43 = SolvedReal(_example43_equation, Fraction(3, 2), 2, name="example43")

NAMED_BASES: dict[str, Real] = {
    r.name: r for r in (GOLDEN, BETA_KL, BETA_T, MULTINACCI4, EXAMPLE43)
}


def named_base(name: str) -> Real:
    try:
        return NAMED_BASES[name]
    except KeyError:
        raise KeyError(f"unknown base {name!r}; known: {', '.join(NAMED_BASES)}") from None


def parse_real(text: str, *, decimal_as_enclosure: bool = False) -> Real:
    """Parse a named base, ``p/q`` rational, or decimal literal.

    With ``decimal_as_enclosure`` a decimal with d fractional digits becomes
    an enclosure of width 10^-d rather than an exact rational.
    """
    t = text.strip()
    if t in NAMED_BASES:
        return NAMED_BASES[t]
    if t.startswith("exact:"):
        return Rational(Fraction(t[6:]), name=t[6:])
    if "/" in t:
        return Rational(Fraction(t), name=t)
    value = Fraction(t)
    if decimal_as_enclosure and "." in t:
        digits = len(t.split(".", 1)[1].rstrip())
        radius = Fraction(1, 2 * 10 ** digits)
        prec = int(digits * 3.33) + 2 * GUARD_BITS
        return FixedReal(PrecisionReal(value, radius, prec), name=t)
    return Rational(value, name=t)
