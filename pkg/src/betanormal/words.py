"""Binary words, eventually periodic sequences, and Thue–Morse chains.

Words are packed into a Python integer, most significant bit first, so the
integer value of a word is its binary numeral.  Concatenation, reflection and
equal-length lexicographic comparison are then single integer operations.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class SeedMustStartWithZero(ValueError):
    pass


class LastDigitNotZero(ValueError):
    pass


class WordSyntaxError(ValueError):
    pass


class Word:
    __slots__ = ("bits", "length")

    def __init__(self, digits: Union[str, Iterable[int], "Word"] = ""):
        if isinstance(digits, Word):
            self.bits, self.length = digits.bits, digits.length
            return
        if isinstance(digits, str):
            s = digits.strip()
            if s and set(s) - {"0", "1"}:
                raise WordSyntaxError(f"not a binary word: {digits!r}")
            self.bits = int(s, 2) if s else 0
            self.length = len(s)
            return
        bits = 0
        n = 0
        for d in digits:
            if d not in (0, 1):
                raise WordSyntaxError(f"digit {d!r} is not 0 or 1")
            bits = (bits << 1) | d
            n += 1
        self.bits, self.length = bits, n

    @classmethod
    def from_int(cls, bits: int, length: int) -> "Word":
        w = cls.__new__(cls)
        w.bits = bits & ((1 << length) - 1)
        w.length = length
        return w

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i):
        if isinstance(i, slice):
            start, stop, step = i.indices(self.length)
            if step != 1:
                return Word([self[j] for j in range(start, stop, step)])
            if stop <= start:
                return Word()
            return Word.from_int(self.bits >> (self.length - stop), stop - start)
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError("word index out of range")
        return (self.bits >> (self.length - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        s = format(self.bits, "b").zfill(self.length) if self.length else ""
        return (1 if c == "1" else 0 for c in s)

    def __str__(self) -> str:
        return format(self.bits, "b").zfill(self.length) if self.length else ""

    def __repr__(self) -> str:
        s = str(self)
        return f"Word('{s if len(s) <= 64 else s[:61] + '...'}')"

    def __add__(self, other: "Word") -> "Word":
        return Word.from_int((self.bits << other.length) | other.bits, self.length + other.length)

    def __mul__(self, n: int) -> "Word":
        if n < 0:
            raise ValueError("negative repetition")
        if n == 0 or self.length == 0:
            return Word()
        # (w repeated n times) = w * (2^{Ln} - 1) / (2^L - 1)
        L = self.length
        return Word.from_int(self.bits * (((1 << (L * n)) - 1) // ((1 << L) - 1)), L * n)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.length == other.length and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.bits, self.length))

    def ones(self) -> int:
        return self.bits.bit_count()

    def zeros(self) -> int:
        return self.length - self.bits.bit_count()

    def reflect(self) -> "Word":
        return Word.from_int(self.bits ^ ((1 << self.length) - 1), self.length)

    def startswith(self, prefix: "Word") -> bool:
        return prefix.length <= self.length and self[: prefix.length] == prefix

    def last(self) -> int:
        return self.bits & 1

    def to_bytes(self) -> bytes:
        """Digits as ASCII '0'/'1' bytes."""
        return str(self).encode()


@dataclass(frozen=True)
class EPSeq:
    """The sequence ``preperiod · period^∞``."""

    preperiod: Word
    period: Word

    def __post_init__(self):
        if len(self.period) == 0:
            raise ValueError("period must be nonempty")

    @classmethod
    def periodic(cls, period: Union[Word, str]) -> "EPSeq":
        return cls(Word(), Word(period))

    def canonical(self) -> "EPSeq":
        per = self.period
        L = len(per)
        for d in _divisors(L):
            if per[:d] * (L // d) == per:
                per = per[:d]
                break
        pre = self.preperiod
        while len(pre) and pre.last() == per.last():
            # a·(x·a)^∞ = (a·x)^∞ with the period rotated right
            per = per[-1:] + per[:-1]
            pre = pre[:-1]
        return EPSeq(pre, per)

    def is_canonical(self) -> bool:
        c = self.canonical()
        return c.preperiod == self.preperiod and c.period == self.period

    def digit(self, i: int) -> int:
        """0-indexed digit."""
        p = len(self.preperiod)
        if i < p:
            return self.preperiod[i]
        return self.period[(i - p) % len(self.period)]

    def prefix(self, n: int) -> Word:
        p = len(self.preperiod)
        if n <= p:
            return self.preperiod[:n]
        L = len(self.period)
        reps = (n - p + L - 1) // L
        return (self.preperiod + self.period * reps)[:n]

    def shift(self, n: int = 1) -> "EPSeq":
        p = len(self.preperiod)
        if n <= p:
            return EPSeq(self.preperiod[n:], self.period)
        k = (n - p) % len(self.period)
        return EPSeq(Word(), self.period[k:] + self.period[:k])

    def tails(self):
        """Pairs (preceding digit, tail) for every distinct shift n ≥ 1."""
        for n in range(1, len(self.preperiod) + len(self.period) + 1):
            yield self.digit(n - 1), self.shift(n)

    def reflect(self) -> "EPSeq":
        return EPSeq(self.preperiod.reflect(), self.period.reflect())

    def __eq__(self, other) -> bool:
        if not isinstance(other, EPSeq):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.preperiod == b.preperiod and a.period == b.period

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c.preperiod, c.period))

    def __str__(self) -> str:
        return f"{self.preperiod}({self.period})^inf"

    def __repr__(self) -> str:
        return f"EPSeq('{self}')"


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def reflect(x):
    """Digit-wise reflection of a Word or EPSeq."""
    return x.reflect()


def comparison_length(a: EPSeq, b: EPSeq) -> int:
    return max(len(a.preperiod), len(b.preperiod)) + math.lcm(len(a.period), len(b.period))


def lex_compare(a: EPSeq, b: EPSeq) -> int:
    """-1, 0, 1 for a ≺ b, a = b, a ≻ b."""
    L = comparison_length(a, b)
    x, y = a.prefix(L).bits, b.prefix(L).bits
    return (x > y) - (x < y)


def compare_prefix(a: Word, b: Word) -> int:
    """Lexicographic comparison on the common prefix; 0 if one extends the other."""
    n = min(len(a), len(b))
    x, y = a[:n].bits, b[:n].bits
    return (x > y) - (x < y)


def tm_chain(seed: Word, k: int) -> Word:
    """ω^k of the Thue–Morse chain ω^{j+1} = ω^j · reflect(ω^j)."""
    seed = Word(seed)
    if len(seed) == 0 or seed[0] != 0:
        raise SeedMustStartWithZero(f"seed {seed} must begin with 0")
    if k < 0:
        raise ValueError("k must be non-negative")
    bits, L = seed.bits, len(seed)
    for _ in range(k):
        bits = (bits << L) | (bits ^ ((1 << L) - 1))
        L *= 2
    return Word.from_int(bits, L)


def tm_limit_digits(seed: Word, n: int) -> Word:
    """First n digits of the limit of the chain generated by ``seed``."""
    seed = Word(seed)
    if len(seed) == 0 or seed[0] != 0:
        raise SeedMustStartWithZero(f"seed {seed} must begin with 0")
    k = 0
    while len(seed) << k < n:
        k += 1
    return tm_chain(seed, k)[:n]


@dataclass(frozen=True)
class DigitStats:
    zeros: int
    ones: int
    max_prefix_imbalance: int

    @property
    def length(self) -> int:
        return self.zeros + self.ones

    @property
    def freq0(self) -> float:
        return self.zeros / self.length if self.length else math.nan


def _byte_table():
    table = []
    for v in range(256):
        d = hi = lo = 0
        for i in range(7, -1, -1):
            d += 1 if (v >> i) & 1 else -1
            hi, lo = max(hi, d), min(lo, d)
        table.append((d, hi, lo))
    return table


_BYTES = _byte_table()


def digit_stats(w: Word) -> DigitStats:
    """Counts and the largest |#1 − #0| over all prefixes."""
    n = len(w)
    ones = w.ones()
    head = n % 8
    d = peak = 0
    for i in range(head):
        d += 1 if (w.bits >> (n - 1 - i)) & 1 else -1
        peak = max(peak, abs(d))
    body = (w.bits & ((1 << (n - head)) - 1)).to_bytes((n - head) // 8, "big")
    for byte in body:
        delta, hi, lo = _BYTES[byte]
        peak = max(peak, abs(d + hi), abs(d + lo))
        d += delta
    return DigitStats(n - ones, ones, peak)


def plus_one(w: Word) -> Word:
    if len(w) == 0 or w.last() != 0:
        raise LastDigitNotZero(f"{w} does not end in 0")
    return Word.from_int(w.bits | 1, len(w))


def is_primitive(w: Word) -> bool:
    L = len(w)
    return all(w[:d] * (L // d) != w for d in _divisors(L) if d < L)


# ---------------------------------------------------------------------------
# text syntax:  0110   (01)^inf   01^5   10^3(110)^4   1(10)^inf

_TOKEN = re.compile(r"\s*(?:(?P<digit>[01])|(?P<lp>\()|(?P<rp>\))|\^(?P<exp>\d+|inf|∞))")


def parse_digits(text: str) -> Union[Word, EPSeq]:
    """Parse the digit syntax; returns an EPSeq when a ``^inf`` period is present."""
    pos = 0
    tokens = []
    s = text.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise WordSyntaxError(f"unexpected input at {s[pos:]!r}")
        tokens.append(m)
        pos = m.end()

    stack: list[list[Word]] = [[]]
    period = None
    for i, m in enumerate(tokens):
        if period is not None:
            raise WordSyntaxError("nothing may follow a ^inf period")
        if m.group("digit"):
            stack[-1].append(Word(m.group("digit")))
        elif m.group("lp"):
            stack.append([])
        elif m.group("rp"):
            if len(stack) == 1:
                raise WordSyntaxError("unbalanced ')'")
            inner = stack.pop()
            stack[-1].append(_concat(inner))
        else:
            if not stack[-1]:
                raise WordSyntaxError("'^' needs something to repeat")
            atom = stack[-1].pop()
            e = m.group("exp")
            if e in ("inf", "∞"):
                if len(stack) != 1:
                    raise WordSyntaxError("^inf is only allowed at top level")
                if len(atom) == 0:
                    raise WordSyntaxError("empty period")
                period = atom
            else:
                stack[-1].append(atom * int(e))
    if len(stack) != 1:
        raise WordSyntaxError("unbalanced '('")
    head = _concat(stack[0])
    if period is not None:
        return EPSeq(head, period)
    return head


def parse_word(text: str) -> Word:
    w = parse_digits(text)
    if isinstance(w, EPSeq):
        raise WordSyntaxError(f"{text!r} is infinite; a finite word was expected")
    return w


def parse_seq(text: str) -> EPSeq:
    s = parse_digits(text)
    if isinstance(s, Word):
        # a finite word w denotes w 0^∞
        return EPSeq(s, Word("0"))
    return s


def _concat(parts: list[Word]) -> Word:
    out = Word()
    for p in parts:
        out = out + p
    return out
