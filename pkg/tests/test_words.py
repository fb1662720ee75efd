import pytest
from hypothesis import assume, given, strategies as st

from betanormal.words import (
    EPSeq, LastDigitNotZero, SeedMustStartWithZero, Word, WordSyntaxError, compare_prefix,
    digit_stats, is_primitive, lex_compare, parse_digits, parse_seq, parse_word, plus_one,
    reflect, tm_chain, tm_limit_digits,
)

bitstrings = st.text("01", min_size=0, max_size=80)
words = bitstrings.map(Word)
nonempty = st.text("01", min_size=1, max_size=12).map(Word)
seqs = st.builds(EPSeq, st.text("01", max_size=10).map(Word), nonempty)


def naive_prefix(s: EPSeq, n: int) -> str:
    out = str(s.preperiod)
    while len(out) < n:
        out += str(s.period)
    return out[:n]


class TestWord:
    def test_roundtrip_and_indexing(self):
        w = Word("0110")
        assert str(w) == "0110" and len(w) == 4 and list(w) == [0, 1, 1, 0]
        assert w[1] == 1 and w[-1] == 0 and str(w[1:3]) == "11"

    def test_leading_zeros_kept(self):
        assert str(Word("0001") + Word("00")) == "000100"

    def test_bad_digit(self):
        with pytest.raises(WordSyntaxError):
            Word("012")

    @given(bitstrings, st.integers(0, 6))
    def test_repetition_matches_strings(self, s, n):
        assert str(Word(s) * n) == s * n

    @given(bitstrings, bitstrings)
    def test_concat_matches_strings(self, a, b):
        assert str(Word(a) + Word(b)) == a + b

    @given(bitstrings)
    def test_slices_match_strings(self, s):
        w = Word(s)
        for i in range(0, len(s) + 1, 3):
            assert str(w[i:]) == s[i:] and str(w[:i]) == s[:i]


class TestReflect:
    def test_examples(self):
        assert str(reflect(Word("0110"))) == "1001"
        assert reflect(EPSeq.periodic("01")) == EPSeq.periodic("10")
        c = Word("1000") + Word("110") * 4
        assert reflect(reflect(c)) == c

    @given(words)
    def test_involution_word(self, w):
        assert reflect(reflect(w)) == w
        assert all(a + b == 1 for a, b in zip(w, reflect(w)))

    @given(seqs)
    def test_involution_seq(self, s):
        assert reflect(reflect(s)) == s


class TestEPSeq:
    @given(seqs)
    def test_canonical_same_digits(self, s):
        c = s.canonical()
        assert naive_prefix(c, 60) == naive_prefix(s, 60)
        assert len(c.preperiod) <= len(s.preperiod) and len(c.period) <= len(s.period)
        assert c.is_canonical()

    def test_canonical_example(self):
        c = EPSeq(Word("0101"), Word("0101")).canonical()
        assert str(c.preperiod) == "" and str(c.period) == "01"

    @given(seqs, st.integers(0, 30))
    def test_shift(self, s, n):
        assert naive_prefix(s.shift(n), 40) == naive_prefix(s, n + 40)[n:]

    def test_empty_period_rejected(self):
        with pytest.raises(ValueError):
            EPSeq(Word("1"), Word())


class TestLexCompare:
    def test_examples(self):
        assert lex_compare(EPSeq.periodic("01"), EPSeq.periodic("10")) == -1
        a = EPSeq(Word("1"), Word("10"))
        b = EPSeq.periodic("11010")
        # oracle: expand to the joint period and compare as strings
        n = 1 + 10
        assert naive_prefix(a, n) < naive_prefix(b, n)
        assert lex_compare(a, b) == -1
        assert lex_compare(b, b) == 0

    @given(seqs, seqs)
    def test_agrees_with_long_string_comparison(self, a, b):
        n = 400
        x, y = naive_prefix(a, n), naive_prefix(b, n)
        assert lex_compare(a, b) == (x > y) - (x < y)

    @given(seqs, seqs)
    def test_antisymmetric(self, a, b):
        assert lex_compare(a, b) == -lex_compare(b, a)

    @given(seqs, seqs, seqs)
    def test_transitive(self, a, b, c):
        if lex_compare(a, b) <= 0 and lex_compare(b, c) <= 0:
            assert lex_compare(a, c) <= 0

    def test_prefix_compare(self):
        assert compare_prefix(Word("101"), Word("10111")) == 0
        assert compare_prefix(Word("100"), Word("101")) == -1


class TestThueMorse:
    def test_examples(self):
        assert str(tm_chain(Word("0"), 3)) == "01101001"
        assert str(tm_chain(Word("01"), 1)) == "0110"
        assert str(tm_chain(Word("0"), 0)) == "0"
        assert str(tm_limit_digits(Word("0"), 8)) == "01101001"
        assert str(tm_limit_digits(Word("0"), 1)) == "0"

    def test_limit_prefix_of_chain(self):
        # oracle: build chain by string concatenation and truncate
        s = "0110"
        for _ in range(2):
            s = s + s.translate(str.maketrans("01", "10"))
        assert str(tm_limit_digits(Word("0110"), 16)) == s[:16]

    def test_seed_must_start_with_zero(self):
        with pytest.raises(SeedMustStartWithZero):
            tm_chain(Word("10"), 2)
        with pytest.raises(SeedMustStartWithZero):
            tm_limit_digits(Word("1"), 4)

    @given(st.text("01", min_size=0, max_size=8).map(lambda s: Word("0" + s)), st.integers(0, 10))
    def test_doubling_rule(self, seed, k):
        w = tm_chain(seed, k)
        assert tm_chain(seed, k + 1) == w + reflect(w)
        assert len(w) == len(seed) << k

    @given(st.integers(1, 14))
    def test_balanced_blocks(self, k):
        st_ = digit_stats(tm_chain(Word("0"), k))
        assert st_.zeros == st_.ones


class TestDigitStats:
    def test_examples(self):
        s = digit_stats(Word("01101001"))
        assert (s.zeros, s.ones, s.max_prefix_imbalance) == (4, 4, 1)
        z = digit_stats(Word("0") * 37)
        assert (z.zeros, z.max_prefix_imbalance) == (37, 37)

    @given(bitstrings)
    def test_against_scan(self, s):
        d = peak = 0
        for c in s:
            d += 1 if c == "1" else -1
            peak = max(peak, abs(d))
        st_ = digit_stats(Word(s))
        assert st_.zeros == s.count("0") and st_.ones == s.count("1")
        assert st_.max_prefix_imbalance == peak
        assert st_.max_prefix_imbalance >= abs(st_.zeros - st_.ones)

    @pytest.mark.parametrize("seed", ["01", "011010", "01101010", "0110"])
    def test_chain_imbalance_at_most_two(self, seed):
        for k in range(8):
            assert digit_stats(tm_chain(Word(seed), k)).max_prefix_imbalance <= 2


class TestPlusOne:
    def test_examples(self):
        assert str(plus_one(Word("10"))) == "11"
        assert str(plus_one(Word("1100"))) == "1101"
        assert str(plus_one(Word("0"))) == "1"

    def test_requires_trailing_zero(self):
        with pytest.raises(LastDigitNotZero):
            plus_one(Word("01"))


class TestParsing:
    def test_syntax(self):
        assert str(parse_word("0110")) == "0110"
        assert str(parse_word("01^5")) == "011111"
        assert str(parse_word("10^3(110)^4")) == "1000" + "110" * 4
        assert parse_seq("(01)^inf") == EPSeq.periodic("01")
        assert parse_seq("1(10)^inf") == EPSeq(Word("1"), Word("10"))

    def test_finite_word_as_sequence_pads_zeros(self):
        assert parse_seq("1") == EPSeq(Word("1"), Word("0"))

    @pytest.mark.parametrize("bad", ["012", "(01", "01)", "^3", "(01)^inf1", "((01)^inf)"])
    def test_errors(self, bad):
        with pytest.raises(WordSyntaxError):
            parse_digits(bad)

    def test_infinite_not_a_word(self):
        with pytest.raises(WordSyntaxError):
            parse_word("(01)^inf")


@given(nonempty)
def test_primitive_matches_rotation_criterion(w):
    s = str(w)
    assert is_primitive(w) == ((s + s).find(s, 1) == len(s))
