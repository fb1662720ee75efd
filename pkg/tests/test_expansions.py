from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from betanormal.expansions import (
    BetaContext, CountLimits, InvalidBase, OutOfRange, Verdict, apply_map, apply_word,
    count_expansions, enumerate_expansions, forced_walk, greedy_expansion, is_point_univoque,
    is_univoque_seq, lazy_expansion, orbit, pi_beta, quasi_greedy_alpha, seq_real,
)
from betanormal.numerics import PrecisionExhausted, PrecisionReal, Rational
from betanormal.components import base_of
from betanormal.words import EPSeq, Word, lex_compare, parse_seq, tm_chain

from oracles import greedy as greedy_oracle, naive_leaves, quasi_greedy, value

rational_betas = st.fractions(min_value=Fraction(21, 20), max_value=2, max_denominator=4096)
bits_s = st.text("01", max_size=8).map(Word)
seqs = st.builds(EPSeq, bits_s, st.text("01", min_size=1, max_size=8).map(Word))


def rctx(b):
    return BetaContext(Rational(b))


def point_in_range(beta: Fraction, u: Fraction) -> Rational:
    return Rational(u / (beta - 1))


class TestContext:
    def test_landmarks(self, ctx_T):
        s, a = ctx_T.switch, ctx_T.attractor
        assert s.lo.gt(0) is True and s.hi.lt(ctx_T.i_max) is True
        assert apply_map(0, a.lo, ctx_T).intersects(a.hi)
        assert apply_map(1, a.hi, ctx_T).intersects(a.lo)

    @pytest.mark.parametrize("b", [Fraction(1), Fraction(5, 2), Fraction(1, 2)])
    def test_range(self, b):
        with pytest.raises(InvalidBase):
            rctx(b)

    def test_two_is_allowed(self):
        assert rctx(Fraction(2)).alpha(8) == Word("1") * 8


class TestPi:
    def test_period_10_is_attractor_top(self, ctx_T, ctx_golden):
        for ctx in (ctx_T, ctx_golden):
            assert pi_beta(EPSeq.periodic("10"), ctx).intersects(ctx.attractor.hi)

    def test_example_value(self, ctx_ex43):
        x = pi_beta(parse_seq("(01^5)^inf"), ctx_ex43)
        assert abs(float(x.center) - 0.628296) < 5e-7

    def test_binary(self):
        assert pi_beta(parse_seq("1"), rctx(Fraction(2))).contains(Fraction(1, 2))

    @given(rational_betas, seqs)
    def test_closed_form_matches_partial_sums(self, b, s):
        ctx = rctx(b)
        exact = pi_beta(s, ctx, 96)
        head = value(str(s.prefix(400)), b)
        tail = 1 / (b ** 400 * (b - 1))
        assert exact.lower <= head + tail and head <= exact.upper

    @given(rational_betas, seqs)
    def test_reflection_identity(self, b, s):
        ctx = rctx(b)
        total = pi_beta(s, ctx, 128) + pi_beta(s.reflect(), ctx, 128)
        assert total.contains(1 / (b - 1))


class TestMaps:
    def test_binary_map(self):
        ctx = rctx(Fraction(2))
        assert apply_map(1, PrecisionReal.exact(Fraction(3, 4)), ctx).contains(Fraction(1, 2))

    def test_zero_is_fixed(self, ctx_T):
        assert apply_word(Word("00"), 0, ctx_T).contains(0)
        assert all(p.contains(0) for p in orbit(0, Word("000"), ctx_T))

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_fixed_point_and_level_up(self, ctx_T, k):
        om = tm_chain(Word("01"), k)
        nxt = tm_chain(Word("01"), k + 1)
        x = pi_beta(EPSeq.periodic(om), ctx_T, 256)
        assert apply_word(om, x, ctx_T, 256).intersects(x)
        y = pi_beta(EPSeq.periodic(nxt), ctx_T, 256)
        assert apply_word(om, y, ctx_T, 256).intersects(pi_beta(EPSeq.periodic(nxt.reflect()), ctx_T, 256))

    @given(rational_betas, st.fractions(0, 1), bits_s)
    def test_word_is_affine_formula(self, b, u, w):
        ctx = rctx(b)
        x = u / (b - 1)
        expected = b ** len(w) * (x - value(str(w), b))
        assert apply_word(w, Rational(x), ctx, 128).contains(expected)


class TestQuasiGreedy:
    def test_examples(self, ctx_golden, ctx_T, ctx_multi):
        assert str(quasi_greedy_alpha(ctx_golden, 6)) == "101010"
        assert str(quasi_greedy_alpha(ctx_T, 7)) == "1101010"
        assert str(quasi_greedy_alpha(ctx_multi, 8)) == "11101110"

    def test_kl_is_shifted_thue_morse(self, ctx_kl):
        tm = "".join(str(bin(i).count("1") % 2) for i in range(1, 129))
        assert str(ctx_kl.alpha(128)) == tm

    @given(rational_betas)
    def test_rational_matches_oracle(self, b):
        assert str(rctx(b).alpha(80)) == quasi_greedy(b, 80)

    @pytest.mark.parametrize("name", ["ctx_golden", "ctx_T", "ctx_kl", "ctx_multi", "ctx_ex43"])
    def test_tails_not_above_sequence(self, name, request):
        a = str(request.getfixturevalue(name).alpha(256))
        for n in range(1, 128):
            assert a[n:n + 128] <= a[:128]

    @given(rational_betas, rational_betas)
    def test_monotone_in_beta(self, b1, b2):
        assume(b2 - b1 > Fraction(1, 100))
        assert quasi_greedy_alpha(rctx(b1), 64).bits < quasi_greedy_alpha(rctx(b2), 64).bits

    def test_tie_base_is_exact(self):
        # β = 2 has 1 = Σ 2^{-i}; the quasi-greedy rule never emits a finite expansion
        assert str(quasi_greedy_alpha(rctx(Fraction(2)), 10)) == "1" * 10


class TestGreedyLazy:
    def test_endpoints(self, ctx_T):
        assert greedy_expansion(ctx_T.i_max_real, ctx_T, 20) == Word("1") * 20
        assert lazy_expansion(0, ctx_T, 20) == Word("0") * 20

    def test_greedy_half_at_golden(self, ctx_golden):
        # oracle: the greedy rule in 256-bit floating point
        mpmath.mp.prec = 256
        phi = (1 + mpmath.sqrt(5)) / 2
        x, digs = mpmath.mpf(1) / 2, ""
        for _ in range(8):
            d = 1 if x >= 1 / phi else 0
            digs += str(d)
            x = phi * x - d
        assert str(greedy_expansion(Fraction(1, 2), ctx_golden, 8)) == digs

    def test_out_of_range(self, ctx_T):
        with pytest.raises(OutOfRange):
            greedy_expansion(Fraction(3), ctx_T, 4)

    @given(rational_betas, st.fractions(0, 1, max_denominator=10**6))
    def test_greedy_matches_exact_oracle(self, b, u):
        x = u / (b - 1)
        assert str(greedy_expansion(Rational(x), rctx(b), 60)) == greedy_oracle(x, b, 60)

    @given(rational_betas, st.fractions(0, 1, max_denominator=10**6), st.sampled_from(["g", "l"]))
    def test_prefix_validity(self, b, u, mode):
        ctx, x, n = rctx(b), u / (b - 1), 50
        w = (greedy_expansion if mode == "g" else lazy_expansion)(Rational(x), ctx, n)
        r = x - value(str(w), b)
        assert 0 <= r <= 1 / (b ** n * (b - 1))

    @given(rational_betas, st.fractions(0, 1), st.fractions(0, 1))
    def test_greedy_order_preserving(self, b, u, v):
        assume(u < v)
        ctx = rctx(b)
        g1 = greedy_expansion(Rational(u / (b - 1)), ctx, 40)
        g2 = greedy_expansion(Rational(v / (b - 1)), ctx, 40)
        assert g1.bits <= g2.bits

    def test_greedy_tie_at_switch_edge(self):
        ctx = rctx(Fraction(3, 2))
        assert str(greedy_expansion(Rational(Fraction(2, 3)), ctx, 4)) == "1000"
        assert str(lazy_expansion(Rational(Fraction(4, 3)), ctx, 4)) == "0111"


class TestUnivoque:
    def test_multinacci_x1(self, ctx_multi):
        s = parse_seq("01^3(011)^inf")
        assert is_univoque_seq(s, ctx_multi) is Verdict.YES
        assert is_point_univoque(seq_real(s, ctx_multi), ctx_multi) is Verdict.YES

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_one_more_block_is_univoque(self, j):
        base = base_of(Word("1") + Word("10") * j)
        ctx = BetaContext(base)
        assert str(ctx.alpha(2 * j + 1)) == "1" + "10" * j
        assert is_univoque_seq(EPSeq.periodic(Word("1") + Word("10") * (j + 1)), ctx) is Verdict.YES

    def test_zero_sequence(self, ctx_T):
        assert is_univoque_seq(parse_seq("(0)^inf"), ctx_T) is Verdict.YES

    def test_switch_interior_is_not_univoque(self, ctx_T):
        mid = (ctx_T.switch.lo + ctx_T.switch.hi) / 2
        assert is_point_univoque(mid, ctx_T, 1) is Verdict.NO

    def test_example_continuum_point(self, ctx_ex43):
        x = seq_real(parse_seq("(01^5)^inf"), ctx_ex43)
        assert is_point_univoque(x, ctx_ex43) is Verdict.NO

    def test_boundary_sequence_is_unknown(self, ctx_golden):
        # every tail of 0(10)^∞ equals α(golden) = (10)^∞ or its reflection
        assert is_univoque_seq(parse_seq("0(10)^inf"), ctx_golden) is Verdict.UNKNOWN


class TestEnumerate:
    def test_right_endpoint(self, ctx_T):
        tree = enumerate_expansions(ctx_T.i_max_real, ctx_T, 6)
        assert [str(n.prefix) for n in tree.leaves()] == ["111111"]

    def test_golden_switch_point_branches(self, ctx_golden):
        mid = (ctx_golden.switch.lo + ctx_golden.switch.hi) / 2
        assert enumerate_expansions(mid, ctx_golden, 3).leaf_count() >= 2

    def test_multinacci_x2_branches(self, ctx_multi):
        x = seq_real(parse_seq("01^7(011)^inf"), ctx_multi)
        tree = enumerate_expansions(x, ctx_multi, 12)
        survivors = {str(n.prefix) for n in tree.leaves()
                     if forced_walk(n.point, ctx_multi, 48).verdict is Verdict.YES}
        assert survivors == {"011111110110", "100001110110"}

    def test_exact_tie_on_switch_edge(self):
        b = Fraction(21, 20)
        tree = enumerate_expansions(Rational(1 / b), rctx(b), 6)
        assert sorted(str(n.prefix) for n in tree.leaves()) == naive_leaves(1 / b, b, 6)

    @given(rational_betas, st.fractions(0, 1, max_denominator=10**5), st.integers(0, 12))
    def test_matches_naive_enumerator(self, b, u, depth):
        x = u / (b - 1)
        tree = enumerate_expansions(Rational(x), rctx(b), depth)
        assert sorted(str(n.prefix) for n in tree.leaves()) == naive_leaves(x, b, depth)

    @given(rational_betas, st.fractions(0, 1, max_denominator=10**5))
    def test_node_points_are_conjugate(self, b, u):
        x = u / (b - 1)
        tree = enumerate_expansions(Rational(x), rctx(b), 8)
        for n in tree.nodes:
            assert n.point.contains(b ** len(n.prefix) * (x - value(str(n.prefix), b)))
            if n.status != "dead":
                assert not (n.point.upper < 0 or n.point.lower > 1 / (b - 1))


class TestCount:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_multinacci_points(self, ctx_multi, k):
        x = seq_real(EPSeq(Word("0") + Word("1") * (4 * k - 1), Word("011")), ctx_multi)
        res = count_expansions(x, ctx_multi)
        assert res.kind == "exactly" and res.k == k
        assert str(res) == f"Exactly({k})"

    def test_two_expansions_start_differently(self, ctx_multi):
        x = seq_real(parse_seq("01^7(011)^inf"), ctx_multi)
        starts = sorted(str(w[:2]) for w in count_expansions(x, ctx_multi).expansions)
        assert starts == ["01", "10"]

    def test_continuum(self, ctx_ex43):
        x = seq_real(parse_seq("(01^5)^inf"), ctx_ex43)
        assert str(count_expansions(x, ctx_ex43)) == "ContinuumWitness"

    def test_budget_exhaustion_is_reported(self, ctx_T):
        mid = (ctx_T.switch.lo + ctx_T.switch.hi) / 2
        res = count_expansions(mid, ctx_T, CountLimits(max_branch_nodes=3))
        assert res.kind in ("at_least", "unknown", "continuum")

    def test_out_of_range(self, ctx_T):
        with pytest.raises(OutOfRange):
            count_expansions(0, ctx_T)


def test_orbit_example(ctx_ex43):
    x = pi_beta(parse_seq("(01^5)^inf"), ctx_ex43, 256)
    pts = orbit(x, Word("1000") + Word("110") * 4, ctx_ex43, 256)
    lo, hi = Fraction("0.542276"), Fraction("0.642445")
    assert len(pts) == 16
    assert all(p.upper < lo or p.lower > hi for p in pts[:-1])
