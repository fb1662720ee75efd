import csv
import io
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from betanormal.ergodic import (
    CutPointHit, Mismatch, frequency_experiment, mbeta_digits, mbeta_run, multinacci_point,
    reflect_conjugacy_check, report_json, sample_attractor_point, tail_periodic_start,
    verify_example_continuum, verify_example_multinacci, words_equal_exact,
)
from betanormal.expansions import BetaContext, CountLimits, OutOfRange, pi_beta
from betanormal.numerics import MULTINACCI4, BETA_T, PrecisionExhausted, Rational
from betanormal.words import Word

B19 = Fraction(19, 10)


@pytest.fixture(scope="module")
def ctx19():
    return BetaContext(Rational(B19))


@pytest.fixture(scope="module")
def ctx17():
    return BetaContext(Rational(Fraction(17, 10)))


def uniform_in_I(ctx, rng):
    b = ctx.beta_real.value
    return Rational(Fraction(rng.getrandbits(48), 1 << 48) / (b - 1))


class TestMBeta:
    def test_fixed_points(self, ctx19):
        assert mbeta_digits(Rational(0), ctx19, 30) == Word("0") * 30
        assert mbeta_digits(Rational(1 / (B19 - 1)), ctx19, 30) == Word("1") * 30

    def test_out_of_range(self, ctx19):
        with pytest.raises(OutOfRange):
            mbeta_digits(Rational(2), ctx19, 5)

    def test_cut_point(self, ctx19):
        with pytest.raises(PrecisionExhausted):
            mbeta_digits(Rational(1 / (2 * (B19 - 1))), ctx19, 5)

    @settings(max_examples=30)
    @given(st.fractions(0, 1, max_denominator=2**40))
    def test_digit_rule_and_validity(self, ctx19, u):
        x = u / (B19 - 1)
        cut = 1 / (2 * (B19 - 1))
        n = 60
        y, expected = x, []
        for _ in range(n):
            if y == cut:
                return
            d = 0 if y < cut else 1
            expected.append(d)
            y = B19 * y - d
        w = mbeta_digits(Rational(x), ctx19, n)
        assert list(w) == expected
        r = x - sum(Fraction(d) / B19 ** (i + 1) for i, d in enumerate(w))
        assert 0 <= r <= 1 / (B19 ** n * (B19 - 1))

    def test_absorption_many_starts(self, ctx19):
        rng = random.Random(7)
        entered = 0
        for _ in range(1000):
            run = mbeta_run(uniform_in_I(ctx19, rng), ctx19, 120)
            assert run.absorption_ok
            entered += run.entered_at is not None
        assert entered == 1000

    def test_degenerate_endpoint(self, ctx19):
        run = mbeta_run(Rational(0), ctx19, 50)
        assert run.freq0 == 1.0 and run.entered_at is None

    def test_long_run_frequency(self, ctx19):
        # spread from independent runs at the same length sets the 3σ window
        rep = frequency_experiment(ctx19, 10, 100_000, seed=11)
        x = sample_attractor_point(ctx19, random.Random(12))
        f = mbeta_run(x, ctx19, 100_000).freq0
        assert abs(f - 0.5) < 3 * rep.stdev


class TestReflection:
    def test_near_cut(self, ctx19):
        x = Rational(1 / (2 * (B19 - 1)) + Fraction(1, 10**9))
        assert reflect_conjugacy_check(x, ctx19, 100)

    def test_endpoints(self, ctx19):
        assert reflect_conjugacy_check(Rational(0), ctx19, 50)

    def test_random_at_170(self, ctx17):
        rng = random.Random(3)
        for _ in range(5):
            assert reflect_conjugacy_check(uniform_in_I(ctx17, rng), ctx17, 1000)

    def test_cut_hit(self, ctx19):
        with pytest.raises(CutPointHit):
            reflect_conjugacy_check(Rational(1 / (2 * (B19 - 1))), ctx19, 10)


class TestFrequencyExperiment:
    def test_small_run(self, ctx19):
        rep = frequency_experiment(ctx19, 20, 2000, seed=5)
        assert abs(rep.mean - 0.5) < 0.02
        assert rep.absorption_ok and rep.skipped == 0
        assert [c[0] for c in rep.curve] == [200, 500, 1000, 2000]
        assert sum(rep.histogram.values()) == 20
        json.dumps(rep.to_dict())

    def test_trend_shrinks_within_noise(self, ctx19):
        rep = frequency_experiment(ctx19, 40, 4000, seed=9)
        S = rep.samples - rep.skipped
        for (_, m0, _), (_, m1, s1) in zip(rep.curve, rep.curve[1:]):
            assert abs(m1 - 0.5) <= abs(m0 - 0.5) + 2 * s1 / math.sqrt(S)

    def test_binary_base(self):
        rep = frequency_experiment(BetaContext(Rational(2)), 20, 2000, seed=1)
        assert abs(rep.mean - 0.5) < 0.02

    def test_seed_reproducible(self, ctx19):
        a = frequency_experiment(ctx19, 5, 500, seed=3)
        b = frequency_experiment(ctx19, 5, 500, seed=3)
        assert a.freqs == b.freqs

    def test_arguments(self, ctx19):
        with pytest.raises(ValueError):
            frequency_experiment(ctx19, 0, 10, seed=0)


class TestExamples:
    def test_substitution_identity(self):
        assert words_equal_exact(Word("1"), Word("01111"), MULTINACCI4)
        assert not words_equal_exact(Word("1"), Word("0111"), MULTINACCI4)

    def test_multinacci_report(self):
        rep = verify_example_multinacci(3)
        assert rep["ok"]
        assert [x["k"] for x in rep["x"]] == [1, 2, 3]
        assert rep["stats"]["k3"]["result"] == "Exactly(3)"

    def test_multinacci_budget_mismatch(self):
        with pytest.raises(Mismatch):
            verify_example_multinacci(3, limits=CountLimits(max_branch_nodes=1))

    def test_multinacci_point(self):
        assert str(multinacci_point(2)) == "01111111(011)^inf"

    def test_tail_detection(self):
        assert tail_periodic_start(Word("0111011011011"), Word("011")) == 2
        # only the final digit fits a rotation of 011
        assert tail_periodic_start(Word("0000"), Word("011")) == 3

    def test_continuum(self):
        rep, table = verify_example_continuum()
        assert rep["ok"]
        assert rep["beta"].startswith("1.84408") and rep["x"].startswith("0.628296")
        rows = list(csv.DictReader(io.StringIO(table)))
        assert list(rows[0]) == ["step", "value", "switch_lo", "switch_hi"]
        assert [r["step"] for r in rows] == [f"L{i}" for i in range(1, 16)] + [f"R{i}" for i in range(1, 6)]
        lo, hi = Fraction("0.542276"), Fraction("0.642445")
        assert all(not (lo <= Fraction(r["value"]) <= hi) for r in rows)
        d = json.loads(report_json(rep))
        assert {"beta", "x", "assertions", "stats"} <= set(d)
