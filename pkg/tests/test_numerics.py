from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from betanormal.numerics import (
    BETA_KL, BETA_T, EXAMPLE43, GOLDEN, MULTINACCI4, FixedReal, IntPolynomial, Interval,
    NoSignChange, PrecisionReal, Rational, isolate_root, named_base, parse_real,
    solve_value_equation, thue_morse_series,
)

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=10**6)


def ball(v, r=0, prec=128):
    return PrecisionReal(v, r, prec)


class TestPrecisionReal:
    def test_exact_contains_value(self):
        x = PrecisionReal.exact(Fraction(1, 3), 64)
        assert x.contains(Fraction(1, 3))
        assert x.width_log2() <= -60

    def test_three_valued_comparison(self):
        a, b = ball(1, Fraction(1, 10)), ball(Fraction(11, 10), Fraction(1, 10))
        assert a.lt(b) is None
        assert a.lt(ball(2)) is True
        assert ball(2).lt(a) is False

    def test_radius_nonnegative(self):
        with pytest.raises(ValueError):
            PrecisionReal(1, -1)

    @given(fractions, fractions)
    def test_arithmetic_encloses_exact_result(self, p, q):
        x, y = PrecisionReal.exact(p, 96), PrecisionReal.exact(q, 96)
        assert (x + y).contains(p + q)
        assert (x - y).contains(p - q)
        assert (x * y).contains(p * q)
        if q != 0:
            assert (x / y).contains(p / q)

    @given(st.fractions(min_value=Fraction(11, 10), max_value=2, max_denominator=1000),
           st.integers(1, 40))
    def test_refinement_nests(self, b, n):
        # an expression evaluated at doubled precision sits inside the coarse result
        def expr(bits):
            v = PrecisionReal.exact(b, bits)
            return 1 / (v ** n - 1) + v.square()
        coarse, fine = expr(64), expr(128)
        assert coarse.lower <= fine.lower and fine.upper <= coarse.upper

    def test_decimal_rendering(self):
        assert PrecisionReal.exact(Fraction(1, 4), 64).decimal(5).startswith("0.25")


class TestInterval:
    def test_membership(self):
        iv = Interval(ball(0), ball(1))
        assert iv.contains(ball(Fraction(1, 2))) is True
        assert iv.contains(ball(2)) is False
        assert iv.contains(ball(1, Fraction(1, 100))) is None

    def test_order_required(self):
        with pytest.raises(ValueError):
            Interval(ball(1), ball(0))


class TestRoots:
    @pytest.mark.parametrize("coeffs,expected", [
        ([1, -2, -1, 1], "1.80194"),
        ([-1, -1, -1, -1, 1], "1.92756"),
    ])
    def test_isolate_named_roots(self, coeffs, expected):
        r = isolate_root(IntPolynomial(coeffs), 1, 2, 64)
        assert r.width_log2() <= -64
        assert abs(float(r.center) - float(expected)) < 5e-6

    def test_golden_closed_form(self):
        r = isolate_root(IntPolynomial([-1, -1, 1]), 1, 2, 200)
        mpmath.mp.prec = 256
        phi = (1 + mpmath.sqrt(5)) / 2
        assert abs(mpmath.mpf(r.center.numerator) / r.center.denominator - phi) < mpmath.mpf(2) ** -190

    def test_no_sign_change(self):
        with pytest.raises(NoSignChange):
            isolate_root(IntPolynomial([1, 0, 1]), 0, 2, 32)

    @given(st.integers(40, 200))
    def test_more_bits_gives_subinterval(self, bits):
        p = IntPolynomial([1, -2, -1, 1])
        a, b = isolate_root(p, 1, 2, bits), isolate_root(p, 1, 2, bits + 32)
        assert a.lower <= b.lower and b.upper <= a.upper

    def test_residual_bound(self):
        p = IntPolynomial([-1, -1, -1, -1, 1])
        r = isolate_root(p, 1, 2, 128)
        # |p(r)| ≤ max|p'| on [1,2] · width
        lip = sum(abs(c) * i * 2 ** (i - 1) for i, c in enumerate(p.coeffs))
        assert abs(p.eval_ball(PrecisionReal.exact(r.center, 256)).center) <= lip * r.width

    def test_affine_solver(self):
        r = solve_value_equation(lambda b: b - Fraction(3, 2), 1, 2, 64)
        assert r.contains(Fraction(3, 2))

    def test_sign_change_required(self):
        with pytest.raises(NoSignChange):
            solve_value_equation(lambda b: b + 1, 1, 2, 64)


class TestNamedBases:
    @pytest.mark.parametrize("real,digits", [
        (BETA_T, "1.80194"), (BETA_KL, "1.78723"), (MULTINACCI4, "1.92756"),
        (EXAMPLE43, "1.84408"), (GOLDEN, "1.61803"),
    ])
    def test_cited_decimals(self, real, digits):
        assert abs(float(real.enclosure(64).center) - float(digits)) < 5e-6

    def test_kl_equation_independent(self):
        # oracle: Σ τ_i β^{-i} = 1 with τ the shifted Thue–Morse digits, in mpmath
        mpmath.mp.prec = 200
        b = mpmath.mpf(BETA_KL.enclosure(128).center.numerator) / BETA_KL.enclosure(128).center.denominator
        tau = [bin(i).count("1") % 2 for i in range(1, 700)]
        s = mpmath.fsum(t * b ** -(i + 1) for i, t in enumerate(tau))
        assert abs(s - 1) < mpmath.mpf(10) ** -30

    def test_registry(self):
        assert named_base("beta_T") is BETA_T
        with pytest.raises(KeyError):
            named_base("nope")

    def test_thue_morse_series_at_half(self):
        # Σ_{i≥1} t_i 2^{-i} over Thue–Morse t_0 t_1 … = 0110 1001 … is twice the
        # Prouhet–Thue–Morse constant 0.41245403364010759778…
        v = thue_morse_series(PrecisionReal.exact(Fraction(1, 2), 128))
        assert abs(float(v.center) - 2 * 0.4124540336401075977833613) < 1e-12


class TestParsing:
    def test_decimal_becomes_enclosure(self):
        r = parse_real("1.80", decimal_as_enclosure=True)
        assert isinstance(r, FixedReal)
        assert r.enclosure(64).contains(Fraction("1.804"))

    def test_rational_is_exact(self):
        r = parse_real("17/10")
        assert isinstance(r, Rational) and r.value == Fraction(17, 10)
