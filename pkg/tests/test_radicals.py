"""Radical expression trees and closed-form low-degree root formulas."""

import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from spmfdp.radicals import (
    RadicalExpr,
    const,
    cubic_real_root,
    cubic_roots,
    poly_roots,
    quartic_roots,
    sqrt,
)


def expand_from_roots(lead, roots):
    cs = [Fraction(lead)]
    for r in roots:
        nxt = [Fraction(0)] * (len(cs) + 1)
        for i, c in enumerate(cs):
            nxt[i] += c
            nxt[i + 1] -= c * r
        cs = nxt
    return list(reversed(cs))  # ascending


def horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class TestQuartic:
    def test_planted_rational_roots(self):
        rng = random.Random(61)
        for _ in range(25):
            roots = [Fraction(rng.randint(-15, 15), rng.randint(1, 7))
                     for _ in range(4)]
            coeffs = expand_from_roots(rng.randint(1, 4), roots)
            trees = quartic_roots(*reversed(coeffs))
            got = sorted(float(t.evaluate(50).real) for t in trees)
            expect = sorted(float(r) for r in roots)
            assert max(abs(a - b) for a, b in zip(got, expect)) < 1e-12

    def test_residuals_tiny_at_high_precision(self):
        rng = random.Random(67)
        with mp.workdps(60):
            for _ in range(25):
                coeffs = [Fraction(rng.randint(-20, 20)) for _ in range(4)]
                coeffs.append(Fraction(rng.randint(1, 20)))
                for t in quartic_roots(*reversed(coeffs)):
                    v = t.evaluate(60)
                    assert abs(horner(coeffs, v)) < mpmath.mpf("1e-40")

    def test_biquadratic_branch(self):
        # t^4 - 5t^2 + 4 = (t^2-1)(t^2-4)
        trees = quartic_roots(Fraction(1), Fraction(0), Fraction(-5),
                              Fraction(0), Fraction(4))
        got = sorted(float(t.evaluate(40).real) for t in trees)
        assert got == pytest.approx([-2, -1, 1, 2], abs=1e-20)


class TestCubic:
    def test_three_real_roots(self):
        # (z-1)(z-2)(z+3) = z^3 - 7z + 6
        vals = sorted(float(t.evaluate(50).real)
                      for t in cubic_roots(Fraction(0), Fraction(-7), Fraction(6)))
        assert vals == pytest.approx([-3, 1, 2], abs=1e-25)

    def test_real_root_formula_is_real(self):
        rng = random.Random(71)
        with mp.workdps(50):
            for _ in range(30):
                a, b, c = (Fraction(rng.randint(-9, 9)) for _ in range(3))
                v = cubic_real_root(a, b, c).evaluate(50)
                assert abs(v.imag) < mpmath.mpf("1e-40")
                res = v ** 3 + a * v ** 2 + b * v + c
                assert abs(res) < mpmath.mpf("1e-35")


class TestPolyRoots:
    def test_zero_constant_term_factored_exactly(self):
        # t(t-2)(t^2+1): roots 0, 2, +-i
        coeffs = [Fraction(0), Fraction(-2), Fraction(1), Fraction(-2), Fraction(1)]
        trees = poly_roots(coeffs)
        vals = [t.evaluate(40) for t in trees]
        assert any(v == 0 for v in vals)
        reals = sorted(float(v.real) for v in vals if abs(v.imag) < 1e-30)
        assert reals == pytest.approx([0.0, 2.0], abs=1e-30)

    def test_low_degrees(self):
        assert float(poly_roots([Fraction(-6), Fraction(2)])[0]
                     .evaluate(30).real) == 3.0
        vals = sorted(float(t.evaluate(30).real)
                      for t in poly_roots([Fraction(2), Fraction(-3), Fraction(1)]))
        assert vals == pytest.approx([1.0, 2.0], abs=1e-25)


class TestExpressionTree:
    def test_json_round_trip(self):
        expr = sqrt(const(Fraction(5, 2)))
        expr = RadicalExpr("sub", (expr, const(Fraction(1, 3))))
        again = RadicalExpr.from_json(expr.to_json())
        assert again == expr
        assert again.evaluate(40) == expr.evaluate(40)

    def test_str_is_readable(self):
        expr = sqrt(const(Fraction(5, 2)))
        assert str(expr) == "sqrt(5/2)"

    def test_evaluation_precision_scales(self):
        expr = sqrt(const(2))
        v30 = expr.evaluate(30)
        with mp.workdps(50):
            assert abs(v30 - mpmath.sqrt(2)) < mpmath.mpf("1e-29")
