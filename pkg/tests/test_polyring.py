"""Ring arithmetic, division, determinants, and canonical forms."""

import random
from fractions import Fraction

import pytest

from spmfdp.polyring import (
    Monomial,
    MultiPoly,
    NonSquare,
    NotDivisible,
    PolyMatrix,
    Truncation,
    as_quadratic_form,
    fraction_matrix_det,
    parse_poly,
)

x1, x2, x3 = (MultiPoly.var(v) for v in ("x1", "x2", "x3"))
y1, y2, y3 = (MultiPoly.var(v) for v in ("y1", "y2", "y3"))
q0, q1 = MultiPoly.var("q0"), MultiPoly.var("q1")


def random_poly(rng, names=("x1", "x2", "y1"), max_deg=2, max_terms=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        m = Monomial({v: rng.randint(0, max_deg) for v in names
                      if rng.random() < 0.6})
        terms[m] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return MultiPoly(terms)


class TestAdd:
    def test_cancellation(self):
        assert (x1 + 1) + (x1 - 1) == 2 * x1

    def test_additive_identity(self):
        p = parse_poly("3/5*q0^2 - 8/5*q0*q1")
        assert p + MultiPoly.zero() == p

    def test_rational_coefficients(self):
        a = MultiPoly.const(Fraction(3, 5)) * x1 ** 2
        b = MultiPoly.const(Fraction(2, 5)) * x1 ** 2
        assert a + b == x1 ** 2


class TestMul:
    def test_difference_of_squares(self):
        assert (x1 - y1) * (x1 + y1) == x1 ** 2 - y1 ** 2

    def test_multiplicative_identity(self):
        p = parse_poly("q0^2 + 2*q0*q1 - 7")
        assert p * MultiPoly.const(1) == p

    def test_square_of_sum(self):
        assert (q0 + q1) ** 2 == q0 ** 2 + 2 * q0 * q1 + q1 ** 2

    def test_degree_additivity(self):
        rng = random.Random(3)
        for _ in range(50):
            p, q = random_poly(rng), random_poly(rng)
            if p.is_zero() or q.is_zero():
                continue
            assert (p * q).degree() == p.degree() + q.degree()


class TestSubstitute:
    def test_rename(self):
        assert (x1 ** 2 + x2).substitute({"x1": y1}) == y1 ** 2 + x2

    def test_extraneous_point_kills_norm(self):
        norm = parse_poly("q0^2 + q1^2 + q2^2 + q3^2 - 1")
        half = Fraction(1, 2)
        out = norm.substitute({v: half for v in ("q0", "q1", "q2", "q3")})
        assert out.is_zero()

    def test_leg_quadric_at_identity_quaternion(self):
        # first leg of the case-study family with symbolic coefficients
        f1 = parse_poly("A1*(q0^2 - q1^2 - q2^2 + q3^2) + 2*B1*(q2*q3 - q0*q1)")
        out = f1.substitute({"q0": 1, "q1": 0, "q2": 0, "q3": 0})
        assert out == MultiPoly.var("A1")


class TestExactQuotient:
    def test_difference_of_squares(self):
        assert (x1 ** 2 - y1 ** 2).exact_quotient(x1 - y1) == x1 + y1

    def test_sphere_divided_difference(self):
        # unit-norm quadric with its first unknown replaced
        f = x1 ** 2 + x2 ** 2 + x3 ** 2 - 1
        g = y1 ** 2 + x2 ** 2 + x3 ** 2 - 1
        assert (f - g).exact_quotient(x1 - y1) == x1 + y1

    def test_monomial_factor(self):
        assert (x1 * x2 - y1 * x2).exact_quotient(x1 - y1) == x2

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            (x1 ** 2 + 1).exact_quotient(x1 - y1)

    def test_round_trip_random(self):
        rng = random.Random(11)
        done = 0
        while done < 60:
            p, d = random_poly(rng), random_poly(rng)
            if d.is_zero():
                continue
            assert (p * d).exact_quotient(d) == p
            done += 1


class TestDeterminant:
    def test_2x2(self):
        m = PolyMatrix([[x1, MultiPoly.const(1)], [MultiPoly.const(1), x1]])
        assert m.determinant() == x1 ** 2 - 1

    def test_identity_20(self):
        one, zero = MultiPoly.const(1), MultiPoly.zero()
        m = PolyMatrix([[one if i == j else zero for j in range(20)]
                        for i in range(20)])
        assert m.determinant() == MultiPoly.const(1)

    def test_non_square(self):
        with pytest.raises(NonSquare):
            PolyMatrix([[x1, x1]]).determinant()

    def test_bareiss_matches_cofactor_4x4(self):
        rng = random.Random(7)
        for _ in range(20):
            rows = [[Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                     for _ in range(4)] for _ in range(4)]
            m = PolyMatrix([[MultiPoly.const(c) for c in row] for row in rows])
            assert fraction_matrix_det(rows) == m._minor_expansion(None).constant_value()

    def test_truncated_equals_reduced_full(self):
        rng = random.Random(13)
        trunc = Truncation.quadratic_in(["a", "b", "c"])
        a, b, c = (MultiPoly.var(v) for v in ("a", "b", "c"))
        for _ in range(12):
            def entry():
                return (MultiPoly.const(Fraction(rng.randint(-4, 4)))
                        + a * rng.randint(-3, 3) + b * rng.randint(-3, 3)
                        + c * rng.randint(-3, 3) + x1 * rng.randint(-2, 2))
            m = PolyMatrix([[entry() for _ in range(4)] for _ in range(4)])
            full = m.determinant()
            assert m.determinant(trunc) == trunc.reduce(full)


class TestRingAxioms:
    def test_axioms_on_random_triples(self):
        rng = random.Random(1)
        one = MultiPoly.const(1)
        for _ in range(334):  # three checked identities each -> ~1000 checks
            p, q, r = (random_poly(rng) for _ in range(3))
            assert p + q == q + p
            assert (p + q) + r == p + (q + r)
            assert p * q == q * p
            assert (p * q) * r == p * (q * r)
            assert p * (q + r) == p * q + p * r
            assert p * one == p and p + MultiPoly.zero() == p


class TestCanonicalForm:
    def test_spec_example(self):
        text = "3/5*q0^2 - 8/5*q0*q1"
        assert parse_poly(text).to_text() == text

    def test_serialize_parse_fixed_point(self):
        rng = random.Random(17)
        for _ in range(60):
            p = random_poly(rng, names=("q0", "q1", "x1", "a"))
            text = p.to_text()
            assert parse_poly(text).to_text() == text

    def test_json_round_trip(self):
        rng = random.Random(19)
        for _ in range(30):
            p = random_poly(rng)
            assert MultiPoly.from_json_terms(p.to_json_terms()) == p

    def test_monomial_order_graded_lex(self):
        # graded first, then lexicographic on the fixed variable order
        assert Monomial({"q0": 2}) > Monomial({"q0": 1, "q1": 1})
        assert Monomial({"q1": 1}) < Monomial({"q0": 2})
        assert Monomial({"x1": 1}) > Monomial({"y1": 1})


class TestQuadraticForm:
    def test_matches_polynomial_evaluation(self):
        from helpers import random_quadric
        rng = random.Random(23)
        names = ["q0", "q1", "q2", "q3"]
        for _ in range(20):
            f = random_quadric(rng, names)
            M, b, c = as_quadratic_form(f, names)
            pt = [Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                  for _ in names]
            direct = f.evaluate(dict(zip(names, pt)))
            quad = sum(pt[i] * M[i][j] * pt[j]
                       for i in range(4) for j in range(4))
            lin = sum(b[i] * pt[i] for i in range(4))
            assert quad + lin + c == direct
