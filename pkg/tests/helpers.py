"""Random-instance builders shared across the test modules."""

import random
from fractions import Fraction

from spmfdp import MotorAngles, QuadricSystem
from spmfdp.polyring import Monomial, MultiPoly

# 20-digit reference values of the four positive retained-coordinate roots
# of the worked instance (sin/cos = 3/5,4/5; 5/13,12/13; 7/25,24/25).
R_DECIMALS = (
    "0.22420547189459831634",
    "0.24102325734564694455",
    "0.87935205040860456901",
    "0.34406346396151611679",
)
R_FLOATS = tuple(float(s) for s in R_DECIMALS)


def pythagorean_pair(rng: random.Random, span: int = 30) -> tuple[Fraction, Fraction]:
    """Random exact (sin, cos) with both components nonzero."""
    while True:
        t = Fraction(rng.randint(-span, span), rng.randint(1, span))
        if t not in (0, 1, -1):
            break
    den = 1 + t * t
    return 2 * t / den, (1 - t * t) / den


def random_motor_angles(rng: random.Random) -> MotorAngles:
    return MotorAngles.from_exact([pythagorean_pair(rng) for _ in range(3)])


def random_quadric(rng: random.Random, names) -> MultiPoly:
    """Random dense quadric with small rational coefficients."""
    terms = {}
    monomials = [Monomial()]
    monomials += [Monomial({v: 1}) for v in names]
    monomials += [Monomial({v: 2}) for v in names]
    for i, u in enumerate(names):
        for v in list(names)[i + 1:]:
            monomials.append(Monomial({u: 1, v: 1}))
    for m in monomials:
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if c:
            terms[m] = c
    return MultiPoly(terms)


def planted_root_system(rng: random.Random, names=("x1", "x2", "x3"),
                        retained=None):
    """Four random quadrics sharing one constructed rational root."""
    all_names = list(names) + ([retained] if retained else [])
    root = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                 for _ in all_names)
    assignment = dict(zip(all_names, root))
    polys = []
    for _ in range(4):
        f = random_quadric(rng, all_names)
        f = f - f.evaluate(assignment)
        polys.append(f)
    return (QuadricSystem(tuple(polys), tuple(names), retained), root)
