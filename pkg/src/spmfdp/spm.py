"""Kinematics layer for spherical parallel manipulators.

Builds the quaternion quadric system from per-leg axis conditions
w_i' * Q(q) * nu_i = c_i, plus the preset for the architecture whose motor
axes make those conditions homogeneous (three legs, c_i = 0, axis matrices
below).  Also holds the solution symmetries: the eight-element sign/
permutation orbit and the eight parameter-independent extraneous points
with all coordinates +-1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polyring import MultiPoly, Rational

QUATERNION_VARS = ("q0", "q1", "q2", "q3")

from .dixon import QuadricSystem


class NotUnit(ValueError):
    """Quaternion norm too far from one to be normalized away."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


def _frac3(v) -> tuple[Fraction, Fraction, Fraction]:
    v = tuple(_frac(x) for x in v)
    if len(v) != 3:
        raise ValueError("expected a 3-vector")
    return v


@dataclass(frozen=True)
class LegCondition:
    """One leg's geometric condition: w . (Q nu) = c.

    `w` is the fixed motor-axis direction, `nu` the platform axis in the
    moving frame, both exact rationals.
    """

    w: tuple[Fraction, Fraction, Fraction]
    nu: tuple[Fraction, Fraction, Fraction]
    c: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "w", _frac3(self.w))
        object.__setattr__(self, "nu", _frac3(self.nu))
        object.__setattr__(self, "c", _frac(self.c))
        if all(x == 0 for x in self.w) or all(x == 0 for x in self.nu):
            raise ValueError("leg axes must be nonzero")

    def to_json(self) -> dict:
        return {
            "w": [str(x) for x in self.w],
            "nu": [str(x) for x in self.nu],
            "c": str(self.c),
        }

    @classmethod
    def from_json(cls, data) -> "LegCondition":
        return cls(tuple(Fraction(s) for s in data["w"]),
                   tuple(Fraction(s) for s in data["nu"]),
                   Fraction(data.get("c", "0")))


_HALF_ANGLE_DENOM = 10 ** 9


def _rationalize_sincos(theta: float) -> tuple[Fraction, Fraction]:
    """Exact Pythagorean pair near (sin t, cos t) via the half-angle map."""
    t = math.tan(theta / 2.0)
    if not math.isfinite(t) or abs(t) > 1e15:
        return Fraction(0), Fraction(-1)
    r = Fraction(t).limit_denominator(_HALF_ANGLE_DENOM)
    den = 1 + r * r
    return 2 * r / den, (1 - r * r) / den


@dataclass(frozen=True)
class MotorAngles:
    """Actuated joint angles, either as radians or exact (sin, cos) pairs.

    Exact pairs must satisfy A^2 + B^2 = 1; radians are rationalized on
    demand through the tangent half-angle map so the identity still holds
    exactly downstream.
    """

    theta: tuple[float, float, float] | None = None
    exact_sin_cos: tuple[tuple[Fraction, Fraction], ...] | None = None

    def __post_init__(self):
        if (self.theta is None) == (self.exact_sin_cos is None):
            raise ValueError("give either theta or exact_sin_cos, not both")
        if self.exact_sin_cos is not None:
            pairs = tuple((_frac(a), _frac(b)) for a, b in self.exact_sin_cos)
            if len(pairs) != 3:
                raise ValueError("three (sin, cos) pairs required")
            for a, b in pairs:
                if a * a + b * b != 1:
                    raise ValueError(f"not on the unit circle: ({a}, {b})")
            object.__setattr__(self, "exact_sin_cos", pairs)
        else:
            th = tuple(float(x) for x in self.theta)
            if len(th) != 3:
                raise ValueError("three angles required")
            object.__setattr__(self, "theta", th)

    @classmethod
    def from_theta(cls, t1: float, t2: float, t3: float) -> "MotorAngles":
        return cls(theta=(t1, t2, t3))

    @classmethod
    def from_exact(cls, pairs) -> "MotorAngles":
        return cls(exact_sin_cos=tuple((a, b) for a, b in pairs))

    def sincos(self) -> tuple[tuple[Fraction, Fraction], ...]:
        if self.exact_sin_cos is not None:
            return self.exact_sin_cos
        return tuple(_rationalize_sincos(t) for t in self.theta)

    def to_json(self) -> dict:
        if self.exact_sin_cos is not None:
            return {"exact": [[str(a), str(b)] for a, b in self.exact_sin_cos]}
        return {"theta_rad": list(self.theta)}

    @classmethod
    def from_json(cls, data) -> "MotorAngles":
        if "exact" in data:
            return cls.from_exact([(Fraction(a), Fraction(b))
                                   for a, b in data["exact"]])
        return cls.from_theta(*data["theta_rad"])


@dataclass(frozen=True)
class Quaternion:
    """Orientation quaternion; components may be floats or exact rationals."""

    q0: object
    q1: object
    q2: object
    q3: object

    def as_tuple(self):
        return (self.q0, self.q1, self.q2, self.q3)

    def to_floats(self) -> tuple[float, float, float, float]:
        return tuple(float(x) for x in self.as_tuple())

    def norm2(self):
        return sum(x * x for x in self.as_tuple())

    def __neg__(self) -> "Quaternion":
        return Quaternion(*(-x for x in self.as_tuple()))

    def distance(self, other: "Quaternion") -> float:
        return max(abs(float(a) - float(b))
                   for a, b in zip(self.as_tuple(), other.as_tuple()))


@dataclass(frozen=True)
class RotationMatrix:
    """3x3 orientation matrix."""

    m: tuple[tuple[float, float, float], ...]

    def __getitem__(self, ij):
        i, j = ij
        return self.m[i][j]

    def as_lists(self) -> list[list[float]]:
        return [list(r) for r in self.m]

    def orthogonality_defect(self) -> float:
        """max |Q'Q - I|."""
        qt_q = [[sum(self.m[k][i] * self.m[k][j] for k in range(3))
                 for j in range(3)] for i in range(3)]
        return max(abs(qt_q[i][j] - (1.0 if i == j else 0.0))
                   for i in range(3) for j in range(3))

    def det(self) -> float:
        m = self.m
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _rotation_entries_poly() -> list[list[MultiPoly]]:
    """The orientation matrix with symbolic quaternion entries."""
    q0, q1, q2, q3 = (MultiPoly.var(v) for v in QUATERNION_VARS)
    return [
        [q0 ** 2 + q1 ** 2 - q2 ** 2 - q3 ** 2, 2 * (q1 * q2 - q0 * q3), 2 * (q0 * q2 + q1 * q3)],
        [2 * (q1 * q2 + q0 * q3), q0 ** 2 - q1 ** 2 + q2 ** 2 - q3 ** 2, 2 * (q2 * q3 - q0 * q1)],
        [2 * (q1 * q3 - q0 * q2), 2 * (q0 * q1 + q2 * q3), q0 ** 2 - q1 ** 2 - q2 ** 2 + q3 ** 2],
    ]


_Q_POLY = None


def rotation_poly() -> list[list[MultiPoly]]:
    global _Q_POLY
    if _Q_POLY is None:
        _Q_POLY = _rotation_entries_poly()
    return _Q_POLY


def unit_norm_poly() -> MultiPoly:
    """q0^2 + q1^2 + q2^2 + q3^2 - 1."""
    acc = MultiPoly.const(-1)
    for v in QUATERNION_VARS:
        acc = acc + MultiPoly.var(v) ** 2
    return acc


def build_generic_system(legs: Sequence[LegCondition]) -> QuadricSystem:
    """Quadric system of three leg conditions plus the unit-norm quadric.

    f_i = w_i . (Q(q) nu_i) - c_i for each leg, f_4 the norm condition;
    q0 is retained and q1, q2, q3 eliminated.
    """
    if len(legs) != 3:
        raise ValueError("exactly three legs required")
    Q = rotation_poly()
    polys = []
    for leg in legs:
        f = MultiPoly.const(-leg.c)
        for r in range(3):
            if leg.w[r] == 0:
                continue
            for cidx in range(3):
                if leg.nu[cidx] == 0:
                    continue
                f = f + Q[r][cidx] * (leg.w[r] * leg.nu[cidx])
        polys.append(f)
    polys.append(unit_norm_poly())
    return QuadricSystem(tuple(polys), eliminated=("q1", "q2", "q3"),
                         retained="q0")


def legs_for_motor_angles(m: MotorAngles) -> tuple[LegCondition, ...]:
    """The preset axis layout: columns of the two matrices below.

        [ 0   B2  A3 ]        [ 0 0 1 ]
        [ B1  A2  0  ]  and   [ 0 1 0 ]
        [ A1  0   B3 ]        [ 1 0 0 ]
    """
    (a1, b1), (a2, b2), (a3, b3) = m.sincos()
    zero, one = Fraction(0), Fraction(1)
    return (
        LegCondition(w=(zero, b1, a1), nu=(zero, zero, one)),
        LegCondition(w=(b2, a2, zero), nu=(zero, one, zero)),
        LegCondition(w=(a3, zero, b3), nu=(one, zero, zero)),
    )


def build_3rrrr_system(m: MotorAngles) -> QuadricSystem:
    """The quadric system of the three-legged architecture at given angles."""
    return build_generic_system(legs_for_motor_angles(m))


def quaternion_to_rotation(q: Quaternion, *, tol: float = 1e-6) -> RotationMatrix:
    """Orientation matrix of a (near-)unit quaternion.

    Inputs off the unit sphere by more than `tol` in norm raise NotUnit;
    smaller deviations are normalized away.
    """
    q0, q1, q2, q3 = q.to_floats()
    n = math.sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3)
    if abs(n - 1.0) > tol:
        raise NotUnit(f"|q| = {n} deviates from 1 beyond {tol}")
    q0, q1, q2, q3 = q0 / n, q1 / n, q2 / n, q3 / n
    return RotationMatrix((
        (q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2 * (q1 * q2 - q0 * q3), 2 * (q0 * q2 + q1 * q3)),
        (2 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, 2 * (q2 * q3 - q0 * q1)),
        (2 * (q1 * q3 - q0 * q2), 2 * (q0 * q1 + q2 * q3), q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3),
    ))


def symmetry_orbit(s: Quaternion) -> list[Quaternion]:
    """The eight-element sign/permutation orbit of a solution.

    For the preset architecture every orbit member of a solution is again a
    solution; the orbit always contains -s, so real solutions pair up.
    """
    s0, s1, s2, s3 = s.as_tuple()
    sigma = [
        Quaternion(s0, s1, s2, s3),
        Quaternion(s1, -s0, -s3, s2),
        Quaternion(s2, s3, -s0, -s1),
        Quaternion(s3, -s2, s1, -s0),
    ]
    return sigma + [-t for t in sigma]


def extraneous_set() -> list[Quaternion]:
    """The eight parameter-independent points with all coordinates +-1/2.

    They satisfy the preset system for every parameter choice but never
    correspond to an input-consistent pose; the solver strips them.
    """
    h = Fraction(1, 2)
    return symmetry_orbit(Quaternion(h, h, h, h))


@dataclass(frozen=True)
class GCoefficients:
    """The four symmetric functions of the motor angles entering the octic.

    G(q0) = -2^24 w^2 q0^8 + 2^24 w^2 q0^6 - 2^21 w w1 q0^4
            + 2^20 w w2 q0^2 + w3.

    Each coefficient was validated term by term against octics obtained by
    exact elimination on a 9x9x9 grid of rational parameter points (the
    coefficients are homogeneous of degree 8 in each (sin, cos) pair, so
    that grid pins them down uniquely).
    """

    w: Fraction
    w1: Fraction
    w2: Fraction
    w3: Fraction

    @classmethod
    def from_motor_angles(cls, m: MotorAngles) -> "GCoefficients":
        (a1, b1), (a2, b2), (a3, b3) = m.sincos()
        return cls(
            w=_w_value(a1, b1, a2, b2, a3, b3),
            w1=_w1_value(a1, b1, a2, b2, a3, b3),
            w2=_w2_value(a1, b1, a2, b2, a3, b3),
            w3=_w3_value(a1, b1, a2, b2, a3, b3),
        )

    def g_poly(self) -> MultiPoly:
        q0 = MultiPoly.var("q0")
        c8 = -(2 ** 24) * self.w * self.w
        c6 = (2 ** 24) * self.w * self.w
        c4 = -(2 ** 21) * self.w * self.w1
        c2 = (2 ** 20) * self.w * self.w2
        c0 = self.w3
        return (MultiPoly.const(c8) * q0 ** 8 + MultiPoly.const(c6) * q0 ** 6
                + MultiPoly.const(c4) * q0 ** 4 + MultiPoly.const(c2) * q0 ** 2
                + MultiPoly.const(c0))


def _w_value(a1, b1, a2, b2, a3, b3) -> Fraction:
    return ((a2 * a2 * a3 * a3 + a2 * a2 * b3 * b3 + b2 * b2 * b3 * b3)
            * (a1 * a1 * a3 * a3 + b1 * b1 * a3 * a3 + b1 * b1 * b3 * b3)
            * (a1 * a1 * a2 * a2 + a1 * a1 * b2 * b2 + b1 * b1 * b2 * b2))


def _w1_value(a1, b1, a2, b2, a3, b3) -> Fraction:
    return (
        3 * a1**4 * a2**4 * a3**4
        + 2 * a1**2 * b1**2 * a2**4 * a3**4
        + 2 * a1**4 * a2**2 * b2**2 * a3**4
        + 5 * a1**2 * b1**2 * a2**2 * b2**2 * a3**4
        + 3 * b1**4 * a2**2 * b2**2 * a3**4
        + 2 * a1 * b1**3 * a2**3 * b2 * a3**3 * b3
        + 2 * a1**3 * b1 * a2 * b2**3 * a3**3 * b3
        + 3 * a1**4 * b2**4 * a3**2 * b3**2
        + 2 * a1 * b1**3 * a2 * b2**3 * a3**3 * b3
        + 2 * a1**4 * a2**4 * a3**2 * b3**2
        + 5 * a1**2 * b1**2 * a2**4 * a3**2 * b3**2
        + 5 * a1**4 * a2**2 * b2**2 * a3**2 * b3**2
        + 9 * a1**2 * b1**2 * a2**2 * b2**2 * a3**2 * b3**2
        + 5 * b1**4 * a2**2 * b2**2 * a3**2 * b3**2
        + 5 * a1**2 * b1**2 * b2**4 * a3**2 * b3**2
        + 2 * b1**4 * b2**4 * a3**2 * b3**2
        + 2 * a1**3 * b1 * a2**3 * b2 * a3 * b3**3
        + 2 * a1 * b1**3 * a2**3 * b2 * a3 * b3**3
        + 2 * a1**3 * b1 * a2 * b2**3 * a3 * b3**3
        + 6 * a1 * b1**3 * a2 * b2**3 * a3 * b3**3
        + 3 * a1**2 * b1**2 * a2**4 * b3**4
        + 5 * a1**2 * b1**2 * a2**2 * b2**2 * b3**4
        + 2 * b1**4 * a2**2 * b2**2 * b3**4
        + 2 * a1**2 * b1**2 * b2**4 * b3**4
    )


def _w2_value(a1, b1, a2, b2, a3, b3) -> Fraction:
    return (
        a1**4 * a2**4 * a3**4
        + a1**2 * b1**2 * a2**2 * b2**2 * a3**4
        + b1**4 * a2**2 * b2**2 * a3**4
        - 2 * a1**3 * b1 * a2**3 * b2 * a3**3 * b3
        + 2 * a1 * b1**3 * a2**3 * b2 * a3**3 * b3
        + 2 * a1**3 * b1 * a2 * b2**3 * a3**3 * b3
        + 2 * a1 * b1**3 * a2 * b2**3 * a3**3 * b3
        + a1**2 * b1**2 * a2**4 * a3**2 * b3**2
        + a1**4 * a2**2 * b2**2 * a3**2 * b3**2
        + 7 * a1**2 * b1**2 * a2**2 * b2**2 * a3**2 * b3**2
        + b1**4 * a2**2 * b2**2 * a3**2 * b3**2
        + a1**4 * b2**4 * a3**2 * b3**2
        + a1**2 * b1**2 * b2**4 * a3**2 * b3**2
        + 2 * a1**3 * b1 * a2**3 * b2 * a3 * b3**3
        + 2 * a1 * b1**3 * a2**3 * b2 * a3 * b3**3
        + 2 * a1**3 * b1 * a2 * b2**3 * a3 * b3**3
        + a1**2 * b1**2 * a2**4 * b3**4
        + a1**2 * b1**2 * a2**2 * b2**2 * b3**4
    )


# Exponent-of-A triples -> coefficient for the octic's constant term.
# Monomial (i, j, k) stands for A1^i B1^(8-i) A2^j B2^(8-j) A3^k B3^(8-k);
# the constant term is -2^16 times this form.  Obtained by exact
# interpolation of elimination octics on a 9x9x9 rational parameter grid
# (the coefficient is homogeneous of degree 8 per pair, so the grid
# determines it), then cross-checked on independent random draws.
_W3_TERMS = {
    (0, 4, 4): 1, (0, 4, 6): 2, (0, 4, 8): 1, (1, 3, 3): 4, (1, 3, 5): 8,
    (1, 3, 7): 4, (1, 5, 3): 4, (1, 5, 5): 8, (1, 5, 7): 4, (2, 2, 2): 4,
    (2, 2, 4): 10, (2, 2, 6): 6, (2, 4, 2): 10, (2, 4, 4): 20, (2, 4, 6): 12,
    (2, 4, 8): 2, (2, 6, 2): 6, (2, 6, 4): 12, (2, 6, 6): 6, (3, 1, 3): 4,
    (3, 1, 5): 4, (3, 3, 1): 4, (3, 3, 3): 16, (3, 3, 5): 20, (3, 3, 7): 8,
    (3, 5, 1): 8, (3, 5, 3): 20, (3, 5, 5): 24, (3, 5, 7): 12, (3, 7, 1): 4,
    (3, 7, 3): 8, (3, 7, 5): 4, (4, 0, 4): 1, (4, 2, 2): 10, (4, 2, 4): 20,
    (4, 2, 6): 12, (4, 4, 0): 1, (4, 4, 2): 20, (4, 4, 4): 47, (4, 4, 6): 28,
    (4, 4, 8): 1, (4, 6, 0): 2, (4, 6, 2): 12, (4, 6, 4): 28, (4, 6, 6): 16,
    (4, 6, 8): -2, (4, 8, 0): 1, (4, 8, 2): 2, (4, 8, 4): 1, (5, 1, 3): 8,
    (5, 1, 5): 8, (5, 3, 1): 4, (5, 3, 3): 20, (5, 3, 5): 24, (5, 3, 7): 4,
    (5, 5, 1): 8, (5, 5, 3): 24, (5, 5, 5): 16, (5, 5, 7): 4, (5, 7, 1): 4,
    (5, 7, 3): 12, (5, 7, 5): 4, (5, 7, 7): -4, (6, 0, 4): 2, (6, 2, 2): 6,
    (6, 2, 4): 12, (6, 2, 6): 6, (6, 4, 2): 12, (6, 4, 4): 28, (6, 4, 6): 16,
    (6, 6, 2): 6, (6, 6, 4): 16, (6, 6, 6): 14, (6, 6, 8): -2, (6, 8, 4): -2,
    (6, 8, 6): -2, (7, 1, 3): 4, (7, 1, 5): 4, (7, 3, 3): 8, (7, 3, 5): 12,
    (7, 5, 3): 4, (7, 5, 5): 4, (7, 5, 7): -4, (7, 7, 5): -4, (7, 7, 7): -8,
    (8, 0, 4): 1, (8, 2, 4): 2, (8, 4, 4): 1, (8, 4, 6): -2, (8, 6, 6): -2,
    (8, 8, 8): 1,
}


def _w3_value(a1, b1, a2, b2, a3, b3) -> Fraction:
    pa = [[b1 ** (8 - i) * a1 ** i for i in range(9)],
          [b2 ** (8 - i) * a2 ** i for i in range(9)],
          [b3 ** (8 - i) * a3 ** i for i in range(9)]]
    total = Fraction(0)
    for (i, j, k), coeff in _W3_TERMS.items():
        total += coeff * pa[0][i] * pa[1][j] * pa[2][k]
    return -(2 ** 16) * total


def closed_form_G(m: MotorAngles) -> MultiPoly:
    """The even octic in q0 from the closed-form coefficient expressions."""
    return GCoefficients.from_motor_angles(m).g_poly()
