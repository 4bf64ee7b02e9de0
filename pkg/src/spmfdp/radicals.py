"""Closed-form roots of cubics and quartics as radical expression trees.

A tree is nested arithmetic over exact rational leaves with square and cube
roots; evaluating one at a chosen precision reproduces the root value, which
is what "solvable in radicals" buys over a numeric root finder.  Cube roots
of complex arguments use the principal branch; the conjugate cube root in
Cardano's formula is reached by division, which keeps the branch choice
consistent automatically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp


@dataclass(frozen=True)
class RadicalExpr:
    """A node of a radical expression: const leaf or one of the operators."""

    op: str  # const | neg | add | sub | mul | div | sqrt | cbrt
    args: tuple["RadicalExpr", ...] = ()
    value: Fraction | None = None

    def evaluate(self, dps: int = 50):
        """Numeric value as an mpc at `dps` significant digits."""
        with mp.workdps(dps):
            return mpmath.mpc(self._eval())

    def _eval(self):
        op = self.op
        if op == "const":
            return mpmath.mpf(self.value.numerator) / self.value.denominator
        a = self.args[0]._eval()
        if op == "neg":
            return -a
        if op == "sqrt":
            return mpmath.sqrt(a)
        if op == "cbrt":
            # real branch on the real line (sign-preserving), principal
            # branch off it; Cardano's S - p/(3S) form needs exactly this
            if isinstance(a, mpmath.mpf) or (hasattr(a, "imag") and a.imag == 0):
                a = a.real if hasattr(a, "real") else a
                return -mpmath.cbrt(-a) if a < 0 else mpmath.cbrt(a)
            return mpmath.cbrt(a)
        b = self.args[1]._eval()
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if op == "div":
            return a / b
        raise ValueError(f"unknown operator {op!r}")

    def to_json(self) -> dict:
        if self.op == "const":
            return {"op": "const",
                    "value": f"{self.value.numerator}/{self.value.denominator}"}
        return {"op": self.op, "args": [a.to_json() for a in self.args]}

    @classmethod
    def from_json(cls, data) -> "RadicalExpr":
        if data["op"] == "const":
            return const(Fraction(data["value"]))
        return cls(data["op"], tuple(cls.from_json(a) for a in data["args"]))

    def __str__(self):
        if self.op == "const":
            v = self.value
            s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            return s if v >= 0 else f"({s})"
        if self.op == "neg":
            return f"-({self.args[0]})"
        if self.op in ("sqrt", "cbrt"):
            return f"{self.op}({self.args[0]})"
        sym = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[self.op]
        return f"({self.args[0]}{sym}{self.args[1]})"


def const(x) -> RadicalExpr:
    return RadicalExpr("const", value=Fraction(x))


def _wrap(x) -> RadicalExpr:
    return x if isinstance(x, RadicalExpr) else const(x)


def add(a, b) -> RadicalExpr:
    return RadicalExpr("add", (_wrap(a), _wrap(b)))


def sub(a, b) -> RadicalExpr:
    return RadicalExpr("sub", (_wrap(a), _wrap(b)))


def mul(a, b) -> RadicalExpr:
    return RadicalExpr("mul", (_wrap(a), _wrap(b)))


def div(a, b) -> RadicalExpr:
    return RadicalExpr("div", (_wrap(a), _wrap(b)))


def neg(a) -> RadicalExpr:
    return RadicalExpr("neg", (_wrap(a),))


def sqrt(a) -> RadicalExpr:
    return RadicalExpr("sqrt", (_wrap(a),))


def cbrt(a) -> RadicalExpr:
    return RadicalExpr("cbrt", (_wrap(a),))


def cubic_roots(a: Fraction, b: Fraction, c: Fraction) -> list[RadicalExpr]:
    """All three roots of z^3 + a z^2 + b z + c as radical trees.

    The three Cardano branches come from multiplying S by the cube roots of
    unity, themselves radical expressions over sqrt(-3).
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    p = b - a * a / 3
    q = 2 * a ** 3 / 27 - a * b / 3 + c
    shift = const(-a / 3)
    omega = div(add(const(-1), sqrt(const(-3))), const(2))
    omega2 = div(sub(const(-1), sqrt(const(-3))), const(2))
    if p == 0:
        s = cbrt(const(-q))
        return [add(s, shift),
                add(mul(s, omega), shift),
                add(mul(s, omega2), shift)]
    disc = (q / 2) ** 2 + (p / 3) ** 3
    s = cbrt(add(const(-q / 2), sqrt(const(disc))))
    out = []
    for branch in (None, omega, omega2):
        sk = s if branch is None else mul(s, branch)
        out.append(add(sub(sk, div(const(p / 3), sk)), shift))
    return out


def cubic_real_root(a: Fraction, b: Fraction, c: Fraction) -> RadicalExpr:
    """One real root of z^3 + a z^2 + b z + c, as a radical tree.

    Cardano on the depressed cubic.  The S - p/(3S) form evaluates to a
    real root in both the one-real-root and three-real-root cases (in the
    latter S is complex and the quotient is its conjugate).
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    p = b - a * a / 3
    q = 2 * a ** 3 / 27 - a * b / 3 + c
    shift = const(-a / 3)
    if p == 0:
        return add(cbrt(const(-q)), shift)
    disc = (q / 2) ** 2 + (p / 3) ** 3
    s = cbrt(add(const(-q / 2), sqrt(const(disc))))
    return add(sub(s, div(const(p / 3), s)), shift)


def quartic_roots(c4: Fraction, c3: Fraction, c2: Fraction,
                  c1: Fraction, c0: Fraction) -> list[RadicalExpr]:
    """All four roots of c4 t^4 + ... + c0, each as a radical tree.

    Ferrari: depress, split with a real root of the resolvent cubic, solve
    the two resulting quadratics.  Complex roots come out with nonzero
    imaginary part when evaluated; the caller classifies them.
    """
    if c4 == 0:
        raise ValueError("quartic leading coefficient is zero")
    p = Fraction(c3) / c4
    q = Fraction(c2) / c4
    r = Fraction(c1) / c4
    s0 = Fraction(c0) / c4
    # depressed: u^4 + alpha u^2 + beta u + gamma, t = u - p/4
    alpha = q - 3 * p * p / 8
    beta = r - p * q / 2 + p ** 3 / 8
    gamma = s0 - p * r / 4 + p * p * q / 16 - 3 * p ** 4 / 256
    shift = const(-p / 4)

    if beta == 0:
        # biquadratic: u^2 = (-alpha +- sqrt(alpha^2 - 4 gamma)) / 2
        disc = sqrt(const(alpha * alpha - 4 * gamma))
        roots = []
        for sgn in (1, -1):
            z = div(add(const(-alpha), mul(const(sgn), disc)), const(2))
            u = sqrt(z)
            roots.append(add(u, shift))
            roots.append(add(neg(u), shift))
        return roots

    # resolvent: 8y^3 + 8 alpha y^2 + (2 alpha^2 - 8 gamma) y - beta^2 = 0
    y0 = cubic_real_root(alpha, alpha * alpha / 4 - gamma,
                         -beta * beta / 8)
    s = sqrt(mul(const(2), y0))
    base = add(const(alpha / 2), y0)
    t = div(mul(s, const(beta)), mul(const(4), y0))
    roots = []
    for s_sign in (1, -1):
        # u^2 - s_sign*s*u + (base + s_sign*t) = 0
        lin = mul(const(s_sign), s)
        cst = add(base, mul(const(s_sign), t))
        disc = sqrt(sub(mul(const(2), y0), mul(const(4), cst)))
        for d_sign in (1, -1):
            u = div(add(lin, mul(const(d_sign), disc)), const(2))
            roots.append(add(u, shift))
    return roots


def poly_roots(coeffs: list[Fraction]) -> list[RadicalExpr]:
    """Roots of a polynomial of degree <= 4 (ascending coefficients).

    Exact zero roots are factored off first, so degenerate constant terms
    still yield clean const(0) expressions instead of sqrt of noise.
    """
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        raise ValueError("degree must be at least 1")
    roots: list[RadicalExpr] = []
    while cs[0] == 0:
        roots.append(const(0))
        cs.pop(0)
    deg = len(cs) - 1
    if deg == 0:
        return roots
    if deg == 1:
        roots.append(const(-cs[0] / cs[1]))
    elif deg == 2:
        a, b, c = cs[2], cs[1], cs[0]
        disc = sqrt(const(b * b - 4 * a * c))
        for sgn in (1, -1):
            roots.append(div(add(const(-b), mul(const(sgn), disc)),
                             const(2 * a)))
    elif deg == 3:
        roots.extend(cubic_roots(cs[2] / cs[3], cs[1] / cs[3], cs[0] / cs[3]))
    elif deg == 4:
        roots.extend(quartic_roots(cs[4], cs[3], cs[2], cs[1], cs[0]))
    else:
        raise ValueError(f"degree {deg} not solvable here")
    return roots
