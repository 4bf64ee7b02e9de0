"""Exact multivariate polynomial arithmetic over arbitrary-precision rationals.

Coefficients are `fractions.Fraction` throughout, so every ring operation is
exact.  Monomials use a fixed global graded-lexicographic order (q0 < q1 < q2
< q3 < x1 < x2 < x3 < y1 < y2 < y3 < a < b < c, unlisted names after that,
alphabetically), which makes serialized output deterministic.

Term maps are sparse; matrices are dense.  Floating point never enters this
module: callers that need numeric values evaluate polynomials with float or
mpf bindings themselves.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction

#: Fixed global unknown order used by the graded-lex monomial order.
VAR_ORDER = ("q0", "q1", "q2", "q3", "x1", "x2", "x3", "y1", "y2", "y3",
             "a", "b", "c")

_VAR_RANK = {name: i for i, name in enumerate(VAR_ORDER)}


class NotDivisible(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class NonSquare(ValueError):
    """Determinant requested for a non-square matrix."""


def _rank(name: str):
    # Known names sort by table position, everything else after, by name.
    i = _VAR_RANK.get(name)
    return (0, i, "") if i is not None else (1, 0, name)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@functools.total_ordering
class Monomial:
    """Product of named unknowns with positive integer exponents.

    Canonical form: zero exponents are never stored and factors are kept
    sorted by the global variable order.  Instances are immutable and
    hashable, so they serve as term-map keys.
    """

    __slots__ = ("exps", "_hash")

    def __init__(self, exps: Union[Mapping[str, int], Iterable[tuple[str, int]]] = ()):
        if isinstance(exps, Mapping):
            items = exps.items()
        else:
            items = tuple(exps)
        cleaned = []
        for name, e in items:
            if e < 0:
                raise ValueError(f"negative exponent for {name}")
            if e > 0:
                cleaned.append((name, int(e)))
        cleaned.sort(key=lambda it: _rank(it[0]))
        object.__setattr__(self, "exps", tuple(cleaned))
        object.__setattr__(self, "_hash", hash(self.exps))

    def __setattr__(self, *_):
        raise AttributeError("Monomial is immutable")

    @classmethod
    def one(cls) -> "Monomial":
        return _MONOMIAL_ONE

    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def degree_in(self, names) -> int:
        names = set(names)
        return sum(e for v, e in self.exps if v in names)

    def exponent(self, name: str) -> int:
        for v, e in self.exps:
            if v == name:
                return e
        return 0

    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = dict(self.exps)
        for v, e in other.exps:
            d[v] = d.get(v, 0) + e
        return Monomial(d)

    def divides(self, other: "Monomial") -> bool:
        return all(other.exponent(v) >= e for v, e in self.exps)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        d = dict(self.exps)
        for v, e in other.exps:
            ne = d.get(v, 0) - e
            if ne < 0:
                raise NotDivisible(f"{self} not divisible by {other}")
            d[v] = ne
        return Monomial(d)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Monomial") -> bool:
        # Graded lex: lower total degree first; ties broken by the exponent
        # vector read in global variable order (bigger early exponent wins).
        ds, do = self.degree(), other.degree()
        if ds != do:
            return ds < do
        i = j = 0
        a, b = self.exps, other.exps
        while i < len(a) or j < len(b):
            ra = _rank(a[i][0]) if i < len(a) else None
            rb = _rank(b[j][0]) if j < len(b) else None
            if rb is None or (ra is not None and ra < rb):
                ea, eb = a[i][1], 0
            elif ra is None or rb < ra:
                ea, eb = 0, b[j][1]
            else:
                ea, eb = a[i][1], b[j][1]
            if ea != eb:
                return ea < eb
            if ra is not None and (rb is None or ra <= rb):
                i += 1
            if rb is not None and (ra is None or rb <= ra):
                j += 1
        return False

    def __str__(self):
        if not self.exps:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self.exps)

    def __repr__(self):
        return f"Monomial({dict(self.exps)!r})"


_MONOMIAL_ONE = Monomial(())

Scalar = Union[Fraction, int]
Bindable = Union["MultiPoly", Fraction, int]


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Zero coefficients are never stored.  Instances are immutable by
    convention: every operation returns a fresh polynomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] = ()):
        cleaned = {}
        for m, c in dict(terms).items():
            c = _as_fraction(c)
            if c != 0:
                cleaned[m] = c
        self.terms = cleaned

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls({})

    @classmethod
    def const(cls, c) -> "MultiPoly":
        return cls({_MONOMIAL_ONE: _as_fraction(c)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        return cls({Monomial({name: power}): Fraction(1)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m.degree() == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get(_MONOMIAL_ONE, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((m.degree() for m in self.terms), default=-1)

    def degree_in(self, names) -> int:
        return max((m.degree_in(names) for m in self.terms), default=-1)

    @property
    def unknowns(self) -> tuple[str, ...]:
        """Unknowns actually present, in the global order."""
        seen = set()
        for m in self.terms:
            seen.update(m.variables())
        return tuple(sorted(seen, key=_rank))

    def leading(self) -> tuple[Monomial, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        return MultiPoly.const(x)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, Fraction(0)) + c
            if s == 0:
                res.pop(m, None)
            else:
                res[m] = s
        out = MultiPoly.__new__(MultiPoly)
        out.terms = res
        return out

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        out = MultiPoly.__new__(MultiPoly)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = _as_fraction(other)
            if c == 0:
                return MultiPoly.zero()
            out = MultiPoly.__new__(MultiPoly)
            out.terms = {m: v * c for m, v in self.terms.items()}
            return out
        res: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                s = res.get(m, Fraction(0)) + c1 * c2
                if s == 0:
                    res.pop(m, None)
                else:
                    res[m] = s
        out = MultiPoly.__new__(MultiPoly)
        out.terms = res
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        return isinstance(other, MultiPoly) and self.terms == other.terms

    __hash__ = None

    # -- substitution and evaluation ----------------------------------------

    def substitute(self, bindings: Mapping[str, Bindable]) -> "MultiPoly":
        """Image under the ring homomorphism sending bound names to values."""
        polys = {v: self._coerce(b) for v, b in bindings.items()}
        result = MultiPoly.zero()
        for m, c in self.terms.items():
            acc = MultiPoly.const(c)
            free = {}
            for v, e in m.exps:
                if v in polys:
                    acc = acc * polys[v] ** e
                else:
                    free[v] = e
            if free:
                acc = acc * MultiPoly({Monomial(free): Fraction(1)})
            result = result + acc
        return result

    def evaluate(self, assignment: Mapping[str, object]):
        """Evaluate with every unknown bound.

        The arithmetic follows the value type: Fraction bindings give an
        exact Fraction, float/mpf bindings give float/mpf.
        """
        total = None
        for m, c in self.terms.items():
            term = c
            for v, e in m.exps:
                term = term * assignment[v] ** e
            total = term if total is None else total + term
        if total is None:
            return Fraction(0)
        return total

    def split_by(self, names) -> dict[Monomial, "MultiPoly"]:
        """Group terms by their monomial part in `names`.

        Returns a map from monomials in `names` to the cofactor polynomial
        in the remaining unknowns.
        """
        names = set(names)
        groups: dict[Monomial, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            inside = {v: e for v, e in m.exps if v in names}
            outside = {v: e for v, e in m.exps if v not in names}
            key = Monomial(inside)
            groups.setdefault(key, {})[Monomial(outside)] = c
        return {k: MultiPoly(v) for k, v in groups.items()}

    def coefficient_of(self, names, m: Monomial) -> "MultiPoly":
        """Coefficient of monomial `m` when viewed as a polynomial in `names`."""
        return self.split_by(names).get(m, MultiPoly.zero())

    # -- division -----------------------------------------------------------

    def exact_quotient(self, d: "MultiPoly") -> "MultiPoly":
        """Quotient q with q*d == self; raises NotDivisible otherwise."""
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if d.is_constant():
            return self * (1 / d.constant_value())
        quo: dict[Monomial, Fraction] = {}
        rem = self
        dm, dc = d.leading()
        while not rem.is_zero():
            rm, rc = rem.leading()
            if not dm.divides(rm):
                raise NotDivisible(f"remainder {rem} not divisible by {d}")
            tm = rm / dm
            tc = rc / dc
            quo[tm] = quo.get(tm, Fraction(0)) + tc
            rem = rem - MultiPoly({tm: tc}) * d
        return MultiPoly(quo)

    # -- text and JSON forms -------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form: terms in descending monomial order."""
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mag = abs(c)
            coeff = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if m.degree() == 0:
                body = coeff
            elif mag == 1:
                body = str(m)
            else:
                body = f"{coeff}*{m}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"

    def to_json_terms(self) -> list[dict]:
        out = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            out.append({
                "exponents": {v: e for v, e in m.exps},
                "coeff": f"{c.numerator}/{c.denominator}",
            })
        return out

    @classmethod
    def from_json_terms(cls, items: Iterable[Mapping]) -> "MultiPoly":
        terms: dict[Monomial, Fraction] = {}
        for it in items:
            m = Monomial({str(k): int(v) for k, v in it["exponents"].items()})
            c = Fraction(str(it["coeff"]))
            terms[m] = terms.get(m, Fraction(0)) + c
        return cls(terms)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                    r"|(?P<op>[-+*/^()]))")


def parse_poly(text: str) -> MultiPoly:
    """Parse the canonical text form (and ordinary +,-,*,^,/ expressions)."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"bad polynomial syntax at {text[pos:]!r}")
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", int(m.group("num"))))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else (None, None)

    def take():
        nonlocal idx
        t = tokens[idx]
        idx += 1
        return t

    def parse_atom() -> MultiPoly:
        kind, val = peek()
        if kind == "num":
            take()
            return MultiPoly.const(val)
        if kind == "name":
            take()
            return MultiPoly.var(val)
        if (kind, val) == ("op", "("):
            take()
            p = parse_sum()
            if peek() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            take()
            return p
        raise ValueError(f"unexpected token {val!r}")

    def parse_power() -> MultiPoly:
        base = parse_atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num":
                raise ValueError("exponent must be a literal integer")
            return base ** val
        return base

    def parse_product() -> MultiPoly:
        p = parse_power()
        while True:
            kind, val = peek()
            if (kind, val) == ("op", "*"):
                take()
                p = p * parse_power()
            elif (kind, val) == ("op", "/"):
                take()
                q = parse_power()
                p = p * (1 / q.constant_value())
            else:
                return p

    def parse_sum() -> MultiPoly:
        kind, val = peek()
        negate = False
        if (kind, val) == ("op", "-"):
            take()
            negate = True
        elif (kind, val) == ("op", "+"):
            take()
        p = parse_product()
        if negate:
            p = -p
        while True:
            kind, val = peek()
            if (kind, val) == ("op", "+"):
                take()
                p = p + parse_product()
            elif (kind, val) == ("op", "-"):
                take()
                p = p - parse_product()
            else:
                return p

    result = parse_sum()
    if idx != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return result


class Truncation:
    """Monomial ideal used to drop terms during determinant expansion.

    A monomial lies in the ideal when some generator divides it; the
    truncated determinant equals the full determinant reduced modulo the
    ideal.
    """

    __slots__ = ("generators",)

    def __init__(self, generators: Iterable[Monomial]):
        self.generators = tuple(generators)

    @classmethod
    def quadratic_in(cls, names: Iterable[str]) -> "Truncation":
        """The ideal of all degree-2 products of `names` (squares and cross terms)."""
        names = list(names)
        gens = []
        for i, u in enumerate(names):
            for v in names[i:]:
                gens.append(Monomial({u: 1}) * Monomial({v: 1}))
        return cls(gens)

    def contains(self, m: Monomial) -> bool:
        return any(g.divides(m) for g in self.generators)

    def reduce(self, p: MultiPoly) -> MultiPoly:
        kept = {m: c for m, c in p.terms.items() if not self.contains(m)}
        return MultiPoly(kept)


def _int_bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    n = len(rows)
    m = [r[:] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def fraction_matrix_det(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant of a rational matrix via integer Bareiss.

    Rows are scaled to integers first so the elimination runs entirely in
    (fast) big-integer arithmetic.
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scaled = []
    denom = 1
    for r in rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        scaled.append([int(x * lcm) for x in r])
        denom *= lcm
    return Fraction(_int_bareiss_det(scaled), denom)


class PolyMatrix:
    """Dense matrix of MultiPoly entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: list[list[MultiPoly]]):
        self.entries = [list(r) for r in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in row] for row in self.entries])

    def determinant(self, truncation: Truncation | None = None) -> MultiPoly:
        """Exact determinant.

        Rational-entry matrices go through fraction-free Bareiss;
        polynomial-entry matrices are expanded by minors with memoization
        on column sets, dropping truncated monomials as products form.
        """
        if self.rows != self.cols:
            raise NonSquare(f"{self.rows}x{self.cols} matrix has no determinant")
        n = self.rows
        if n == 0:
            return MultiPoly.const(1)
        if truncation is None and all(e.is_constant() for row in self.entries for e in row):
            rows = [[e.constant_value() for e in row] for row in self.entries]
            return MultiPoly.const(fraction_matrix_det(rows))
        return self._minor_expansion(truncation)

    def _minor_expansion(self, truncation: Truncation | None) -> MultiPoly:
        n = self.rows
        entries = self.entries
        memo: dict[int, MultiPoly] = {}

        def reduce(p: MultiPoly) -> MultiPoly:
            return truncation.reduce(p) if truncation is not None else p

        def rec(row: int, mask: int) -> MultiPoly:
            if row == n:
                return MultiPoly.const(1)
            cached = memo.get(mask)
            if cached is not None:
                return cached
            acc = MultiPoly.zero()
            sign = 1
            m = mask
            while m:
                low = m & -m
                j = low.bit_length() - 1
                e = entries[row][j]
                if not e.is_zero():
                    sub = rec(row + 1, mask & ~low)
                    if not sub.is_zero():
                        acc = acc + reduce(e * sub) * sign
                m &= m - 1
                sign = -sign
            memo[mask] = acc
            return acc

        return rec(0, (1 << n) - 1)


def as_quadratic_form(p: MultiPoly, names: list[str]):
    """Write a quadric as (M, b, c) with p = u'Mu + b'u + c over `names`.

    M is symmetric with Fraction entries; raises ValueError when p has
    degree above 2 in `names`.
    """
    n = len(names)
    index = {v: i for i, v in enumerate(names)}
    M = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n
    c = Fraction(0)
    for m, coeff in p.terms.items():
        if any(v not in index for v in m.variables()):
            raise ValueError(f"unknown {m} outside {names}")
        d = m.degree()
        if d == 0:
            c += coeff
        elif d == 1:
            b[index[m.exps[0][0]]] += coeff
        elif d == 2:
            if len(m.exps) == 1:
                i = index[m.exps[0][0]]
                M[i][i] += coeff
            else:
                i = index[m.exps[0][0]]
                j = index[m.exps[1][0]]
                M[i][j] += coeff / 2
                M[j][i] += coeff / 2
        else:
            raise ValueError(f"degree {d} term in quadric: {m}")
    return M, b, c
