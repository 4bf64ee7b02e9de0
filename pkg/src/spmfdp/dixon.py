"""Dixon-style elimination for four quadrics in three unknowns.

The pipeline: divided differences of the four quadrics give a 4x4 matrix U;
the low-order coefficients of det U in the auxiliary unknowns are four
cubics that vanish wherever the quadrics do; together with the quadrics and
their shifts by each unknown they fill a 20x20 coefficient matrix over the
cubic monomial basis.  That matrix is singular at common roots, and its
determinant -- univariate in a retained unknown -- vanishes at the retained
coordinate of every solution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .polyring import (
    Monomial,
    MultiPoly,
    PolyMatrix,
    Truncation,
    fraction_matrix_det,
)


class DegenerateSystem(RuntimeError):
    """The Dixon determinant vanishes identically; elimination fails here."""


class AmbiguousKernel(RuntimeError):
    """Kernel dimension exceeds one; coordinates cannot be read off."""


#: Exponent triples of the twenty degree-<=3 monomials, highest first.
_BASIS_EXPONENTS = (
    (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1), (1, 0, 2),
    (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
    (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2),
    (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0),
)


@dataclass(frozen=True)
class CubicBasis:
    """The ordered 20-monomial basis of cubics in three unknowns."""

    monomials: tuple[Monomial, ...]

    @classmethod
    def for_unknowns(cls, names: Sequence[str]) -> "CubicBasis":
        if len(names) != 3:
            raise ValueError("cubic basis needs exactly three unknowns")
        mons = tuple(
            Monomial({v: e for v, e in zip(names, exps) if e})
            for exps in _BASIS_EXPONENTS
        )
        return cls(mons)

    def index_of(self, m: Monomial) -> int:
        return self.monomials.index(m)


@dataclass(frozen=True)
class QuadricSystem:
    """Four quadrics plus the bookkeeping of which unknowns get eliminated.

    `eliminated` names the three unknowns removed by the elimination;
    `retained` (optional) is carried through as a parameter of the Dixon
    matrix; `parameters` are free coefficient symbols, with exact values
    supplied through `bindings`.
    """

    polys: tuple[MultiPoly, MultiPoly, MultiPoly, MultiPoly]
    eliminated: tuple[str, str, str]
    retained: str | None = None
    parameters: tuple[str, ...] = ()
    bindings: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.polys) != 4:
            raise ValueError("exactly four quadrics required")
        if len(set(self.eliminated)) != 3:
            raise ValueError("eliminated unknowns must be three distinct names")
        reserved = set(self.eliminated)
        if self.retained is not None and self.retained in reserved:
            raise ValueError("retained unknown overlaps the eliminated ones")
        reserved.add(self.retained)
        if reserved & set(self.parameters):
            raise ValueError("parameters overlap eliminated/retained unknowns")
        allowed = set(self.eliminated) | set(self.parameters)
        if self.retained is not None:
            allowed.add(self.retained)
        for f in self.polys:
            if f.degree_in(self.eliminated) > 2:
                raise ValueError(f"not a quadric in {self.eliminated}: {f}")
            stray = set(f.unknowns) - allowed
            if stray:
                raise ValueError(f"undeclared unknowns {sorted(stray)} in {f}")
        unknown_bindings = set(self.bindings) - set(self.parameters)
        if unknown_bindings:
            raise ValueError(f"bindings for non-parameters {sorted(unknown_bindings)}")

    def bound_polys(self) -> tuple[MultiPoly, ...]:
        """The quadrics with parameter bindings substituted in."""
        if not self.bindings:
            return self.polys
        return tuple(f.substitute(dict(self.bindings)) for f in self.polys)

    def unbound_parameters(self) -> tuple[str, ...]:
        return tuple(p for p in self.parameters if p not in self.bindings)

    def retarget(self, new_retained: str) -> "QuadricSystem":
        """Swap which of the four unknowns is retained (Corollary-4 style)."""
        if self.retained is None:
            raise ValueError("system has no retained unknown to swap")
        four = sorted({*self.eliminated, self.retained})
        if new_retained not in four:
            raise ValueError(f"{new_retained} is not an unknown of the system")
        elim = tuple(v for v in four if v != new_retained)
        return QuadricSystem(self.polys, elim, new_retained,
                             self.parameters, dict(self.bindings))


@dataclass(frozen=True)
class PsiSet:
    """The four low-order coefficient cubics of det U."""

    psi000: MultiPoly
    psi100: MultiPoly
    psi010: MultiPoly
    psi001: MultiPoly

    def as_tuple(self):
        return (self.psi000, self.psi100, self.psi010, self.psi001)


@dataclass(frozen=True)
class DixonMatrix:
    """20x20 coefficient matrix of the twenty elimination cubics.

    Entries are polynomials in the retained unknown and any unbound
    parameters.  `provenance[i]` names the cubic behind row i.
    """

    matrix: PolyMatrix
    basis: CubicBasis
    provenance: tuple[str, ...]
    retained: str | None

    def evaluate(self, retained_value=None) -> list[list]:
        """Entries with the retained unknown bound to a number.

        Fraction input keeps the result exact; float input gives floats.
        A `None` binding requires every entry to be constant already.
        """
        if retained_value is None:
            return [[e.constant_value() for e in row]
                    for row in self.matrix.entries]
        binding = {self.retained: retained_value}
        out = []
        for row in self.matrix.entries:
            out.append([e.evaluate(binding) if not e.is_constant()
                        else e.constant_value() for e in row])
        return out

    def evaluate_float(self, retained_value: float) -> np.ndarray:
        binding = {self.retained: float(retained_value)}
        n = self.matrix.rows
        out = np.empty((n, n))
        for i, row in enumerate(self.matrix.entries):
            for j, e in enumerate(row):
                out[i, j] = e.evaluate(binding) if e.terms else 0.0
        return out


def _aux_names(sys: QuadricSystem, preferred: Sequence[str]) -> tuple[str, ...]:
    taken = set(sys.eliminated) | set(sys.parameters)
    if sys.retained is not None:
        taken.add(sys.retained)
    if not (set(preferred) & taken):
        return tuple(preferred)
    return tuple(f"{name}_" for name in preferred)


def build_U(sys: QuadricSystem, aux: Sequence[str] | None = None) -> PolyMatrix:
    """The 4x4 divided-difference matrix of the system.

    Column j (j=0..2) holds the quotient of f_i's difference under
    substituting aux[j] for eliminated[j] (substitutions accumulate left to
    right), and the last column holds f_i with all three substituted, so
    that sum_j (x_j - y_j)*U[i][j] + U[i][3] telescopes back to f_i.
    """
    if aux is None:
        aux = _aux_names(sys, ("y1", "y2", "y3"))
    e = sys.eliminated
    rows = []
    for f in sys.bound_polys():
        row = []
        current = f
        for xj, yj in zip(e, aux):
            shifted = current.substitute({xj: MultiPoly.var(yj)})
            diff = current - shifted
            denom = MultiPoly.var(xj) - MultiPoly.var(yj)
            row.append(diff.exact_quotient(denom))
            current = shifted
        row.append(current)
        rows.append(row)
    return PolyMatrix(rows)


def extract_psi(sys: QuadricSystem) -> PsiSet:
    """Coefficients of 1, a, b, c in det U, truncated past first order.

    The expansion drops every monomial of degree two or more in the
    auxiliary unknowns, which is exactly the reduction modulo
    (a^2, b^2, c^2, ab, ac, bc).
    """
    aux = _aux_names(sys, ("a", "b", "c"))
    U = build_U(sys, aux=aux)
    trunc = Truncation.quadratic_in(aux)
    det = U.determinant(trunc)
    groups = det.split_by(aux)
    one = Monomial()
    keys = [one] + [Monomial({v: 1}) for v in aux]
    psis = [groups.get(k, MultiPoly.zero()) for k in keys]
    return PsiSet(*psis)


def build_dixon_matrix(sys: QuadricSystem) -> DixonMatrix:
    """Assemble the 20x20 matrix whose rows are the cubics' coefficients.

    Rows 0-3 are the quadrics themselves, rows 4-15 their products with
    each eliminated unknown, rows 16-19 the psi cubics; columns follow the
    cubic monomial basis, so matrix . basis == cubics holds identically.
    """
    e = sys.eliminated
    basis = CubicBasis.for_unknowns(e)
    index = {m: k for k, m in enumerate(basis.monomials)}
    polys = sys.bound_polys()
    psi = extract_psi(sys)

    cubics: list[tuple[str, MultiPoly]] = []
    for i, f in enumerate(polys, start=1):
        cubics.append((f"f{i}", f))
    for xj in e:
        xv = MultiPoly.var(xj)
        for i, f in enumerate(polys, start=1):
            cubics.append((f"{xj}*f{i}", xv * f))
    for name, p in zip(("psi000", "psi100", "psi010", "psi001"), psi.as_tuple()):
        cubics.append((name, p))

    zero = MultiPoly.zero()
    rows = []
    for name, cubic in cubics:
        row = [zero] * 20
        for m, coeff in cubic.split_by(e).items():
            k = index.get(m)
            if k is None:
                raise ValueError(f"cubic {name} has monomial {m} outside the basis")
            row[k] = coeff
        rows.append(row)
    return DixonMatrix(PolyMatrix(rows), basis, tuple(n for n, _ in cubics),
                       sys.retained)


#: Interpolation nodes: 0, 1, -1, ..., 20, -20 (41 points covers degree 40,
#: comfortably above the true degree of these determinants).
_EVAL_POINTS = [Fraction(0)] + [Fraction(s * k) for k in range(1, 21) for s in (1, -1)]


def _newton_interpolate(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    """Coefficients (ascending) of the polynomial through the given points."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [coef[-1]]
    for k in range(n - 2, -1, -1):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= c * xs[k]
        nxt[0] += coef[k]
        poly = nxt
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def dixon_determinant(sys: QuadricSystem) -> MultiPoly:
    """det of the Dixon matrix as an exact univariate polynomial.

    The matrix is evaluated at 41 rational nodes (fraction-free Bareiss at
    each) and the determinant recovered by exact interpolation; symbolic
    elimination over the coefficient ring would blow up instead.

    Raises DegenerateSystem when the determinant vanishes identically.
    """
    if sys.retained is None:
        raise ValueError("dixon_determinant needs a retained unknown")
    unbound = sys.unbound_parameters()
    if unbound:
        raise ValueError(f"parameters {list(unbound)} must be bound to rationals")
    D = build_dixon_matrix(sys)
    values = []
    for t in _EVAL_POINTS:
        rows = D.evaluate(t)
        values.append(fraction_matrix_det(rows))
    if all(v == 0 for v in values):
        raise DegenerateSystem(
            f"Dixon determinant in {sys.retained} is identically zero")
    coeffs = _newton_interpolate(_EVAL_POINTS, values)
    x = MultiPoly.var(sys.retained)
    result = MultiPoly.zero()
    for k, c in enumerate(coeffs):
        if c != 0:
            result = result + MultiPoly.const(c) * x ** k
    return result


def kernel_coordinates(D: DixonMatrix, retained_value=None, *,
                       singular_tol: float = 1e-8,
                       infinity_tol: float = 1e-6) -> tuple[float, float, float] | None:
    """Read a common root off the numeric kernel of the Dixon matrix.

    Rows are sup-normalized before the SVD; the matrix counts as singular
    when the smallest singular value is below `singular_tol` relative to
    the largest.  The kernel vector is scaled by its last entry (the
    monomial 1), so entries 16..18 become the three eliminated coordinates.
    Returns None when the matrix is nonsingular or the root is at infinity.
    """
    if D.retained is not None and retained_value is None:
        raise ValueError("retained unknown needs a value")
    if D.retained is None:
        mat = np.array([[float(v) for v in row] for row in D.evaluate(None)])
    else:
        mat = D.evaluate_float(float(retained_value))
    norms = np.abs(mat).max(axis=1)
    norms[norms == 0] = 1.0
    mat = mat / norms[:, None]
    _, s, vt = np.linalg.svd(mat)
    if s[0] == 0:
        raise AmbiguousKernel("matrix is identically zero")
    if s[-1] / s[0] >= singular_tol:
        return None
    if s[-2] / s[0] < singular_tol:
        raise AmbiguousKernel("kernel dimension exceeds one")
    v = vt[-1]
    last = v[19]
    if abs(last) < infinity_tol:
        return None
    return (float(v[16] / last), float(v[17] / last), float(v[18] / last))


# -- JSON import/export ------------------------------------------------------

def system_to_json(sys: QuadricSystem) -> dict:
    return {
        "polys": [f.to_json_terms() for f in sys.polys],
        "eliminated": list(sys.eliminated),
        "retained": sys.retained,
        "parameters": list(sys.parameters),
        "bindings": {k: f"{v.numerator}/{v.denominator}"
                     for k, v in sys.bindings.items()},
    }


def system_from_json(data: Mapping) -> QuadricSystem:
    polys = tuple(MultiPoly.from_json_terms(p) for p in data["polys"])
    bindings = {str(k): Fraction(str(v))
                for k, v in data.get("bindings", {}).items()}
    return QuadricSystem(
        polys=polys,
        eliminated=tuple(data["eliminated"]),
        retained=data.get("retained"),
        parameters=tuple(data.get("parameters", ())),
        bindings=bindings,
    )


def load_system(path: str) -> QuadricSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return system_from_json(json.load(fh))


def save_system(sys: QuadricSystem, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(system_to_json(sys), fh, indent=2)
        fh.write("\n")
