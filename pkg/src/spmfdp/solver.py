"""End-to-end forward displacement solver.

Pipeline: elimination determinant in q0, strip the parameter-independent
(2q0-1)^4 (2q0+1)^4 factor, solve the remaining even octic in radicals via
the quartic in t = q0^2, recover the other coordinates from the numeric
kernel of the elimination matrix (with a combinatorial fallback over
per-coordinate root sets), Newton-polish, drop the eight extraneous
half-coordinate points, and close up under the symmetry orbit.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp

from .dixon import (
    AmbiguousKernel,
    DixonMatrix,
    QuadricSystem,
    build_dixon_matrix,
    dixon_determinant,
    kernel_coordinates,
)
from .polyring import MultiPoly, Monomial, NotDivisible, as_quadratic_form
from .radicals import RadicalExpr, neg as rad_neg, poly_roots, sqrt as rad_sqrt
from .spm import (
    MotorAngles,
    Quaternion,
    build_3rrrr_system,
    closed_form_G,
    extraneous_set,
    quaternion_to_rotation,
    symmetry_orbit,
)


class NotEven(ValueError):
    """Octic has odd-power terms; the t = q0^2 substitution does not apply."""


class WrongDegree(ValueError):
    """Polynomial degree differs from what the operation requires."""


class CrossCheckMismatch(RuntimeError):
    """Determinant-derived octic disagrees with the closed-form octic."""


#: Working precision (significant digits) for radical evaluation.
_RADICAL_DPS = 60
#: Distinct t-roots closer than this are treated as one multiple root.
_CLUSTER_TOL = Fraction(1, 10 ** 20)


@dataclass(frozen=True)
class UnivariatePoly:
    """Dense univariate polynomial, exact coefficients in ascending order."""

    coeffs: tuple[Fraction, ...]
    var: str = "q0"

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_multipoly(cls, p: MultiPoly, var: str | None = None) -> "UnivariatePoly":
        names = p.unknowns
        if var is None:
            if len(names) > 1:
                raise ValueError(f"not univariate: unknowns {names}")
            var = names[0] if names else "q0"
        elif any(v != var for v in names):
            raise ValueError(f"unknowns {names} besides {var}")
        deg = p.degree()
        coeffs = [Fraction(0)] * (deg + 1 if deg >= 0 else 0)
        for m, c in p.terms.items():
            coeffs[m.degree()] = c
        return cls(tuple(coeffs), var)

    def to_multipoly(self) -> MultiPoly:
        terms = {Monomial({self.var: k} if k else {}): c
                 for k, c in enumerate(self.coeffs) if c != 0}
        return MultiPoly(terms)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial")
        return self.coeffs[-1]

    def is_even(self) -> bool:
        return all(c == 0 for k, c in enumerate(self.coeffs) if k % 2 == 1)

    def monic(self) -> "UnivariatePoly":
        lead = self.leading()
        return UnivariatePoly(tuple(c / lead for c in self.coeffs), self.var)

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return Fraction(0) if acc is None else acc

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly(tuple(k * c for k, c in enumerate(self.coeffs))[1:],
                              self.var)

    def exact_quotient(self, d: "UnivariatePoly") -> "UnivariatePoly":
        """Long division; raises NotDivisible on any nonzero remainder."""
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dd = d.degree()
        lead = d.leading()
        quo = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            f = rem[k] / lead
            if f == 0:
                continue
            quo[k - dd] = f
            for i, dc in enumerate(d.coeffs):
                rem[k - dd + i] -= f * dc
        if any(c != 0 for c in rem):
            raise NotDivisible("nonzero remainder in univariate division")
        return UnivariatePoly(tuple(quo), self.var)


@dataclass(frozen=True)
class RadicalRoot:
    """A real root: high-precision value plus the radical tree behind it."""

    value: mpmath.mpf
    expression: RadicalExpr
    multiplicity: int = 1


@dataclass(frozen=True)
class VerifiedSolution:
    """One orientation with its per-equation residuals."""

    q: Quaternion
    residuals: tuple[float, float, float, float]
    extraneous: bool = False

    @property
    def max_residual(self) -> float:
        return max(abs(r) for r in self.residuals)


@dataclass(frozen=True)
class SolutionSet:
    """Verified solutions of one forward displacement instance.

    Real non-extraneous solutions come in +- pairs; an empty set is a valid
    outcome (no real pose for these inputs), distinct from any failure,
    which raises instead.
    """

    solutions: tuple[VerifiedSolution, ...]
    extraneous_removed: int = 0
    orbit_representative: int | None = None
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.solutions)

    def quaternions(self) -> list[Quaternion]:
        return [s.q for s in self.solutions]


def _strip_factor_poly(var: str) -> UnivariatePoly:
    # (2x - 1)^4 (2x + 1)^4 = (4x^2 - 1)^4
    base = UnivariatePoly((Fraction(-1), Fraction(0), Fraction(4)), var)
    out = UnivariatePoly((Fraction(1),), var)
    for _ in range(4):
        out = _umul(out, base)
    return out


def _umul(p: UnivariatePoly, q: UnivariatePoly) -> UnivariatePoly:
    if p.is_zero() or q.is_zero():
        return UnivariatePoly((), p.var)
    cs = [Fraction(0)] * (p.degree() + q.degree() + 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            cs[i + j] += a * b
    return UnivariatePoly(tuple(cs), p.var)


def strip_extraneous_factor(p: UnivariatePoly) -> UnivariatePoly:
    """Divide out (2x-1)^4 (2x+1)^4 and verify the quotient's shape.

    The quotient must be even of degree at most 8 (exactly 8 for generic
    parameters; solve_even_octic enforces that); a remainder or odd terms
    signal degenerate parameters or an upstream fault, reported as
    NotDivisible either way.
    """
    quotient = p.exact_quotient(_strip_factor_poly(p.var))
    if quotient.degree() > 8:
        raise NotDivisible(
            f"quotient has degree {quotient.degree()}, expected at most 8")
    if not quotient.is_even():
        raise NotDivisible("quotient has odd-power terms")
    return quotient


def solve_even_octic(g: UnivariatePoly) -> list[RadicalRoot]:
    """Real roots of an even octic, in radicals.

    Substitutes t = x^2 and solves the quartic through the resolvent
    cubic; each real nonnegative t yields the pair +-sqrt(t).  Nearby
    t-roots (within 1e-20) collapse into one root with multiplicity.
    Complex roots are dropped (they are counted by the caller as
    8 minus the returned multiplicities).
    """
    if g.degree() != 8:
        raise WrongDegree(f"degree {g.degree()}, expected 8")
    if not g.is_even():
        raise NotEven("octic has odd-power terms")
    quartic = [g.coeffs[2 * k] if 2 * k < len(g.coeffs) else Fraction(0)
               for k in range(5)]
    trees = poly_roots(quartic)
    with mp.workdps(_RADICAL_DPS):
        evaluated = [(t, t.evaluate(_RADICAL_DPS)) for t in trees]
        # keep real t-roots
        reals = []
        for tree, val in evaluated:
            if abs(val.imag) <= mpmath.mpf("1e-30") * max(1, abs(val.real)):
                reals.append((tree, val.real))
        reals.sort(key=lambda tv: tv[1])
        clusters: list[list] = []
        for tree, val in reals:
            if clusters and abs(val - clusters[-1][-1][1]) < mpmath.mpf(
                    _CLUSTER_TOL.numerator) / _CLUSTER_TOL.denominator:
                clusters[-1].append((tree, val))
            else:
                clusters.append([(tree, val)])
        roots: list[RadicalRoot] = []
        for cluster in clusters:
            tree, tval = cluster[0]
            mult = len(cluster)
            if abs(tval) <= mpmath.mpf("1e-30"):
                roots.append(RadicalRoot(mpmath.mpf(0), tree, 2 * mult))
                continue
            if tval < 0:
                continue  # complex q0 pair
            pos = rad_sqrt(tree)
            val = mpmath.sqrt(tval)
            roots.append(RadicalRoot(+val, pos, mult))
            roots.append(RadicalRoot(-val, rad_neg(pos), mult))
    roots.sort(key=lambda r: r.value, reverse=True)
    return roots


def _system_vars(sys: QuadricSystem) -> list[str]:
    names = set(sys.eliminated)
    if sys.retained is not None:
        names.add(sys.retained)
    from .polyring import _rank
    return sorted(names, key=_rank)


def _numeric_forms(sys: QuadricSystem, names: Sequence[str]):
    """Float (M, b, c) per quadric for fast evaluation and Newton steps."""
    forms = []
    for f in sys.bound_polys():
        M, b, c = as_quadratic_form(f, list(names))
        forms.append((np.array(M, dtype=float), np.array(b, dtype=float),
                      float(c)))
    return forms


def _residuals(forms, x: np.ndarray) -> np.ndarray:
    return np.array([x @ M @ x + b @ x + c for M, b, c in forms])


def _newton_polish(forms, x: np.ndarray, iters: int = 5) -> np.ndarray:
    for _ in range(iters):
        f = _residuals(forms, x)
        J = np.array([2 * M @ x + b for M, b, _ in forms])
        try:
            dx = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(J, -f, rcond=None)[0]
        x = x + dx
    return x


def _real_roots_numeric(p: UnivariatePoly) -> list[float]:
    """Real roots of an exact univariate polynomial, polished doubles."""
    if p.degree() < 1:
        return []
    desc = [float(c) for c in reversed(p.coeffs)]
    scale = max(abs(c) for c in desc)
    raw = np.roots([c / scale for c in desc])
    dp = p.derivative()
    out: list[float] = []
    for z in raw:
        if abs(z.imag) > 1e-7:
            continue
        x = float(z.real)
        for _ in range(3):
            d = float(dp(x))
            if d == 0:
                break
            x -= float(p(x)) / d
        if not any(abs(x - y) < 1e-10 for y in out):
            out.append(x)
    return sorted(out)


def _order_key(q: tuple[float, ...]):
    # Positive-q0 solutions first, by increasing |q0|, then mirrored.
    return (q[0] <= 0, abs(q[0]), q[1:])


def assemble_solutions(sys: QuadricSystem, q0_roots: Sequence,
                       *, residual_tol: float = 1e-9,
                       extraneous_tol: float = 1e-6,
                       dedup_tol: float = 1e-9) -> SolutionSet:
    """Recover full quaternions from retained-coordinate roots.

    Each root value is bound in the elimination matrix and the remaining
    coordinates read off its kernel; roots whose kernel is missing or
    ambiguous fall back to filtering all tuples over the per-coordinate
    root sets.  Candidates are polished with five Newton steps, filtered
    by residual, stripped of extraneous points, completed with every
    orbit member that re-verifies, and deduplicated.
    """
    names = _system_vars(sys)
    if len(names) != 4:
        raise ValueError("system must have four unknowns for assembly")
    retained_pos = names.index(sys.retained)
    elim_pos = [names.index(v) for v in sys.eliminated]
    forms = _numeric_forms(sys, names)
    D = build_dixon_matrix(sys)

    root_values = [float(r.value) if isinstance(r, RadicalRoot) else float(r)
                   for r in q0_roots]

    candidates: list[np.ndarray] = []
    need_fallback = False
    for s0 in root_values:
        try:
            ker = kernel_coordinates(D, s0)
        except AmbiguousKernel:
            need_fallback = True
            continue
        if ker is None:
            need_fallback = True
            continue
        x = np.zeros(4)
        x[retained_pos] = s0
        for pos, xi in zip(elim_pos, ker):
            x[pos] = xi
        candidates.append(x)

    if need_fallback and root_values:
        coord_sets = {sys.retained: root_values}
        for v in sys.eliminated:
            det = dixon_determinant(sys.retarget(v))
            coord_sets[v] = _real_roots_numeric(
                UnivariatePoly.from_multipoly(det, v))
        grids = [coord_sets[v] for v in names]
        import itertools
        for combo in itertools.product(*grids):
            x = np.array(combo)
            if np.max(np.abs(_residuals(forms, x))) < 1e-5:
                candidates.append(x)

    rho = [np.array(r.to_floats()) for r in extraneous_set()]

    verified: list[np.ndarray] = []
    removed: list[np.ndarray] = []

    def consider(x: np.ndarray) -> None:
        x = _newton_polish(forms, x)
        if np.max(np.abs(_residuals(forms, x))) > residual_tol:
            return
        if any(np.max(np.abs(x - r)) < extraneous_tol for r in rho):
            if not any(np.max(np.abs(x - r)) < dedup_tol for r in removed):
                removed.append(x)
            return
        if any(np.max(np.abs(x - v)) < dedup_tol for v in verified):
            return
        verified.append(x)

    for x in candidates:
        consider(x)
    # orbit completion over a snapshot of what is verified so far
    for x in list(verified):
        for member in symmetry_orbit(Quaternion(*x)):
            consider(np.array(member.to_floats()))

    verified.sort(key=lambda x: _order_key(tuple(x)))
    solutions = tuple(
        VerifiedSolution(Quaternion(*(float(v) for v in x)),
                         tuple(float(r) for r in _residuals(forms, x)))
        for x in verified)
    return SolutionSet(
        solutions=solutions,
        extraneous_removed=len(removed),
        orbit_representative=0 if solutions else None,
        diagnostics={"kernel_fallback": need_fallback},
    )


def solve_fdp(m: MotorAngles) -> SolutionSet:
    """Solve the forward displacement problem for the preset architecture.

    Cross-checks the determinant-derived octic against the closed-form one
    (they must agree up to a single rational scale, exactly) and raises
    CrossCheckMismatch otherwise; a vanishing determinant propagates as
    DegenerateSystem.
    """
    sys = build_3rrrr_system(m)
    det = UnivariatePoly.from_multipoly(dixon_determinant(sys), "q0")
    g_det = strip_extraneous_factor(det)
    g_closed = UnivariatePoly.from_multipoly(closed_form_G(m), "q0")
    if g_closed.is_zero() or g_det.is_zero():
        raise CrossCheckMismatch("one octic vanished identically")
    scale = g_det.leading() / g_closed.leading()
    if scale == 0 or g_det.coeffs != tuple(scale * c for c in g_closed.coeffs):
        raise CrossCheckMismatch(
            "determinant-derived octic does not match the closed form")
    roots = solve_even_octic(g_det)
    result = assemble_solutions(sys, roots)
    real = sum(r.multiplicity for r in roots)
    diagnostics = {
        **result.diagnostics,
        "determinant_degree": det.degree(),
        "octic_scale_vs_closed_form": f"{scale.numerator}/{scale.denominator}",
        "real_q0_roots": real,
        "complex_q0_roots": 8 - real,
        "repeated_q0_roots": any(r.multiplicity > 1 for r in roots),
    }
    # the stripped (2q0-1)^4 (2q0+1)^4 factor accounts for the eight
    # half-coordinate extraneous points
    return dataclasses.replace(result, diagnostics=diagnostics,
                               extraneous_removed=result.extraneous_removed + 8)


def fdp_report(m: MotorAngles, *, include_extraneous: bool = False,
               precision: int = 17) -> dict:
    """Full machine-readable result for one solve.

    Exact data (determinant and octic coefficients) is emitted as
    "num/den" strings.  Solution coordinates, rotation entries and root
    values are decimal strings at `precision` significant digits;
    coordinates that coincide with a radical root are rendered from its
    high-precision value, so more digits are available than a double
    holds.
    """
    sys = build_3rrrr_system(m)
    det = UnivariatePoly.from_multipoly(dixon_determinant(sys), "q0")
    g_det = strip_extraneous_factor(det)
    roots = solve_even_octic(g_det)
    result = solve_fdp(m)

    def fstr(c: Fraction) -> str:
        return f"{c.numerator}/{c.denominator}"

    snap = [r.value for r in roots]

    def fmt(x: float) -> str:
        with mp.workdps(max(precision + 5, 25)):
            for v in snap:
                if abs(x - float(v)) < 1e-9:
                    return mpmath.nstr(v, precision)
            return mpmath.nstr(mpmath.mpf(x), precision)

    solutions = []
    listed = list(result.solutions)
    if include_extraneous:
        names = _system_vars(sys)
        forms = _numeric_forms(sys, names)
        for q in extraneous_set():
            x = np.array(q.to_floats())
            listed.append(VerifiedSolution(
                q, tuple(float(r) for r in _residuals(forms, x)),
                extraneous=True))
    for s in listed:
        solutions.append({
            "q": [fmt(v) for v in s.q.to_floats()],
            "rotation": [[fmt(v) for v in row]
                         for row in quaternion_to_rotation(s.q).as_lists()],
            "residuals": [float(r) for r in s.residuals],
            "extraneous": s.extraneous,
        })
    return {
        "parameters": m.to_json(),
        "determinant_coeffs": [fstr(c) for c in det.coeffs],
        "G_coeffs": [fstr(c) for c in g_det.coeffs],
        "roots": [{
            "value": mpmath.nstr(r.value, precision),
            "radical_expr": r.expression.to_json(),
            "multiplicity": r.multiplicity,
        } for r in roots],
        "solutions": solutions,
        "diagnostics": {
            **result.diagnostics,
            "extraneous_removed": result.extraneous_removed,
            "orbit_representative": result.orbit_representative,
        },
    }
