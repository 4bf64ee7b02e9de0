"""Divided-difference matrix, psi cubics, the 20x20 matrix, determinants."""

import random
from fractions import Fraction

import numpy as np
import pytest

from helpers import R_FLOATS, planted_root_system, random_motor_angles

from spmfdp import (
    AmbiguousKernel,
    CubicBasis,
    DegenerateSystem,
    MultiPoly,
    QuadricSystem,
    UnivariatePoly,
    build_3rrrr_system,
    build_U,
    build_dixon_matrix,
    closed_form_G,
    dixon_determinant,
    extract_psi,
    kernel_coordinates,
    system_from_json,
    system_to_json,
)
from spmfdp.polyring import Monomial

x1, x2, x3 = (MultiPoly.var(v) for v in ("x1", "x2", "x3"))
y1, y2, y3 = (MultiPoly.var(v) for v in ("y1", "y2", "y3"))


def sphere_system() -> QuadricSystem:
    sphere = x1 ** 2 + x2 ** 2 + x3 ** 2 - 1
    others = [x1 * x2 - 1, x2 * x3 - 1, x1 - x3]
    return QuadricSystem((sphere, *others), ("x1", "x2", "x3"))


class TestBuildU:
    def test_sphere_row(self):
        U = build_U(sphere_system())
        assert U[0, 0] == x1 + y1
        assert U[0, 1] == x2 + y2
        assert U[0, 2] == x3 + y3
        assert U[0, 3] == y1 ** 2 + y2 ** 2 + y3 ** 2 - 1

    def test_reconstruction_identity(self, example_system):
        # sum_j (x_j - y_j) U[i][j] + U[i][3] gives back f_i, identically
        U = build_U(example_system)
        e = example_system.eliminated
        for i, f in enumerate(example_system.bound_polys()):
            acc = MultiPoly.zero()
            for j, (xj, yj) in enumerate(zip(e, ("y1", "y2", "y3"))):
                acc = acc + (MultiPoly.var(xj) - MultiPoly.var(yj)) * U[i, j]
            acc = acc + U[i, 3]
            assert acc == f

    def test_constant_row(self):
        c = MultiPoly.const(Fraction(7, 3))
        sys = QuadricSystem((c, x1 ** 2 - 1, x2 ** 2 - 1, x3 ** 2 - 1),
                            ("x1", "x2", "x3"))
        U = build_U(sys)
        assert U[0, 0].is_zero() and U[0, 1].is_zero() and U[0, 2].is_zero()
        assert U[0, 3] == c


class TestExtractPsi:
    def test_vanishes_at_planted_root_exactly(self):
        rng = random.Random(101)
        for _ in range(10):
            sys, root = planted_root_system(rng)
            psi = extract_psi(sys)
            assignment = dict(zip(sys.eliminated, root))
            for p in psi.as_tuple():
                assert p.evaluate(assignment) == 0

    def test_degree_bound(self):
        rng = random.Random(102)
        sys, _ = planted_root_system(rng)
        for p in extract_psi(sys).as_tuple():
            assert p.degree_in(sys.eliminated) <= 3

    def test_worked_instance_solution_kills_psi(self, example_system):
        r1, r2, r3, r4 = R_FLOATS
        psi = extract_psi(example_system)
        point = {"q0": r1, "q1": r2, "q2": -r3, "q3": -r4}
        for p in psi.as_tuple():
            assert abs(p.evaluate(point)) < 1e-10


class TestDixonMatrix:
    def test_defining_identity_symbolic(self, example_system):
        # Dix . [L] == (g_1, ..., g_20) with q0 still symbolic
        D = build_dixon_matrix(example_system)
        e = example_system.eliminated
        polys = example_system.bound_polys()
        psi = extract_psi(example_system)
        expected = list(polys)
        expected += [MultiPoly.var(v) * f for v in e for f in polys]
        expected += list(psi.as_tuple())
        basis = D.basis.monomials
        for i, g in enumerate(expected):
            acc = MultiPoly.zero()
            for j, m in enumerate(basis):
                acc = acc + D.matrix[i, j] * MultiPoly({m: Fraction(1)})
            assert acc == g, f"row {i} ({D.provenance[i]})"

    def test_first_rows_have_zero_cubic_block(self, example_system):
        D = build_dixon_matrix(example_system)
        for i in range(4):
            assert all(D.matrix[i, j].is_zero() for j in range(10))

    def test_planted_root_in_kernel(self):
        rng = random.Random(103)
        sys, root = planted_root_system(rng)
        D = build_dixon_matrix(sys)
        mat = np.array([[float(v) for v in row] for row in D.evaluate(None)])
        xi = dict(zip(sys.eliminated, (float(v) for v in root)))
        vec = np.array([float(MultiPoly({m: Fraction(1)}).evaluate(xi))
                        for m in D.basis.monomials])
        assert np.max(np.abs(mat @ vec)) < 1e-8

    def test_basis_is_the_twenty_low_degree_monomials(self):
        basis = CubicBasis.for_unknowns(("x1", "x2", "x3"))
        assert len(basis.monomials) == 20
        assert len(set(basis.monomials)) == 20
        assert all(m.degree() <= 3 for m in basis.monomials)
        # positions used by kernel extraction
        assert basis.monomials[16] == Monomial({"x1": 1})
        assert basis.monomials[17] == Monomial({"x2": 1})
        assert basis.monomials[18] == Monomial({"x3": 1})
        assert basis.monomials[19] == Monomial()


class TestDixonDeterminant:
    def test_worked_instance_factorization(self, example_angles, example_system):
        det = dixon_determinant(example_system)
        assert UnivariatePoly.from_multipoly(det).degree() == 16
        q0 = MultiPoly.var("q0")
        quotient = det.exact_quotient((4 * q0 ** 2 - 1) ** 4)
        g = closed_form_G(example_angles)
        lead = lambda p: p.terms[max(p.terms)]
        scale = lead(quotient) / lead(g)
        assert scale != 0
        assert quotient == g * scale

    def test_retained_symmetry(self, example_system):
        # same polynomial (monic, renamed) for each retained coordinate
        reference = None
        for v in ("q0", "q1", "q2", "q3"):
            sys_v = example_system.retarget(v) if v != "q0" else example_system
            det = UnivariatePoly.from_multipoly(dixon_determinant(sys_v), v)
            monic = det.monic().coeffs
            if reference is None:
                reference = monic
            else:
                assert monic == reference

    def test_vanishes_at_oracle_roots(self):
        from spmfdp import oracle_solve
        rng = random.Random(104)
        for _ in range(3):
            sys = build_3rrrr_system(random_motor_angles(rng))
            det = UnivariatePoly.from_multipoly(dixon_determinant(sys)).monic()
            for q in oracle_solve(sys):
                assert abs(float(det(q.q0))) < 1e-9

    def test_degenerate_duplicate_quadric(self):
        q0, q1, q2, q3 = (MultiPoly.var(v) for v in ("q0", "q1", "q2", "q3"))
        f = q1 ** 2 + q2 * q3 - q0 ** 2
        sys = QuadricSystem((f, f, q2 ** 2 - q0 * q1, q3 ** 2 - 1),
                            ("q1", "q2", "q3"), "q0")
        with pytest.raises(DegenerateSystem):
            dixon_determinant(sys)

    def test_permutation_changes_det_by_scale_at_most(self, example_system):
        det1 = UnivariatePoly.from_multipoly(dixon_determinant(example_system))
        permuted = QuadricSystem(
            (example_system.polys[2], example_system.polys[0],
             example_system.polys[3], example_system.polys[1]),
            example_system.eliminated, example_system.retained)
        det2 = UnivariatePoly.from_multipoly(dixon_determinant(permuted))
        assert det1.monic().coeffs == det2.monic().coeffs
        shuffled = QuadricSystem(
            example_system.polys,
            ("q3", "q1", "q2"), example_system.retained)
        det3 = UnivariatePoly.from_multipoly(dixon_determinant(shuffled))
        assert det1.monic().coeffs == det3.monic().coeffs


class TestKernelCoordinates:
    def test_worked_instance_root(self, example_system):
        D = build_dixon_matrix(example_system)
        r1, r2, r3, r4 = R_FLOATS
        got = kernel_coordinates(D, r1)
        assert got is not None
        expect = (r2, -r3, -r4)
        assert max(abs(a - b) for a, b in zip(got, expect)) < 1e-9

    def test_non_root_gives_nothing(self, example_system):
        D = build_dixon_matrix(example_system)
        assert kernel_coordinates(D, 0.9) is None

    def test_planted_root_recovery(self):
        rng = random.Random(105)
        hits = 0
        for _ in range(10):
            sys, root = planted_root_system(rng, retained="q0")
            D = build_dixon_matrix(sys)
            try:
                got = kernel_coordinates(D, float(root[3]))
            except AmbiguousKernel:
                continue
            if got is None:
                continue
            expect = tuple(float(v) for v in root[:3])
            assert max(abs(a - b) for a, b in zip(got, expect)) < 1e-9
            hits += 1
        assert hits >= 8


class TestSystemJson:
    def test_round_trip(self, example_system):
        again = system_from_json(system_to_json(example_system))
        assert again == example_system

    def test_bindings_round_trip(self):
        q0, q1, q2, q3 = (MultiPoly.var(v) for v in ("q0", "q1", "q2", "q3"))
        A = MultiPoly.var("A")
        sys = QuadricSystem(
            (A * q1 ** 2 - q0 ** 2, q2 ** 2 - q0 * q1, q3 ** 2 - q0 * q2,
             q1 * q2 - 1),
            ("q1", "q2", "q3"), "q0", parameters=("A",),
            bindings={"A": Fraction(3, 7)})
        again = system_from_json(system_to_json(sys))
        assert again == sys
        assert again.bound_polys() == sys.bound_polys()
