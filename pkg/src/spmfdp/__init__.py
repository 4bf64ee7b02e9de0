"""Exact forward-displacement solver for spherical parallel manipulators.

Quaternion quadric systems, elimination through a 20x20 cubic-coefficient
matrix, and closed-form roots in radicals, all over exact rationals.
"""

from .polyring import (
    Monomial,
    MultiPoly,
    NonSquare,
    NotDivisible,
    PolyMatrix,
    Rational,
    Truncation,
    parse_poly,
)
from .dixon import (
    AmbiguousKernel,
    CubicBasis,
    DegenerateSystem,
    DixonMatrix,
    PsiSet,
    QuadricSystem,
    build_U,
    build_dixon_matrix,
    dixon_determinant,
    extract_psi,
    kernel_coordinates,
    load_system,
    save_system,
    system_from_json,
    system_to_json,
)
from .spm import (
    GCoefficients,
    LegCondition,
    MotorAngles,
    NotUnit,
    Quaternion,
    RotationMatrix,
    build_3rrrr_system,
    build_generic_system,
    closed_form_G,
    extraneous_set,
    quaternion_to_rotation,
    symmetry_orbit,
)
from .radicals import RadicalExpr
from .solver import (
    CrossCheckMismatch,
    NotEven,
    RadicalRoot,
    SolutionSet,
    UnivariatePoly,
    VerifiedSolution,
    WrongDegree,
    assemble_solutions,
    fdp_report,
    solve_even_octic,
    solve_fdp,
    strip_extraneous_factor,
)
from .oracle import OracleConfig, ResidualReport, oracle_solve, verify_point

__version__ = "0.1.0"

__all__ = [
    "AmbiguousKernel", "CrossCheckMismatch", "CubicBasis", "DegenerateSystem",
    "DixonMatrix", "GCoefficients", "LegCondition", "Monomial", "MotorAngles",
    "MultiPoly", "NonSquare", "NotDivisible", "NotEven", "NotUnit",
    "OracleConfig", "PolyMatrix", "PsiSet", "QuadricSystem", "Quaternion",
    "RadicalExpr", "RadicalRoot", "Rational", "ResidualReport",
    "RotationMatrix", "SolutionSet", "Truncation", "UnivariatePoly",
    "VerifiedSolution", "WrongDegree", "assemble_solutions", "build_3rrrr_system",
    "build_U", "build_dixon_matrix", "build_generic_system", "closed_form_G",
    "dixon_determinant", "extract_psi", "extraneous_set", "fdp_report",
    "kernel_coordinates", "load_system", "oracle_solve", "parse_poly",
    "quaternion_to_rotation", "save_system", "solve_even_octic", "solve_fdp",
    "strip_extraneous_factor", "symmetry_orbit", "system_from_json",
    "system_to_json", "verify_point",
]
