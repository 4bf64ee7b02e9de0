"""Session fixtures: the worked numerical instance."""

from fractions import Fraction

import pytest

from spmfdp import MotorAngles, QuadricSystem, build_3rrrr_system


@pytest.fixture(scope="session")
def example_angles() -> MotorAngles:
    return MotorAngles.from_exact([
        (Fraction(3, 5), Fraction(4, 5)),
        (Fraction(5, 13), Fraction(12, 13)),
        (Fraction(7, 25), Fraction(24, 25)),
    ])


@pytest.fixture(scope="session")
def example_system(example_angles) -> QuadricSystem:
    return build_3rrrr_system(example_angles)
