"""One test per acceptance criterion; each prints its pass/fail line."""

import pytest

from conftest import ACCEPTANCE_LINES
from xi_contour import acceptance


@pytest.fixture(scope="module")
def scaling_fits():
    # criteria 5 and 6 read the same 12 fits
    return acceptance._scaling_fits()


def check(result):
    line = result.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert result.passed, line


def test_criterion_1_integral_equals_direct():
    check(acceptance.criterion_1())


def test_criterion_2_reflection_symmetry():
    check(acceptance.criterion_2())


def test_criterion_3_radii_independence():
    check(acceptance.criterion_3())


def test_criterion_4_ray_decay():
    check(acceptance.criterion_4())


def test_criterion_5_singularity_exponents(scaling_fits):
    check(acceptance.criterion_5(scaling_fits))


def test_criterion_6_exponents_coincide_on_critical_line(scaling_fits):
    check(acceptance.criterion_6(scaling_fits))


def test_criterion_7_zeros_and_cancellation():
    check(acceptance.criterion_7())


def test_criterion_8_honest_error_estimates():
    check(acceptance.criterion_8())


def test_criterion_9_convention_audit():
    check(acceptance.criterion_9())
