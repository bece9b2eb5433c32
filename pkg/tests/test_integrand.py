import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xi_contour.errors import DomainError, PoleError
from xi_contour.integrand import (
    IntegrandKind,
    integrand_for,
    integrand_left,
    integrand_right,
    mp_exact,
    principal_power,
    sin_denominator,
)

PI = math.pi
strip = st.builds(complex, st.floats(0.05, 0.95), st.floats(-30, 30))
# angles off the real axis, where the integrands have their poles
off_axis = st.floats(0.05, 3.1) | st.floats(-3.1, -0.05)
plane = st.builds(complex, st.floats(-4, 4), st.floats(-4, 4))


def test_sin_denominator_examples():
    assert sin_denominator(0.5) == 2j
    assert sin_denominator(0.0) == 0
    assert sin_denominator(3.0) == 0
    w = 1e-6 * cmath.exp(0.75j * PI)
    assert abs(sin_denominator(w) - 2j * PI * w) / abs(2j * PI * w) < 1e-11


@settings(max_examples=60, deadline=None)
@given(plane)
def test_sin_denominator_matches_exponentials(w):
    want = cmath.exp(1j * PI * w) - cmath.exp(-1j * PI * w)
    assert abs(sin_denominator(w) - want) <= 1e-13 * max(1.0, abs(want))


def test_sin_denominator_overflow():
    with pytest.raises(OverflowError):
        sin_denominator(1j * 300)


def test_principal_power_example():
    assert principal_power(1j, -1j) == pytest.approx(math.exp(PI / 2), rel=1e-15)
    assert principal_power(1j, -1j) == pytest.approx(4.81047738, rel=1e-8)


def test_principal_power_branch():
    # -1 has argument +pi, also when written with a negative zero imaginary part
    assert principal_power(complex(-1.0, -0.0), 0.5) == pytest.approx(1j, abs=1e-15)
    with pytest.raises(DomainError):
        principal_power(0j, 0.5)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 5), st.floats(-3.1, 3.1), strip, strip)
def test_principal_power_additive_in_exponent(r, th, a, b):
    w = r * cmath.exp(1j * th)
    lhs = principal_power(w, a + b)
    rhs = principal_power(w, a) * principal_power(w, b)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 5), st.floats(-3.1, 3.1), strip)
def test_power_modulus(r, th, v):
    w = r * cmath.exp(1j * th)
    want = r ** v.real * math.exp(-v.imag * th)
    assert abs(principal_power(w, v)) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("w", [0j, 1 + 0j, -2 + 0j])
@pytest.mark.parametrize("fn", [integrand_left, integrand_right])
def test_poles(fn, w):
    with pytest.raises(PoleError):
        fn(w, 0.5 + 1j)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 4), off_axis, strip)
def test_integrands_match_mpmath(r, th, z):
    w = r * cmath.exp(1j * th)
    s = mpmath.mpc(z)
    wm = mpmath.mpc(w)
    left = mpmath.power(wm, -s) * mpmath.exp(-1j * mpmath.pi * wm ** 2) / (2j * mpmath.sinpi(wm))
    right = mpmath.power(wm, s - 1) * mpmath.exp(1j * mpmath.pi * wm ** 2) / (2j * mpmath.sinpi(wm))
    for got, want in ((integrand_left(w, z), complex(left)), (integrand_right(w, z), complex(right))):
        assert abs(got - want) <= 1e-11 * abs(want)


@pytest.mark.parametrize("th", [0.75 * PI, -0.25 * PI, 0.25 * PI, -0.75 * PI, 0.3, 2.0])
def test_gaussian_phase_modulus(th):
    # |exp(-+ i pi w^2)| = exp(+- pi r^2 sin 2 theta); on the rays it decays like exp(-pi r^2)
    r, z = 1.7, 0.4 + 2j
    w = r * cmath.exp(1j * th)
    dmag = abs(sin_denominator(w))
    left = abs(integrand_left(w, z)) * dmag / abs(principal_power(w, -z))
    right = abs(integrand_right(w, z)) * dmag / abs(principal_power(w, z - 1))
    assert left == pytest.approx(math.exp(PI * r * r * math.sin(2 * th)), rel=1e-12)
    assert right == pytest.approx(math.exp(-PI * r * r * math.sin(2 * th)), rel=1e-12)


@pytest.mark.parametrize("side", ["left", "right"])
def test_near_origin_behaviour(side):
    # f ~ w^v / (2 pi i w) for small w
    z = 0.5 + 0j
    w = 1e-6 * cmath.exp(1j * (PI / 4 if side == "left" else -PI / 4))
    f = integrand_left if side == "left" else integrand_right
    v = -z if side == "left" else z - 1
    ratio = abs(f(w, z)) / (abs(w) ** (v.real - 1) / (2 * PI))
    assert ratio == pytest.approx(1.0, rel=1e-3)


@pytest.mark.parametrize("fn, th", [(integrand_left, 0.75 * PI), (integrand_right, 0.25 * PI)])
def test_near_origin_at_hundredth(fn, th):
    w = 0.01 * cmath.exp(1j * th)
    assert abs(fn(w, 0.5)) == pytest.approx(abs(w) ** -1.5 / (2 * PI), rel=0.01)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 4), off_axis, strip)
def test_left_right_moduli_mirror(r, th, z):
    # |f_left(w; z)| = |f_right(conj w; 1 - conj z)|
    w = r * cmath.exp(1j * th)
    a = abs(integrand_left(w, z))
    b = abs(integrand_right(w.conjugate(), 1 - z.conjugate()))
    assert a == pytest.approx(b, rel=1e-11)


def test_vectorised_and_extended():
    z = 0.3 + 4j
    ws = np.array([0.2 + 0.1j, -1.5 + 1.5j, 2 - 2j])
    f = integrand_for("left", z)
    vals = f(ws)
    assert vals.shape == (3,)
    for w, val in zip(ws, vals):
        assert val == pytest.approx(integrand_left(complex(w), z), rel=1e-13)
    ext = f(ws.astype(np.clongdouble))
    assert ext.dtype == np.clongdouble
    assert np.allclose(ext.astype(complex), vals, rtol=1e-13)


def test_scaled_form():
    z = 0.3 + 8j
    f = integrand_for("right", z)
    ref = np.clongdouble(2 * cmath.exp(0.25j * PI))
    w = np.array([1.0 + 1.0j, 0.05 + 0.05j], dtype=np.clongdouble)
    dlog = np.log(w) - np.log(ref)
    got = f.scaled(w, dlog) * f.scale(np.log(ref))
    assert np.allclose(got.astype(complex), f(w).astype(complex), rtol=1e-14)


def test_power_ratio_matches_mpmath():
    z = 0.2 + 15j
    f = integrand_for("left", z)
    p, ref = 0.1 * cmath.exp(-0.25j * PI), 5 * cmath.exp(0.75j * PI)
    got = f.power_ratio(p, ref)
    with mpmath.workdps(40):
        want = mpmath.exp(-mpmath.mpc(z) * (mpmath.log(mpmath.mpc(p)) - mpmath.log(mpmath.mpc(ref))))
        rel = abs(mpmath.mpc(complex(got)) - want) / abs(want)
    assert rel < 1e-15


def test_mp_form_agrees():
    f = integrand_for("right", 0.6 - 3j)
    w = 0.7 - 0.4j
    with mpmath.workdps(30):
        val = complex(f.mp(mpmath.mpc(w)))
    assert val == pytest.approx(f(w), rel=1e-13)


def test_mp_exact_is_exact():
    x = np.longdouble(1) / np.longdouble(3)
    with mpmath.workdps(40):
        assert mpmath.mpf(1) / 3 - mp_exact(x) != 0
        assert abs(mp_exact(x) - mpmath.mpf(1) / 3) < 1e-19
    assert mp_exact(0.5) == mpmath.mpf("0.5")


def test_kind_fields():
    assert IntegrandKind("left").exponent(0.3 + 1j) == -(0.3 + 1j)
    assert IntegrandKind("right").exponent(0.3 + 1j) == pytest.approx(-0.7 + 1j)
    assert IntegrandKind("left").gauss_sign == -1.0
    with pytest.raises(DomainError):
        IntegrandKind("middle")


def test_overflow_far_out():
    # exp(pi r^2) growth along the wrong direction
    with pytest.raises(OverflowError):
        integrand_left(20 * cmath.exp(0.25j * PI), 0.5)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-8, 1e-5), st.floats(-3.1, 3.1), strip)
def test_left_right_moduli_at_wedge_scale(r, th, z):
    # near the origin the Gaussians are 1 to O(r^2) and the powers have equal moduli
    w = r * cmath.exp(1j * th)
    assert abs(integrand_left(w, z)) / abs(integrand_right(w, 1 - z)) == pytest.approx(1.0, abs=1e-9)
