"""Left and right integrands of the contour form of the completed zeta function.

    left:   w**(-z)    * exp(-i pi w**2) / (exp(i pi w) - exp(-i pi w))
    right:  w**(z - 1) * exp(+i pi w**2) / (exp(i pi w) - exp(-i pi w))

Powers use the principal branch, Arg w in (-pi, pi]. The denominator is
evaluated as 2i sin(pi w), which has no cancellation near w = 0. Far from the
real axis the dominant exponential exp(pi |Im w|) is factored out and folded
into a single exponent together with the power and Gaussian factors, so
intermediate results never overflow. A combined magnitude above exp(700)
raises OverflowError instead of returning inf.

All functions accept a Python complex or a numpy array of complex points.
``numpy.clongdouble`` input is evaluated, and returned, in extended precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import mpmath
import numpy as np

from .errors import DomainError, PoleError

PI = math.pi
PI_LD = np.longdouble("3.14159265358979323846264338327950288")
MAX_LOG_MAGNITUDE = 700.0
# beyond this |Im w| the exp(pi |Im w|) scale of the sine is factored out
_SCALE_IM = 20.0


@dataclass(frozen=True)
class IntegrandKind:
    """Which side of the contour form; fixes exponent and Gaussian sign together."""

    side: Literal["left", "right"]

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise DomainError(f"side must be 'left' or 'right', got {self.side!r}")

    def exponent(self, z: complex) -> complex:
        return -z if self.side == "left" else z - 1.0

    @property
    def gauss_sign(self) -> float:
        return -1.0 if self.side == "left" else 1.0


def _pi_for(a: np.ndarray):
    return PI_LD if a.dtype in (np.longdouble, np.clongdouble) else PI


def _as_points(w) -> np.ndarray:
    arr = np.asarray(w)
    if arr.dtype == np.clongdouble or arr.dtype == np.longdouble:
        return arr.astype(np.clongdouble)
    return arr.astype(complex)


def _sinpi_cospi(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # reduce to |r| <= 1/4 so integers give exact zeros of the sine
    n = np.rint(2.0 * x)
    r = _pi_for(x) * (x - 0.5 * n)
    s, c = np.sin(r), np.cos(r)
    q = np.mod(n, 4.0).astype(np.int64)
    sx = np.choose(q, [s, c, -s, -c])
    cx = np.choose(q, [c, -s, -c, s])
    return sx, cx


def _scaled_denominator(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (d, L) with 2i sin(pi w) == d * exp(L), L >= 0 real."""
    x, y = w.real, w.imag
    sx, cx = _sinpi_cospi(x)
    py = _pi_for(y) * y
    big = np.abs(y) > _SCALE_IM
    with np.errstate(over="ignore"):
        ch = np.where(big, 0.5 * (1.0 + np.exp(-2.0 * np.abs(py))), np.cosh(py))
        sh = np.where(
            big,
            np.sign(py) * 0.5 * (1.0 - np.exp(-2.0 * np.abs(py))),
            np.sinh(py),
        )
    L = np.where(big, np.abs(py), 0.0)
    sin_val = sx * ch + 1j * (cx * sh)
    return 2j * sin_val, L


def sin_denominator(w):
    """exp(i pi w) - exp(-i pi w), computed as 2i sin(pi w).

    Exactly zero at integer w. Raises OverflowError if |result| exceeds exp(700).
    """
    arr = _as_points(w)
    d, L = _scaled_denominator(arr)
    if np.any(L > MAX_LOG_MAGNITUDE):
        raise OverflowError("sin denominator exceeds exp(700)")
    out = d * np.exp(L)
    if np.ndim(w) == 0:
        return complex(out)
    return out


def _principal_log(w: np.ndarray) -> np.ndarray:
    mod = np.abs(w)
    arg = np.arctan2(w.imag, w.real)
    # arctan2(-0.0, x<0) gives -pi; the principal branch closes at +pi
    pi = _pi_for(arg)
    arg = np.where(arg == -pi, pi, arg)
    return np.log(mod) + 1j * arg


def principal_power(w, v):
    """w**v = exp(v (ln|w| + i Arg w)) with Arg w in (-pi, pi]."""
    arr = _as_points(w)
    if np.any(arr == 0):
        raise DomainError("principal_power is undefined at w = 0")
    e = v * _principal_log(arr)
    if np.any(e.real > MAX_LOG_MAGNITUDE):
        raise OverflowError("principal power exceeds exp(700)")
    out = np.exp(e)
    if np.ndim(w) == 0 and np.ndim(v) == 0:
        return complex(out)
    return out


def _check_poles(w: np.ndarray) -> None:
    on_axis = w.imag == 0.0
    if np.any(on_axis & (w.real == np.rint(w.real))):
        raise PoleError("integrand has a pole at integer w (including w = 0)")


def _integrand(w, z, kind: IntegrandKind):
    return BoundIntegrand(kind, kind.exponent(np.clongdouble(z)))(w)


LEFT = IntegrandKind("left")
RIGHT = IntegrandKind("right")


def integrand_left(w, z):
    """w**(-z) exp(-i pi w**2) / (2i sin(pi w)); PoleError at integers."""
    return _integrand(w, z, LEFT)


def integrand_right(w, z):
    """w**(z-1) exp(i pi w**2) / (2i sin(pi w)); PoleError at integers."""
    return _integrand(w, z, RIGHT)


def mp_exact(x) -> "mpmath.mpf":
    num, den = np.longdouble(x).as_integer_ratio()
    return mpmath.mpf(num) / den


@dataclass(frozen=True)
class BoundIntegrand:
    """Integrand of one side with the power ``v`` and Gaussian sign fixed.

    Calling it evaluates ``w**v exp(+-i pi w**2) / (2i sin pi w)``. For heavy
    cancellation the contour code instead uses ``scaled``: with
    ``dlog = Log w - log_ref`` supplied by the caller it returns the
    integrand divided by ``exp(v * log_ref)``, so the large common factor
    is rounded once rather than at every node.
    """

    kind: IntegrandKind
    v: complex

    def __call__(self, w):
        arr = _as_points(w)
        _check_poles(arr)
        v = np.asarray(self.v, dtype=arr.dtype)
        return self._finish(w, arr, v * _principal_log(arr))

    def scaled(self, w, dlog):
        arr = _as_points(w)
        _check_poles(arr)
        dl = np.asarray(dlog, dtype=arr.dtype)
        return self._finish(w, arr, np.asarray(self.v, dtype=arr.dtype) * dl)

    def scale(self, log_ref) -> np.clongdouble:
        """exp(v * log_ref) at extended precision."""
        return np.exp(np.clongdouble(self.v) * np.clongdouble(log_ref))

    def power_ratio(self, p: complex, ref: complex) -> np.clongdouble:
        """exp(v * (Log p - Log ref)) correctly rounded to extended precision.

        The exponent can reach tens in magnitude, where a long double product
        already loses several units in the last place; it is formed at 30
        digits from the exact binary values of p, ref and v instead.
        """
        with mpmath.workdps(30):
            v = mpmath.mpc(mp_exact(np.real(self.v)), mp_exact(np.imag(self.v)))
            val = mpmath.exp(v * (mpmath.log(mpmath.mpc(p)) - mpmath.log(mpmath.mpc(ref))))
            return np.clongdouble(np.longdouble(mpmath.nstr(val.real, 25))
                                  + 1j * np.longdouble(mpmath.nstr(val.imag, 25)))

    def mp(self, w):
        """The integrand at an mpmath point, at the working mpmath precision."""
        v = mpmath.mpc(mp_exact(np.real(self.v)), mp_exact(np.imag(self.v)))
        expo = v * mpmath.log(w) + self.kind.gauss_sign * 1j * mpmath.pi * w * w
        return mpmath.exp(expo) / (2j * mpmath.sinpi(w))

    def _finish(self, w, arr, power_log):
        d, L = _scaled_denominator(arr)
        gauss = self.kind.gauss_sign * 1j * _pi_for(arr) * arr * arr
        expo = power_log + gauss - L
        if np.any(expo.real > MAX_LOG_MAGNITUDE):
            raise OverflowError("integrand magnitude exceeds exp(700)")
        out = np.exp(expo) / d
        if np.ndim(w) == 0:
            return complex(out)
        return out


def integrand_for(side: str, z: complex, exponent_side: str | None = None) -> BoundIntegrand:
    """Vectorised integrand on the ``side`` contour with z bound.

    ``exponent_side`` lets the convention audit pair the ``side`` Gaussian
    with the other side's power of w; by default they match.
    """
    gauss = IntegrandKind(side)
    power = IntegrandKind(exponent_side or side)
    # exponent formed at extended precision: z - 1 is not exact in double
    return BoundIntegrand(gauss, power.exponent(np.clongdouble(z)))
