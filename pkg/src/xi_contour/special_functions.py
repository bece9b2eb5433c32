"""Reference Gamma, zeta and completed zeta in double precision.

These are the independent oracle for the contour evaluator: nothing here
touches contours or quadrature.

* ``gamma``: Lanczos approximation (g = 7, 9 coefficients) with the
  reflection formula for Re z < 1/2.
* ``zeta_reference``: Borwein's accelerated alternating series for the
  Dirichlet eta function, divided by (1 - 2**(1-z)).
* ``completed_zeta_direct``: pi**(-z/2) * Gamma(z/2) * zeta(z) on the
  critical strip.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, PoleError

POLE_TOL = 1e-12

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Borwein truncation: |error| <~ 3 (1 + 2|t|) exp(pi |t| / 2) / (3 + sqrt 8)**n
_BORWEIN_MIN_TERMS = 50
_BORWEIN_RATE = math.log(3.0 + math.sqrt(8.0))
_TARGET_LOG_ERR = 17.0 * math.log(10.0)


@dataclass(frozen=True)
class EvalAccuracy:
    abs_err_estimate: float
    terms_used: int

    def __post_init__(self):
        if not self.abs_err_estimate >= 0.0:
            raise ValueError("abs_err_estimate must be non-negative")


def as_complex(z) -> complex:
    """Coerce ``z`` to a finite Python complex or raise DomainError."""
    try:
        c = complex(z)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not a complex number: {z!r}") from exc
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise DomainError(f"non-finite complex value: {c!r}")
    return c


def _finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"{what} is not representable in double precision")
    return value


def sinpi(z: complex) -> complex:
    """sin(pi z), exactly zero at integers, no large-argument reduction loss."""
    x, y = z.real, z.imag
    n = round(2.0 * x)
    r = math.pi * (x - 0.5 * n)
    s, c = math.sin(r), math.cos(r)
    q = int(n) % 4
    if q == 0:
        sx, cx = s, c
    elif q == 1:
        sx, cx = c, -s
    elif q == 2:
        sx, cx = -s, -c
    else:
        sx, cx = -c, s
    py = math.pi * y
    return complex(sx * math.cosh(py), cx * math.sinh(py))


def _nearest_nonpositive_integer(z: complex) -> float | None:
    if z.real > 0.5:
        return None
    k = round(z.real)
    if k > 0:
        return None
    return float(k)


def log_gamma_lanczos(z: complex) -> complex:
    """log Gamma(z) for Re z >= 1/2 (not the principal loggamma branch)."""
    z = z - 1.0
    acc = complex(_LANCZOS_COEF[0])
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma(z) -> complex:
    """Gamma function on the complex plane minus the poles.

    Relative error is around 1e-14 for 0 < Re z <= 10, |Im z| <= 100.
    Raises PoleError within 1e-12 of a non-positive integer.
    """
    z = as_complex(z)
    k = _nearest_nonpositive_integer(z)
    if k is not None and abs(z - k) <= POLE_TOL:
        raise PoleError(f"Gamma has a pole at z = {k:g}")
    if z.real < 0.5:
        # Gamma(z) Gamma(1-z) = pi / sin(pi z)
        s = sinpi(z)
        lg = log_gamma_lanczos(1.0 - z)
        return _finite(math.pi / (s * cmath.exp(lg)), "Gamma(z)")
    try:
        return _finite(cmath.exp(log_gamma_lanczos(z)), "Gamma(z)")
    except OverflowError as exc:
        raise OverflowError(f"Gamma({z}) overflows double precision") from exc


@lru_cache(maxsize=64)
def _borwein_weights(n: int) -> np.ndarray:
    """Alternating weights (-1)**k (d_k - d_n) / d_n, k = 0..n-1."""
    d = np.empty(n + 1)
    term = 1.0
    total = 1.0
    d[0] = 1.0
    for i in range(n):
        term *= 2.0 * (n + i) * (n - i) / ((i + 1) * (2.0 * i + 1.0))
        total += term
        d[i + 1] = total
    k = np.arange(n)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return sign * (d[:n] - d[n]) / d[n]


def borwein_terms(t: float) -> int:
    """Number of Borwein terms for ~1e-17 truncation error at height ``t``."""
    t = abs(t)
    need = _TARGET_LOG_ERR + 0.5 * math.pi * t + math.log(3.0 * (1.0 + 2.0 * t))
    return max(_BORWEIN_MIN_TERMS, math.ceil(need / _BORWEIN_RATE))


def eta_borwein(s: complex, n: int | None = None) -> tuple[complex, EvalAccuracy]:
    if n is None:
        n = borwein_terms(s.imag)
    w = _borwein_weights(n)
    logk = np.log(np.arange(1, n + 1, dtype=float))
    terms = w * np.exp(-s * logk)
    eta = -complex(np.sum(terms))
    # rounding in the weighted sum plus the truncation bound
    roundoff = 8.0 * np.finfo(float).eps * float(np.sum(np.abs(terms)))
    trunc = 3.0 * (1.0 + 2.0 * abs(s.imag)) * math.exp(
        0.5 * math.pi * abs(s.imag) - n * _BORWEIN_RATE
    )
    return eta, EvalAccuracy(roundoff + trunc, n)


def zeta_with_accuracy(z) -> tuple[complex, EvalAccuracy]:
    z = as_complex(z)
    if abs(z - 1.0) <= POLE_TOL:
        raise PoleError("zeta has a pole at z = 1")
    if z.real <= 0.0:
        raise DomainError(f"zeta_reference needs Re z > 0, got {z}")
    factor = 1.0 - cmath.exp((1.0 - z) * math.log(2.0))
    if abs(factor) < 1e-10:
        raise DomainError(
            f"z = {z} sits on a zero of 1 - 2**(1-z); the eta relation is 0/0 there"
        )
    eta, acc = eta_borwein(z)
    value = _finite(eta / factor, "zeta(z)")
    return value, EvalAccuracy(acc.abs_err_estimate / abs(factor), acc.terms_used)


def zeta_reference(z) -> complex:
    """Riemann zeta for Re z > 0, z != 1 via the accelerated eta series."""
    return zeta_with_accuracy(z)[0]


def xi_prefactor(s) -> complex:
    """pi**(-s/2) * Gamma(s/2)."""
    s = as_complex(s)
    return cmath.exp(-0.5 * s * math.log(math.pi)) * gamma(0.5 * s)


def in_strip(z: complex) -> bool:
    return 0.0 < z.real < 1.0


def completed_zeta_direct(z) -> complex:
    """pi**(-z/2) Gamma(z/2) zeta(z) for 0 < Re z < 1."""
    z = as_complex(z)
    if not in_strip(z):
        raise DomainError(f"completed_zeta_direct needs 0 < Re z < 1, got {z}")
    return xi_prefactor(z) * zeta_reference(z)
