"""Adaptive Gauss-Kronrod integration along contour segments.

Each panel uses the 15-point Kronrod rule with its embedded 7-point Gauss
rule; |K15 - G7| (with a round-off floor) is the panel error estimate.
Nodes, weights, contour points and integrand values are carried in numpy's
extended ``longdouble``: near the central arc the segment integrals are
many orders of magnitude larger than their sum, and the extra bits keep
that cancellation from eating the result.

Panels are bisected breadth first, all panels of a level being evaluated in
a single vectorised call of the integrand. A panel is accepted once its
error is below its width-share of the global tolerance
``max(abs_tol, rel_tol * |value|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .contour_geometry import (
    ContourSegment,
    Line,
    parameterize_from_end,
    parameterize_segment,
)
from .errors import ConvergenceError, DomainError

def _ld(text: str) -> np.ndarray:
    # parse from decimal strings so the tables keep extended precision
    return np.array([np.longdouble(x) for x in text.split()])


# Kronrod 15-point abscissae on [-1, 1] (non-negative half) and weights.
_XGK = _ld("""
    0.991455371120812639206854697526329
    0.949107912342758524526189684047851
    0.864864423359769072789712788640926
    0.741531185599394439863864773280788
    0.586087235467691130294144845693013
    0.405845151377397166906606412076961
    0.207784955007898467600689403773245
    0.000000000000000000000000000000000
""")
_WGK = _ld("""
    0.022935322010529224963732008058970
    0.063092092629978553290700663189204
    0.104790010322250183839876322541518
    0.140653259715525918745189590510238
    0.169004726639267902826583426598550
    0.190350578064785409913256402421014
    0.204432940075298892414161999234649
    0.209482141084727828012999174891714
""")
# Gauss 7-point weights; the Gauss nodes are _XGK[1::2].
_WG = _ld("""
    0.129484966168869693270611432679082
    0.279705391489276667901467771423780
    0.381830050505118944950369775488975
    0.417959183673469387755102040816327
""")

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes ascending
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15, dtype=np.longdouble)
_WG15[1:7:2] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[9:15:2] = _WG[:3][::-1]

_EPS = float(np.finfo(np.longdouble).eps)
_EPS_DOUBLE = float(np.finfo(float).eps)
_MAX_PANELS = 200_000


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_depth: int = 40
    tail_eps: float = 1e-15

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "tail_eps"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if not 10 <= self.max_depth <= 60:
            raise DomainError(f"max_depth must be in [10, 60], got {self.max_depth!r}")

    def to_dict(self) -> dict:
        return {
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "max_depth": self.max_depth,
            "tail_eps": self.tail_eps,
        }


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class SegmentIntegral:
    value: complex
    err_estimate: float
    subdivisions: int
    # the same value before rounding to double
    value_ext: np.clongdouble | None = field(default=None, compare=False, repr=False)

    @property
    def extended_value(self):
        return self.value_ext if self.value_ext is not None else np.clongdouble(self.value)

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "err_estimate": self.err_estimate,
            "subdivisions": self.subdivisions,
        }


def _gk15(g: Callable, a: np.ndarray, b: np.ndarray):
    """Apply G7/K15 to panels [a_i, b_i] of a function of the real parameter."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    t = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(g(t))
    eps = _EPS if vals.dtype in (np.longdouble, np.clongdouble) else _EPS_DOUBLE
    k = half * (vals @ _WK)
    gs = half * (vals @ _WG15)
    resabs = np.abs(half) * (np.abs(vals) @ _WK)
    raw = np.abs(k - gs)
    floor = 50.0 * eps * resabs
    # a panel at the round-off floor cannot be improved by splitting it
    return k, np.maximum(raw, floor), raw <= floor


def _adaptive(pieces, cfg: QuadratureConfig, scale=1) -> SegmentIntegral:
    """Jointly adaptive integration of several (g, a, b) pieces.

    The tolerance applies to the sum over all pieces and is shared out in
    proportion to panel width. The pieces return values divided by
    ``scale``; the result and its error estimate are in true units.
    """
    scale = np.clongdouble(scale)
    mag = float(abs(scale))
    if not (math.isfinite(mag) and mag > 0):
        raise ConvergenceError(f"unusable integrand scale {scale!r}")
    abs_tol = max(cfg.abs_tol / mag, 1e-300)
    width = float(sum(b - a for _, a, b in pieces))
    lo = np.array([a for _, a, _ in pieces], dtype=np.longdouble)
    hi = np.array([b for _, _, b in pieces], dtype=np.longdouble)
    pid = np.arange(len(pieces))
    depth = 0
    done_val = np.clongdouble(0)
    done_err = 0.0
    splits = 0
    while True:
        k = np.empty(lo.size, dtype=np.clongdouble)
        err = np.empty(lo.size)
        at_floor = np.empty(lo.size, dtype=bool)
        for i, (g, _, _) in enumerate(pieces):
            m = pid == i
            if m.any():
                k[m], err[m], at_floor[m] = _gk15(g, lo[m], hi[m])
        if not (np.all(np.isfinite(k)) and np.all(np.isfinite(err))):
            raise ConvergenceError("integrand produced non-finite values")
        estimate = done_val + k.sum()
        tol = max(abs_tol, cfg.rel_tol * float(abs(estimate)))
        ok = (err <= tol * (hi - lo).astype(float) / width) | at_floor
        done_val += k[ok].sum()
        done_err += err[ok].sum()
        if ok.all():
            break
        if depth == cfg.max_depth:
            value = done_val + k[~ok].sum()
            total_err = done_err + err[~ok].sum()
            if total_err <= max(abs_tol, cfg.rel_tol * float(abs(value))):
                return _result(value * scale, total_err * mag, splits)
            raise ConvergenceError(
                f"max_depth={cfg.max_depth} reached with error estimate "
                f"{total_err * mag:.3g} above tolerance",
                value=complex(value * scale),
                err_estimate=float(total_err * mag),
            )
        lo, hi, pid = lo[~ok], hi[~ok], pid[~ok]
        if 2 * lo.size > _MAX_PANELS:
            raise ConvergenceError(
                f"more than {_MAX_PANELS} active panels; integrand is not resolvable",
                value=complex((done_val + k[~ok].sum()) * scale),
                err_estimate=float((done_err + err[~ok].sum()) * mag),
            )
        mid = 0.5 * (lo + hi)
        splits += lo.size
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        pid = np.concatenate([pid, pid])
        depth += 1
    return _result(done_val * scale, done_err * mag, splits)


def _result(value, err, splits) -> SegmentIntegral:
    value = np.clongdouble(value)
    return SegmentIntegral(complex(value), float(err), int(splits), value)


def integrate_parametric(g: Callable, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                         a: float = 0.0, b: float = 1.0) -> SegmentIntegral:
    """Integrate a vectorised complex function of a real variable over [a, b]."""
    return _adaptive([(g, a, b)], cfg)


def integrate_segment(f: Callable, seg: ContourSegment,
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> SegmentIntegral:
    """Integral of ``f(w) dw`` along ``seg``.

    ``f`` must accept a numpy array of complex points. The second half of
    the segment is parameterised from its far end so that points close to
    either endpoint keep full relative precision.
    """

    def forward(t):
        w, dw = parameterize_segment(seg, t)
        return f(w) * dw

    def backward(u):
        w, dw = parameterize_from_end(seg, u)
        return f(w) * dw

    return integrate_two_sided(forward, backward, cfg)


def integrate_two_sided(forward: Callable, backward: Callable,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                        scale=1) -> SegmentIntegral:
    """Integral over t in [0, 1] given as forward(t) on [0, 1/2] and
    backward(u) = integrand at t = 1 - u on [0, 1/2].

    Both callables may return values divided by a common ``scale``; it is
    multiplied back at extended precision and the absolute tolerance is
    applied in true units.
    """
    return _adaptive([(forward, 0.0, 0.5), (backward, 0.0, 0.5)], cfg, scale)


def integrate_segment_mp(f: Callable, seg: ContourSegment, dps: int):
    """Integral of ``f`` over ``seg`` with mpmath at ``dps`` digits.

    ``f`` takes and returns mpmath numbers. Lines are traced as
    start + t (end - start) and arcs log-polar between their endpoints, the
    same paths as the extended-precision evaluation. Tanh-sinh quadrature
    on both halves; returns (value, error estimate) as mpmath numbers.
    Used only when the extended-precision floor is above the error target.
    """
    import mpmath

    with mpmath.workdps(dps):
        a, b = mpmath.mpc(seg.start_point), mpmath.mpc(seg.end_point)
        if isinstance(seg, Line):
            d = b - a

            def g(t):
                return f(a + t * d) * d
        else:
            la = mpmath.log(a)
            dl = mpmath.log(b) - la

            def g(t):
                w = mpmath.exp(la + t * dl)
                return f(w) * dl * w

        value, err = mpmath.quad(g, [0, 0.5, 1], error=True)
        return +value, +err


def _tail_log(R: float, v_R: float, s: float, tail_eps: float) -> float:
    return v_R * math.log(R) - math.pi * R * s - math.log(math.pi * s) - math.log(tail_eps)


def truncation_radius(v_R: float, theta: float, tail_eps: float) -> float:
    """Smallest R with R**v_R * exp(-pi R |sin theta|) / (pi |sin theta|) < tail_eps.

    For v_R <= 0 the left side is decreasing in R; for v_R > 0 the search
    starts beyond the maximum at R = v_R / (pi |sin theta|).
    """
    s = abs(math.sin(theta))
    if s < 1e-12:
        raise DomainError("truncation_radius needs sin(theta) != 0")
    if not (tail_eps > 0 and math.isfinite(tail_eps)):
        raise DomainError("tail_eps must be positive")
    lo = v_R / (math.pi * s) if v_R > 0 else 1e-300
    if _tail_log(lo, v_R, s, tail_eps) <= 0:
        return lo
    hi = max(2.0 * lo, 1.0)
    while _tail_log(hi, v_R, s, tail_eps) > 0:
        hi *= 2.0
    return brentq(_tail_log, lo, hi, args=(v_R, s, tail_eps), xtol=1e-12, rtol=1e-14)
