"""Numerical experiments on the contour form.

* per-segment magnitudes with the ray tail bound
* power-law scaling of the arc and wedge integrals as r1 -> 0
* exponential decay of the integrand along the four rays
* independence of the result from the radii
* zeros of the completed zeta function on the critical line, each one
  checked by the contour evaluator for cancellation of the two halves
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .contour_geometry import RadiiConfig, make_radii, segment_labels
from .errors import DomainError, FitError, RealnessViolation
from .integrand import integrand_for
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .special_functions import as_complex, completed_zeta_direct, in_strip
from .zeta_contour import (
    DEFAULT_RADII,
    SCHEMA_VERSION,
    ContourEvaluation,
    completed_zeta_contour,
    default_radii,
    side_integrals,
)

PI = math.pi
SIDES = ("left", "right")

DEFAULT_SWEEP = tuple(float(x) for x in np.logspace(-5, -2, 13))
MIN_R_SQUARED = 0.99
CONFIRM_RATIO = 1e-6
REALNESS_TOL = 1e-9
ZERO_T_TOL = 1e-8

# (ray angle, position in path) for the ray segments of each side
_RAYS = {
    "left": ((0, 0.75 * PI), (6, -0.25 * PI)),
    "right": ((0, 0.25 * PI), (6, -0.75 * PI)),
}


def _thread_count() -> int:
    raw = os.environ.get("XI_CONTOUR_THREADS", "").strip()
    if not raw or raw == "0":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise DomainError(f"XI_CONTOUR_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise DomainError("XI_CONTOUR_THREADS must be >= 0")
    return n


def parallel_map(fn: Callable, items: Iterable) -> list:
    """Map ``fn`` over ``items`` on a thread pool, results in input order.

    XI_CONTOUR_THREADS sets the pool size (unset or 0 means one per CPU).
    """
    items = list(items)
    n = min(_thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _side_exponent(z: complex, side: str) -> complex:
    return -z if side == "left" else z - 1.0


def _check_side(side: str) -> str:
    if side not in SIDES:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    return side


def _strip_point(z) -> complex:
    z = as_complex(z)
    if not in_strip(z):
        raise DomainError(f"need 0 < Re z < 1, got {z}")
    return z


# ---------------------------------------------------------------------------
# segment magnitudes


@dataclass(frozen=True)
class SegmentMagnitude:
    side: str
    label: str
    magnitude: float
    # ray tail bound, only for the two rays of each side
    bound: float | None = None

    @property
    def within_bound(self) -> bool | None:
        return None if self.bound is None else self.magnitude <= self.bound

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "label": self.label,
            "magnitude": self.magnitude,
            "bound": self.bound,
        }


def ray_tail_bound(v: complex, theta: float, r_M: float) -> float:
    """exp(-v_I theta) r_M**v_R / (pi |sin theta|) for the integral beyond r_M."""
    return math.exp(-v.imag * theta) * r_M ** v.real / (PI * abs(math.sin(theta)))


def segment_magnitude_table(z, radii: RadiiConfig = DEFAULT_RADII,
                            cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> list[SegmentMagnitude]:
    """|integral| over each of the 14 segments, without prefactors."""
    z = _strip_point(z)
    rows = []
    for side in SIDES:
        v = _side_exponent(z, side)
        bounds = {segment_labels(side)[i]: ray_tail_bound(v, th, radii.r_M)
                  for i, th in _RAYS[side]}
        for label, seg in side_integrals(z, side, radii, cfg):
            rows.append(SegmentMagnitude(side, label, abs(seg.value), bounds.get(label)))
    return rows


# ---------------------------------------------------------------------------
# scaling fits


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    r_squared: float
    sweep: tuple[tuple[float, float], ...]
    side: str = "left"
    z: complex = 0.5 + 3j
    segments: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.sweep) < 4:
            raise DomainError("a scaling sweep needs at least 4 points")
        rs = [r for r, _ in self.sweep]
        if math.log10(max(rs) / min(rs)) < 2.0 - 1e-9:
            raise DomainError("a scaling sweep must span at least 2 decades")
        if not 0.0 <= self.r_squared <= 1.0:
            raise DomainError(f"r_squared out of range: {self.r_squared}")

    def expected_slope(self) -> float:
        return _side_exponent(self.z, self.side).real

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "z": {"re": self.z.real, "im": self.z.imag},
            "segments": list(self.segments),
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "sweep": [[r, m] for r, m in self.sweep],
        }


def loglog_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares line through (log x, log y): (slope, intercept, r^2)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        lx = np.log(np.asarray(xs, dtype=float))
        ly = np.log(np.asarray(ys, dtype=float))
    if not (np.all(np.isfinite(lx)) and np.all(np.isfinite(ly))):
        raise DomainError("log-log fit needs positive finite data")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), min(max(r2, 0.0), 1.0)


def _sweep_radii(r1: float, base: RadiiConfig) -> RadiiConfig:
    return make_radii(r1, base.r_m, base.r_M, base.ray_cut)


def _check_sweep(sweep: Sequence[float], base: RadiiConfig) -> list[float]:
    sweep = sorted(float(r) for r in sweep)
    if len(sweep) < 4:
        raise DomainError("sweep needs at least 4 values of r1")
    if sweep[0] <= 0 or math.log10(sweep[-1] / sweep[0]) < 2.0 - 1e-9:
        raise DomainError("sweep must be positive and span at least 2 decades")
    if sweep[-1] > base.r_m / 10.0:
        raise DomainError(f"sweep values must be <= r_m/10 = {base.r_m / 10.0}")
    return sweep


def _scaling_fit(z, sweep, side, cfg, base, labels_for) -> ScalingFit:
    z = _strip_point(z)
    side = _check_side(side)
    sweep = _check_sweep(sweep, base)
    labels = labels_for(side)
    p = _side_exponent(z, side).real

    def magnitude(r1: float) -> float:
        # keep the absolute tolerance relative to the growing integral
        c = replace(cfg, abs_tol=cfg.abs_tol * max(1.0, r1 ** p))
        segs = side_integrals(z, side, _sweep_radii(r1, base), c, labels=labels)
        return float(abs(sum((s.extended_value for _, s in segs), np.clongdouble(0))))

    mags = parallel_map(magnitude, sweep)
    slope, intercept, r2 = loglog_fit(sweep, mags)
    fit = ScalingFit(slope, intercept, r2, tuple(zip(sweep, mags)), side, z, tuple(labels))
    if r2 < MIN_R_SQUARED:
        raise FitError(f"log-log fit has r_squared={r2:.4f} < {MIN_R_SQUARED}", fit=fit)
    return fit


def _arc_labels(side: str) -> tuple[str, ...]:
    return (segment_labels(side)[3],)


def _wedge_labels(which: str) -> Callable[[str], tuple[str, ...]]:
    if which not in ("joint", "p", "n"):
        raise DomainError(f"wedge selection must be 'joint', 'p' or 'n', got {which!r}")

    def labels(side: str) -> tuple[str, ...]:
        lab = segment_labels(side)
        return {"joint": (lab[2], lab[4]), "p": (lab[2],), "n": (lab[4],)}[which]

    return labels


def arc_scaling_fit(z, r1_sweep: Sequence[float] = DEFAULT_SWEEP, side: str = "left",
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                    base: RadiiConfig = DEFAULT_RADII) -> ScalingFit:
    """Fit log|arc integral| against log r1; the slope should be v_R of the side."""
    return _scaling_fit(z, r1_sweep, side, cfg, base, _arc_labels)


def wedge_scaling_fit(z, r1_sweep: Sequence[float] = DEFAULT_SWEEP, side: str = "left",
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                      base: RadiiConfig = DEFAULT_RADII,
                      which: str = "joint") -> ScalingFit:
    """Same as ``arc_scaling_fit`` for the straight pieces between r1 and r_m.

    ``which="joint"`` fits the sum of the two wedge pieces; "p" and "n" fit
    the incoming or outgoing piece alone.
    """
    return _scaling_fit(z, r1_sweep, side, cfg, base, _wedge_labels(which))


# ---------------------------------------------------------------------------
# ray decay


@dataclass(frozen=True)
class RayDecayFit:
    side: str
    theta: float
    rate: float
    naive_rate: float
    expected_rate: float
    r_squared: float

    @property
    def relative_error(self) -> float:
        return abs(self.rate - self.expected_rate) / self.expected_rate

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "theta": self.theta,
            "rate": self.rate,
            "naive_rate": self.naive_rate,
            "expected_rate": self.expected_rate,
            "r_squared": self.r_squared,
        }


def ray_decay_fit(z, side: str, theta: float, r_lo: float = 5.0, r_hi: float = 12.0,
                  n: int = 41) -> RayDecayFit:
    """Exponential decay rate of the integrand along the ray at angle ``theta``.

    On the rays the modulus is |w|**v_R exp(-v_I theta) exp(-pi |w|^2 |sin 2theta|)
    times 1/|2 sin pi w| ~ exp(-pi |w| |sin theta|). The power and Gaussian
    factors are divided out and ``rate`` is the slope of what remains against
    |w|. ``naive_rate`` is the slope of log|f| itself, dominated by the Gaussian.
    """
    z = _strip_point(z)
    side = _check_side(side)
    if not 0 < r_lo < r_hi:
        raise DomainError("need 0 < r_lo < r_hi")
    if abs(math.sin(theta)) < 1e-12:
        raise DomainError("ray must leave the real axis")
    v = _side_exponent(z, side)
    r = np.linspace(r_lo, r_hi, n)
    w = r * np.exp(1j * theta)
    log_f = np.log(np.abs(integrand_for(side, z)(w)))
    y = log_f - v.real * np.log(r) + v.imag * theta + PI * r ** 2 * abs(math.sin(2 * theta))
    slope, _ = np.polyfit(r, y, 1)
    resid = y - np.polyval(np.polyfit(r, y, 1), r)
    ss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss if ss > 0 else 1.0
    naive, _ = np.polyfit(r, log_f, 1)
    return RayDecayFit(side, float(theta), float(-slope), float(-naive),
                       PI * abs(math.sin(theta)), min(max(r2, 0.0), 1.0))


def ray_angles() -> list[tuple[str, float]]:
    return [(side, th) for side in SIDES for _, th in _RAYS[side]]


# ---------------------------------------------------------------------------
# radii invariance


def invariance_configs(cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> list[RadiiConfig]:
    """Four radii settings varying r1, r_m and r_M."""
    return [
        default_radii(1e-3, 0.1, 3.0, cfg=cfg),
        default_radii(1e-4, 0.25, 6.0, cfg=cfg),
        default_radii(1e-3, 0.25, 6.0, cfg=cfg),
        default_radii(1e-4, 0.1, 3.0, cfg=cfg),
    ]


def contour_invariance_check(z, configs: Sequence[RadiiConfig],
                             cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Largest pairwise |xi_total| difference over the radii settings."""
    z = _strip_point(z)
    configs = list(configs)
    if len(configs) < 2:
        raise DomainError("contour_invariance_check needs at least 2 radii configs")
    vals = parallel_map(lambda rc: completed_zeta_contour(z, rc, cfg).xi_total, configs)
    return max(abs(a - b) for a in vals for b in vals)


# ---------------------------------------------------------------------------
# cancellation and zeros


def resolved_contour(z, radii: RadiiConfig = DEFAULT_RADII,
                     cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                     target: float = CONFIRM_RATIO) -> ContourEvaluation:
    """Contour evaluation accurate enough to show cancellation to ``target``.

    The error budget is a tenth of ``target * max(|xi_left|, |xi_right|)``,
    or the usual budget if that is tighter.
    """
    z = _strip_point(z)
    ev = completed_zeta_contour(z, radii, cfg)
    scale = max(abs(ev.xi_left), abs(ev.xi_right))
    budget = max(cfg.abs_tol, cfg.rel_tol * abs(ev.xi_total))
    want = 0.1 * target * scale
    if 0 < want < budget:
        ev = completed_zeta_contour(z, radii, cfg, target_error=want)
    return ev


@dataclass(frozen=True)
class CancellationReport:
    z: complex
    xi_left_abs: float
    xi_right_abs: float
    xi_total_abs: float
    ratio: float

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "z": {"re": self.z.real, "im": self.z.imag},
            "xi_left_abs": self.xi_left_abs,
            "xi_right_abs": self.xi_right_abs,
            "xi_total_abs": self.xi_total_abs,
            "ratio": self.ratio,
        }


def cancellation_report(z0, radii: RadiiConfig = DEFAULT_RADII,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> CancellationReport:
    """How completely xi_left and xi_right cancel at ``z0``."""
    ev = resolved_contour(z0, radii, cfg)
    big = max(abs(ev.xi_left), abs(ev.xi_right))
    ratio = abs(ev.xi_total) / big if big > 0 else math.inf
    return CancellationReport(ev.z, abs(ev.xi_left), abs(ev.xi_right), abs(ev.xi_total), ratio)


@dataclass(frozen=True)
class ZeroRecord:
    t: float
    residual: float
    bracket: tuple[float, float]
    contour_ratio: float = math.nan
    contour_abs: float = math.nan

    def __post_init__(self):
        lo, hi = self.bracket
        if not lo <= self.t <= hi:
            raise DomainError(f"zero t={self.t} outside its bracket {self.bracket}")

    @property
    def confirmed(self) -> bool:
        return self.contour_ratio <= CONFIRM_RATIO

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "residual": self.residual,
            "bracket": list(self.bracket),
            "contour_ratio": self.contour_ratio,
            "contour_abs": self.contour_abs,
            "confirmed": self.confirmed,
        }


def _critical_value(t: float) -> float:
    val = completed_zeta_direct(complex(0.5, t))
    if abs(val.imag) > REALNESS_TOL * (1.0 + abs(val)):
        raise RealnessViolation(
            f"xi(1/2 + {t}i) = {val} is not real to {REALNESS_TOL:g}"
        )
    return val.real


def find_critical_zeros(t_min: float, t_max: float, step: float = 0.1,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                        radii: RadiiConfig = DEFAULT_RADII,
                        confirm: bool = True) -> list[ZeroRecord]:
    """Zeros of xi(1/2 + it) for t in [t_min, t_max].

    Sign changes of the (real) direct value on a grid of spacing ``step``
    are refined to |dt| <= 1e-8; each root is then evaluated with the
    contour form and the cancellation ratio is recorded.
    """
    if not (math.isfinite(t_min) and math.isfinite(t_max) and 0 < t_min < t_max):
        raise DomainError(f"need 0 < t_min < t_max, got [{t_min}, {t_max}]")
    if not (math.isfinite(step) and step > 0):
        raise DomainError(f"step must be positive, got {step}")
    n = max(1, math.ceil((t_max - t_min) / step))
    ts = np.linspace(t_min, t_max, n + 1)
    vals = [_critical_value(float(t)) for t in ts]
    brackets = []
    for a, b, fa, fb in zip(ts, ts[1:], vals, vals[1:]):
        if fa == 0.0:
            brackets.append((float(a), float(a)))
        elif fa * fb < 0:
            brackets.append((float(a), float(b)))
    if vals[-1] == 0.0:
        brackets.append((float(ts[-1]), float(ts[-1])))

    def refine(br):
        a, b = br
        t = a if a == b else brentq(_critical_value, a, b, xtol=ZERO_T_TOL / 100, rtol=4 * np.finfo(float).eps)
        residual = abs(completed_zeta_direct(complex(0.5, t)))
        if not confirm:
            return ZeroRecord(t, residual, (a, b))
        rep = cancellation_report(complex(0.5, t), radii, cfg)
        return ZeroRecord(t, residual, (a, b), rep.ratio, rep.xi_total_abs)

    return parallel_map(refine, brackets)
