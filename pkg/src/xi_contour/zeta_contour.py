"""Completed zeta function from the two deformed contour integrals.

    xi(z) = xi_left(z) + xi_right(z)
    xi_left(z)  = pi**(-z/2)     Gamma(z/2)     * int_{C_l} w**(-z)  e^{-i pi w^2} / (2i sin pi w) dw
    xi_right(z) = pi**(-(1-z)/2) Gamma((1-z)/2) * int_{C_r} w**(z-1) e^{+i pi w^2} / (2i sin pi w) dw

C_l runs from infinity at angle 3pi/4 to infinity at angle -pi/4 passing
right of the origin; C_r from infinity at pi/4 to infinity at -3pi/4.

The pairing of prefactors with powers and the overall orientation were
fixed by ``formula_audit`` against ``completed_zeta_direct``; the audited
choice is hard-coded as ``AUDITED_CONVENTION``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import mpmath
import numpy as np

from .contour_geometry import (
    RadiiConfig,
    arc_reference_logs,
    build_contour,
    make_radii,
    arc_index,
    half_anchor,
    local_point_and_log,
)
from .errors import AuditFailure, DomainError
from .integrand import mp_exact, integrand_for
from .quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    SegmentIntegral,
    integrate_segment_mp,
    integrate_two_sided,
    truncation_radius,
)
from .special_functions import as_complex, completed_zeta_direct, in_strip, xi_prefactor

PI = math.pi
SCHEMA_VERSION = 1
# tightest relative tolerance the cancellation refinement will ask for
REL_TOL_FLOOR = 1e-18
# below this target/gross ratio the long double round-off floor is too
# close, and the dominant segments are redone with mpmath
EXTENDED_RESOLUTION = 1e-17


@dataclass(frozen=True)
class Convention:
    """One way of assembling the two contour integrals.

    prefactor: "z" gives the left integral pi**(-z/2) Gamma(z/2); "1-z" swaps.
    exponent:  "z" gives the left integrand w**(-z); "1-z" gives it w**(z-1).
    orientation: +1 traverses the contours as drawn, -1 reverses both.
    """

    prefactor: str = "z"
    exponent: str = "z"
    orientation: int = 1

    @property
    def id(self) -> str:
        return f"prefactor={self.prefactor},exponent={self.exponent},orientation={self.orientation:+d}"


AUDITED_CONVENTION = Convention("z", "z", 1)

ALL_CONVENTIONS = tuple(
    Convention(p, e, o)
    for p, e, o in itertools.product(("z", "1-z"), ("z", "1-z"), (1, -1))
)


def auto_ray_cut(r_M: float, tail_eps: float) -> float:
    # v_R = 0 bounds every exponent in (-1, 0) once |w| >= 1; all four rays
    # share |sin theta| = sqrt(2)/2
    R = truncation_radius(0.0, PI / 4, tail_eps)
    return max(R, r_M + 1.0)


def default_radii(r1: float = 1e-3, r_m: float = 0.1, r_M: float = 5.0,
                  ray_cut: float | None = None,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> RadiiConfig:
    """Validated radii; ``ray_cut=None`` sizes the rays from ``cfg.tail_eps``."""
    if ray_cut is None:
        ray_cut = auto_ray_cut(r_M, cfg.tail_eps)
    return make_radii(r1, r_m, r_M, ray_cut)


DEFAULT_RADII = default_radii()


def _complex_json(c: complex) -> dict:
    return {"re": c.real, "im": c.imag}


@dataclass(frozen=True)
class ContourEvaluation:
    z: complex
    xi_left: complex
    xi_right: complex
    xi_total: complex
    per_segment: tuple[tuple[str, SegmentIntegral], ...]
    radii: RadiiConfig

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "z": _complex_json(self.z),
            "xi_left": _complex_json(self.xi_left),
            "xi_right": _complex_json(self.xi_right),
            "xi_total": _complex_json(self.xi_total),
            "per_segment": [
                {"label": label, **seg.to_dict()} for label, seg in self.per_segment
            ],
            "radii": self.radii.to_dict(),
        }


def _check_strip(z) -> complex:
    z = as_complex(z)
    if not in_strip(z):
        raise DomainError(f"contour evaluation needs 0 < Re z < 1, got {z}")
    return z


def side_integrals(z: complex, side: str, radii: RadiiConfig,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                   exponent_side: str | None = None,
                   labels=None) -> list[tuple[str, SegmentIntegral]]:
    """Raw integrals (no prefactor) over the segments of one contour.

    ``labels`` restricts the result to the named segments, in path order.
    Each half segment is evaluated as w**v = a**v (w/a)**v with a the point
    it is traced from. (w/a)**v is formed pointwise and stays moderate; the
    ratio a**v / w_ref**v to the arc endpoint w_ref where |w**v| is largest
    is formed once per half at high precision, and the common w_ref**v once
    per segment. The segments next to the arc are far larger than their sum,
    so this keeps the rounding of the large terms well below the result.
    """
    f = integrand_for(side, z, exponent_side)
    path = build_contour(radii, side)
    la, lb = arc_reference_logs(path)
    arc = path.segments[arc_index(path)]
    v = np.clongdouble(f.v)
    if (v * la).real >= (v * lb).real:
        ref_point, log_ref = arc.start_point, la
    else:
        ref_point, log_ref = arc.end_point, lb
    scale = f.scale(log_ref)
    if labels is not None:
        unknown = set(labels) - {seg.label for seg in path}
        if unknown:
            raise DomainError(f"unknown segment labels {sorted(unknown)}")
    out = []
    for seg in path.segments:
        if labels is not None and seg.label not in labels:
            continue

        def half(from_end, seg=seg):
            ratio = f.power_ratio(half_anchor(seg, from_end), ref_point)

            def g(t):
                w, dw, dlog = local_point_and_log(seg, t, from_end=from_end)
                return f.scaled(w, dlog) * (dw * ratio)

            return g

        res = integrate_two_sided(half(False), half(True), cfg, scale)
        out.append((seg.label, res))
    return out


def _segment_sum(segs) -> np.clongdouble:
    # summed at extended precision: the terms cancel heavily near the arc
    return sum((s.extended_value for _, s in segs), np.clongdouble(0))


def _assemble(z: complex, radii: RadiiConfig, cfg: QuadratureConfig,
              conv: Convention) -> tuple[complex, complex, list]:
    exp_left = "left" if conv.exponent == "z" else "right"
    exp_right = "right" if conv.exponent == "z" else "left"
    left = side_integrals(z, "left", radii, cfg, exp_left)
    right = side_integrals(z, "right", radii, cfg, exp_right)
    int_left = _segment_sum(left)
    int_right = _segment_sum(right)
    pre_z, pre_1mz = xi_prefactor(z), xi_prefactor(1.0 - z)
    if conv.prefactor == "z":
        pl, pr = pre_z, pre_1mz
    else:
        pl, pr = pre_1mz, pre_z
    o = conv.orientation
    return o * pl * int_left, o * pr * int_right, left + right


def zeta_hat_left(z, radii: RadiiConfig = DEFAULT_RADII,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> complex:
    """pi**(-z/2) Gamma(z/2) times the integral over the left contour."""
    z = _check_strip(z)
    segs = side_integrals(z, "left", radii, cfg)
    return complex(AUDITED_CONVENTION.orientation * xi_prefactor(z) * _segment_sum(segs))


def zeta_hat_right(z, radii: RadiiConfig = DEFAULT_RADII,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> complex:
    """pi**(-(1-z)/2) Gamma((1-z)/2) times the integral over the right contour."""
    z = _check_strip(z)
    segs = side_integrals(z, "right", radii, cfg)
    return complex(AUDITED_CONVENTION.orientation * xi_prefactor(1.0 - z) * _segment_sum(segs))


def gross_magnitude(z: complex, segs) -> float:
    """Sum of |prefactor * segment integral| over both sides.

    The segments next to the arc can exceed xi itself by many orders of
    magnitude; this sum sets the scale of the quadrature error in xi.
    """
    n = len(segs) // 2
    left = sum(abs(s.value) for _, s in segs[:n]) * abs(xi_prefactor(z))
    right = sum(abs(s.value) for _, s in segs[n:]) * abs(xi_prefactor(1.0 - z))
    return float(left + right)


def _to_mp(x) -> mpmath.mpc:
    x = np.clongdouble(x)
    return mpmath.mpc(mp_exact(x.real), mp_exact(x.imag))


def _side_sum_mp(z: complex, side: str, radii: RadiiConfig, segs: list,
                 prefactor: complex, share: float, dps: int):
    """Redo the segments whose round-off could exceed ``share`` with mpmath.

    Returns the side sum (mpmath, summed at ``dps`` digits) and the updated
    segment list. Small segments keep their extended-precision values.
    """
    f = integrand_for(side, z)
    path = build_contour(radii, side)
    total = mpmath.mpc(0)
    out = []
    with mpmath.workdps(dps):
        for seg, (label, res) in zip(path.segments, segs):
            if abs(prefactor * res.value) * EXTENDED_RESOLUTION > share:
                val, err = integrate_segment_mp(f.mp, seg, dps)
                res = SegmentIntegral(
                    complex(val), float(err), 2,
                    value_ext=np.clongdouble(np.longdouble(mpmath.nstr(val.real, 25))
                                             + 1j * np.longdouble(mpmath.nstr(val.imag, 25))),
                )
                total += val
            else:
                total += _to_mp(res.extended_value)
            out.append((label, res))
    return total, out


def _escalate(z: complex, radii: RadiiConfig, segs: list, want: float, gross: float):
    n = len(segs) // 2
    share = want / len(segs)
    dps = 8 + math.ceil(-math.log10(want / gross))
    pl, pr = xi_prefactor(z), xi_prefactor(1.0 - z)
    sl, left = _side_sum_mp(z, "left", radii, segs[:n], pl, share, dps)
    sr, right = _side_sum_mp(z, "right", radii, segs[n:], pr, share, dps)
    o = AUDITED_CONVENTION.orientation
    return o * pl * complex(sl), o * pr * complex(sr), left + right


def completed_zeta_contour(z, radii: RadiiConfig = DEFAULT_RADII,
                           cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                           target_error: float | None = None) -> ContourEvaluation:
    """xi(z) = xi_left + xi_right from the two contour integrals.

    The segment tolerances are relative to each segment, which is not enough
    when the segments cancel. After a first pass the relative tolerance is
    tightened (once) so that rel_tol * gross_magnitude stays below
    ``target_error``, by default max(abs_tol, rel_tol * |xi|). When that
    ratio is below what long double arithmetic resolves, the dominant
    segments are recomputed with mpmath at enough digits instead.
    """
    z = _check_strip(z)
    xl, xr, segs = _assemble(z, radii, cfg, AUDITED_CONVENTION)
    total = abs(complex(xl + xr))
    want = target_error if target_error is not None else max(cfg.abs_tol, cfg.rel_tol * total)
    gross = gross_magnitude(z, segs)
    if gross > 0 and want > 0:
        needed = want / gross
        if needed < EXTENDED_RESOLUTION:
            xl, xr, segs = _escalate(z, radii, segs, want, gross)
        elif needed < cfg.rel_tol:
            needed = max(needed, REL_TOL_FLOOR)
            xl, xr, segs = _assemble(z, radii, replace(cfg, rel_tol=needed), AUDITED_CONVENTION)
    return ContourEvaluation(z, complex(xl), complex(xr), complex(xl + xr), tuple(segs), radii)


@dataclass(frozen=True)
class AuditReport:
    tested_pairings: tuple[tuple[str, float], ...]
    selected_pairing: str
    grid: tuple[complex, ...]
    selected_convention: Convention = field(default=AUDITED_CONVENTION)

    def deviation(self, pairing_id: str) -> float:
        return dict(self.tested_pairings)[pairing_id]

    @property
    def passing(self) -> tuple[str, ...]:
        """Pairings whose deviation is below the audit threshold."""
        return tuple(p for p, d in self.tested_pairings if d < AUDIT_THRESHOLD)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "grid": [_complex_json(z) for z in self.grid],
            "tested_pairings": [
                {"pairing": pid, "max_deviation": dev} for pid, dev in self.tested_pairings
            ],
            "selected_pairing": self.selected_pairing,
            "passing": list(self.passing),
        }


AUDIT_THRESHOLD = 1e-6


def formula_audit(grid, radii: RadiiConfig = DEFAULT_RADII,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> AuditReport:
    """Score all eight assembly conventions against the direct evaluation.

    Deviation is max over the grid of |candidate - direct| / (1 + |direct|).
    The smallest deviation wins; candidates that all sit below the 1e-6
    threshold are treated as tied and the first in ``ALL_CONVENTIONS``
    order is taken, so round-off cannot flip the choice. (Swapping both
    prefactor and exponent evaluates xi(1-z), which equals xi(z), so that
    candidate always ties with the identity convention.)
    Raises AuditFailure if even the best candidate exceeds 1e-6.
    """
    grid = tuple(_check_strip(z) for z in grid)
    if not grid:
        raise DomainError("formula_audit needs a non-empty grid")
    direct = [completed_zeta_direct(z) for z in grid]
    scores = []
    for conv in ALL_CONVENTIONS:
        worst = 0.0
        for z, ref in zip(grid, direct):
            xl, xr, _ = _assemble(z, radii, cfg, conv)
            dev = abs(complex(xl + xr) - ref) / (1.0 + abs(ref))
            if not math.isfinite(dev):
                dev = math.inf
            worst = max(worst, dev)
        scores.append((conv, worst))
    passing = [(c, d) for c, d in scores if d < AUDIT_THRESHOLD]
    best, best_dev = passing[0] if passing else min(scores, key=lambda s: s[1])
    report = AuditReport(
        tuple((c.id, d) for c, d in scores), best.id, grid, best
    )
    if not best_dev < AUDIT_THRESHOLD:
        raise AuditFailure(
            f"best convention {best.id} deviates by {best_dev:.3g}", report=report
        )
    return report
