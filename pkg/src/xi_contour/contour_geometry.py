"""Deformed integration contours around the origin.

Both contours come in from infinity along a diagonal ray, run straight
towards the origin, swing around it on a small arc of radius ``r1`` that
crosses the positive real axis, and leave along the opposite diagonal:

* left:  angle 3pi/4 inwards, arc 3pi/4 -> pi/4 -> -pi/4, angle -pi/4 outwards
* right: angle pi/4 inwards, arc pi/4 -> -pi/4 -> -3pi/4, angle -3pi/4 outwards

Each path has seven pieces. Radii shrink ray_cut -> r_M -> r_m -> r1, stay at
r1 along the arc, then grow r1 -> r_m -> r_M -> ray_cut. The infinite rays
are cut at ``ray_cut``; the quadrature module sizes that cut so the
discarded tail is below tolerance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

from .errors import DomainError, OrderingError

PI = math.pi

Side = Literal["left", "right"]

# (inward ray angle, arc midpoint angle, outward ray angle)
_ANGLES = {
    "left": (0.75 * PI, 0.25 * PI, -0.25 * PI),
    "right": (0.25 * PI, -0.25 * PI, -0.75 * PI),
}
_SUFFIXES = ("1", "2", "p", "c", "n", "3", "4")


def segment_labels(side: Side) -> tuple[str, ...]:
    tag = "l" if side == "left" else "r"
    return tuple(f"C_{tag}{s}" for s in _SUFFIXES)


@dataclass(frozen=True)
class RadiiConfig:
    r1: float
    r_m: float
    r_M: float
    ray_cut: float

    def to_dict(self) -> dict:
        return {"r1": self.r1, "r_m": self.r_m, "r_M": self.r_M, "ray_cut": self.ray_cut}


def make_radii(r1: float, r_m: float, r_M: float, ray_cut: float) -> RadiiConfig:
    """Validate ``0 < r1 <= r_m/10 < r_m < 1/2 < r_M < ray_cut``."""
    vals = {"r1": r1, "r_m": r_m, "r_M": r_M, "ray_cut": ray_cut}
    for name, v in vals.items():
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise OrderingError(f"{name} must be a finite real, got {v!r}")
        if v <= 0:
            raise OrderingError(f"{name} must be positive, got {v!r}")
    if r1 > r_m / 10.0:
        raise OrderingError(f"need r1 <= r_m/10, got r1={r1!r}, r_m={r_m!r}")
    if not r_m < 0.5:
        raise OrderingError(f"need r_m < 1/2, got r_m={r_m!r}")
    if not 0.5 < r_M:
        raise OrderingError(f"need r_M > 1/2, got r_M={r_M!r}")
    if not r_M < ray_cut:
        raise OrderingError(f"need r_M < ray_cut, got r_M={r_M!r}, ray_cut={ray_cut!r}")
    return RadiiConfig(float(r1), float(r_m), float(r_M), float(ray_cut))


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex
    label: str = ""
    kind = "line"

    def __post_init__(self):
        if self.start == self.end:
            raise DomainError("degenerate line segment (start == end)")

    @property
    def end_point(self) -> complex:
        return self.end

    @property
    def start_point(self) -> complex:
        return self.start

    def to_dict(self) -> dict:
        return {
            "kind": "line",
            "label": self.label,
            "start": [self.start.real, self.start.imag],
            "end": [self.end.real, self.end.imag],
        }


@dataclass(frozen=True)
class Arc:
    radius: float
    theta_start: float
    theta_end: float
    label: str = ""
    kind = "arc"

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("arc radius must be positive")
        for th in (self.theta_start, self.theta_end):
            if not -PI < th <= PI:
                raise DomainError(f"arc angle {th!r} outside (-pi, pi]")

    @property
    def start_point(self) -> complex:
        return cmath.rect(self.radius, self.theta_start)

    @property
    def end_point(self) -> complex:
        return cmath.rect(self.radius, self.theta_end)

    def to_dict(self) -> dict:
        return {
            "kind": "arc",
            "label": self.label,
            "radius": self.radius,
            "theta_start": self.theta_start,
            "theta_end": self.theta_end,
        }


ContourSegment = Line | Arc


@dataclass(frozen=True)
class ContourPath:
    segments: tuple[ContourSegment, ...]
    label: Side

    def __post_init__(self):
        for a, b in zip(self.segments, self.segments[1:]):
            if a.end_point != b.start_point:
                raise DomainError(f"segments {a.label} and {b.label} do not join")

    def __iter__(self):
        return iter(self.segments)

    def __len__(self):
        return len(self.segments)

    def to_dict(self) -> dict:
        return {"label": self.label, "segments": [s.to_dict() for s in self.segments]}


def _build(cfg: RadiiConfig, side: Side) -> ContourPath:
    a_in, _, a_out = _ANGLES[side]
    labels = segment_labels(side)
    # shared endpoints are computed once so the joins match bit for bit
    p_in = [cmath.rect(r, a_in) for r in (cfg.ray_cut, cfg.r_M, cfg.r_m)]
    p_out = [cmath.rect(r, a_out) for r in (cfg.r_m, cfg.r_M, cfg.ray_cut)]
    arc = Arc(cfg.r1, a_in, a_out, labels[3])
    segs = (
        Line(p_in[0], p_in[1], labels[0]),
        Line(p_in[1], p_in[2], labels[1]),
        Line(p_in[2], arc.start_point, labels[2]),
        arc,
        Line(arc.end_point, p_out[0], labels[4]),
        Line(p_out[0], p_out[1], labels[5]),
        Line(p_out[1], p_out[2], labels[6]),
    )
    return ContourPath(segs, side)


def build_left_contour(cfg: RadiiConfig) -> ContourPath:
    return _build(cfg, "left")


def build_right_contour(cfg: RadiiConfig) -> ContourPath:
    return _build(cfg, "right")


def build_contour(cfg: RadiiConfig, side: Side) -> ContourPath:
    if side not in _ANGLES:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    return _build(cfg, side)


def _parameterize(seg: ContourSegment, t, from_end: bool):
    import numpy as np

    t_arr = np.asarray(t)
    if t_arr.dtype.kind not in "fiu":
        raise DomainError("segment parameter must be real")
    extended = t_arr.dtype == np.longdouble
    if not extended:
        t_arr = t_arr.astype(float)
    if np.any(~np.isfinite(t_arr)) or np.any((t_arr < 0.0) | (t_arr > 1.0)):
        raise DomainError("segment parameter must lie in [0, 1]")
    ctype = np.clongdouble if extended else complex
    if isinstance(seg, Line):
        a, b = np.asarray(seg.start, dtype=ctype), np.asarray(seg.end, dtype=ctype)
        d = b - a
        w = b - t_arr * d if from_end else a + t_arr * d
        dw = np.full_like(w, d)
    elif not extended:
        dth = seg.theta_end - seg.theta_start
        th = seg.theta_end - t_arr * dth if from_end else seg.theta_start + t_arr * dth
        w = seg.radius * np.exp(1j * th)
        dw = 1j * dth * w
    else:
        # log-polar path pinned to the double endpoints, so it joins the
        # neighbouring lines exactly at extended precision
        a, b = np.asarray(seg.start_point, dtype=ctype), np.asarray(seg.end_point, dtype=ctype)
        la = np.log(np.abs(a)) + 1j * np.arctan2(a.imag, a.real)
        lb = np.log(np.abs(b)) + 1j * np.arctan2(b.imag, b.real)
        dl = lb - la
        w = np.exp(lb - t_arr * dl if from_end else la + t_arr * dl)
        dw = dl * w
    if np.ndim(t) == 0 and not extended:
        return complex(w), complex(dw)
    return w, dw


def parameterize_segment(seg: ContourSegment, t):
    """Point on ``seg`` at parameter t in [0, 1] and dw/dt.

    ``t`` may be a float or a numpy array; the result has the same shape.
    A ``numpy.longdouble`` array gives extended-precision points; arcs are
    then traced in log-polar form between their (double) endpoints.
    """
    return _parameterize(seg, t, from_end=False)


def parameterize_from_end(seg: ContourSegment, u):
    """Point at parameter t = 1 - u, measured back from the segment end.

    Same map as ``parameterize_segment``, evaluated as ``end - u*(end - start)``
    so points near the end keep full relative precision. Returns (w, dw/dt).
    """
    return _parameterize(seg, u, from_end=True)


def _log_ld(p):
    import numpy as np

    p = np.asarray(p, dtype=np.clongdouble)
    return np.log(np.abs(p)) + 1j * np.arctan2(p.imag, p.real)


def arc_index(path: ContourPath) -> int:
    for i, seg in enumerate(path.segments):
        if isinstance(seg, Arc):
            return i
    raise DomainError("path has no arc")


def arc_reference_logs(path: ContourPath):
    """Principal logs (extended precision) of the arc's start and end points."""
    arc = path.segments[arc_index(path)]
    return _log_ld(arc.start_point), _log_ld(arc.end_point)


def half_anchor(seg: ContourSegment, from_end: bool) -> complex:
    """Endpoint from which a half segment is traced: start, or end if ``from_end``."""
    return seg.end_point if from_end else seg.start_point


def local_point_and_log(seg: ContourSegment, t, *, from_end: bool):
    """Extended-precision (w, dw/dt, Log(w / anchor)) with anchor = ``half_anchor``.

    The log is taken of the ratio, so it is small near the anchor and keeps
    full absolute precision there, whatever the size of Log w itself.
    """
    import numpy as np

    t = np.asarray(t, dtype=np.longdouble)
    w, dw = _parameterize(seg, t, from_end)
    return w, dw, _log_ld(w / np.clongdouble(half_anchor(seg, from_end)))
