import cmath
import json
import math

import mpmath
import numpy as np
import pytest

import oracles
from xi_contour.errors import DomainError, FitError
from xi_contour.experiments import (
    DEFAULT_SWEEP,
    ScalingFit,
    arc_scaling_fit,
    cancellation_report,
    contour_invariance_check,
    find_critical_zeros,
    invariance_configs,
    loglog_fit,
    parallel_map,
    ray_angles,
    ray_decay_fit,
    segment_magnitude_table,
    wedge_scaling_fit,
)
from xi_contour.zeta_contour import DEFAULT_RADII, default_radii

PI = math.pi
ZEROS = [14.134725141734693, 21.022039638771555, 25.010857580145688]


def test_loglog_fit_exact_power_law():
    xs = np.logspace(-5, -2, 9)
    slope, intercept, r2 = loglog_fit(xs, 3.0 * xs ** -0.7)
    assert slope == pytest.approx(-0.7, abs=1e-12)
    assert intercept == pytest.approx(math.log(3.0), abs=1e-10)
    assert r2 == pytest.approx(1.0, abs=1e-12)


def test_loglog_fit_rejects_nonpositive():
    with pytest.raises(DomainError):
        loglog_fit([1, 2, 3], [1, 0, 2])


def test_scaling_fit_validation():
    with pytest.raises(DomainError):
        ScalingFit(-0.5, 0.0, 1.0, ((1e-4, 1.0), (1e-3, 1.0), (1e-2, 1.0)))
    with pytest.raises(DomainError):
        ScalingFit(-0.5, 0.0, 1.0, tuple((r, 1.0) for r in (1e-4, 2e-4, 5e-4, 1e-3)))
    fit = ScalingFit(-0.5, 0.0, 0.99, tuple((10.0 ** -k, 1.0) for k in range(2, 6)), z=0.3 + 1j)
    assert fit.expected_slope() == pytest.approx(-0.3)
    assert json.loads(json.dumps(fit.to_dict()))["slope"] == -0.5


def test_default_sweep():
    assert len(DEFAULT_SWEEP) == 13
    assert DEFAULT_SWEEP[0] == pytest.approx(1e-5)
    assert DEFAULT_SWEEP[-1] == pytest.approx(1e-2)


def test_arc_slope_four_point_sweep():
    fit = arc_scaling_fit(0.5 + 3j, [1e-2, 1e-3, 1e-4, 1e-5])
    assert fit.slope == pytest.approx(-0.5, abs=0.02)


@pytest.mark.parametrize("z, side, want", [
    (0.5 + 3j, "left", -0.5),
    (0.3 + 3j, "left", -0.3),
    (0.3 + 3j, "right", -0.7),
    (0.8 - 2j, "left", -0.8),
])
def test_arc_slope(z, side, want):
    fit = arc_scaling_fit(z, side=side)
    assert fit.slope == pytest.approx(want, abs=0.01)
    assert fit.r_squared > 0.999
    assert fit.segments == (("C_lc",) if side == "left" else ("C_rc",))


@pytest.mark.parametrize("z, side, want", [
    (0.5 + 3j, "left", -0.5),
    (0.5 + 3j, "right", -0.5),
    (0.7 + 3j, "left", -0.7),
])
def test_wedge_slope(z, side, want):
    fit = wedge_scaling_fit(z, side=side)
    assert fit.slope == pytest.approx(want, abs=0.03)


def test_wedge_sides_mirror():
    # |wedge_left(z)| = |wedge_right(1 - conj z)| at every r1
    a = wedge_scaling_fit(0.7 + 3j, side="left")
    b = wedge_scaling_fit(0.3 + 3j, side="right")
    for (ra, ma), (rb, mb) in zip(a.sweep, b.sweep):
        assert ra == rb
        assert ma == pytest.approx(mb, rel=1e-10)


@pytest.mark.parametrize("z, side", [(0.3 + 3j, "left"), (0.7 + 3j, "right")])
def test_wedge_fit_error_carries_fit(z, side):
    # the constant from the r_m end competes with r1**(-0.3); the slope is
    # still right but the log-log line is visibly curved
    with pytest.raises(FitError) as info:
        wedge_scaling_fit(z, side=side)
    assert info.value.fit.r_squared < 0.99
    assert info.value.fit.slope == pytest.approx(-0.3, abs=0.03)


@pytest.mark.parametrize("sweep", [
    [1e-5, 1e-4, 1e-3],                 # too few
    [1e-4, 2e-4, 4e-4, 8e-4],           # under 2 decades
    [1e-4, 1e-3, 1e-2, 5e-2],           # above r_m / 10
])
def test_bad_sweeps(sweep):
    with pytest.raises(DomainError):
        arc_scaling_fit(0.5 + 3j, sweep)


def test_bad_wedge_selection():
    with pytest.raises(DomainError):
        wedge_scaling_fit(0.5 + 3j, which="both")


@pytest.mark.parametrize("side, theta", ray_angles())
def test_ray_decay(side, theta):
    fit = ray_decay_fit(0.4 + 3j, side, theta)
    assert fit.expected_rate == pytest.approx(PI * math.sqrt(0.5))
    assert fit.relative_error < 0.05
    assert fit.r_squared > 0.999
    # the raw log-slope is dominated by the Gaussian
    assert fit.naive_rate > 10 * fit.expected_rate


def test_ray_decay_errors():
    with pytest.raises(DomainError):
        ray_decay_fit(0.4 + 3j, "left", 0.0)
    with pytest.raises(DomainError):
        ray_decay_fit(0.4 + 3j, "left", 0.75 * PI, r_lo=5.0, r_hi=4.0)


def test_segment_table():
    table = segment_magnitude_table(0.4 + 3j)
    assert len(table) == 14
    rays = [row for row in table if row.bound is not None]
    assert [row.label for row in rays] == ["C_l1", "C_l4", "C_r1", "C_r4"]
    assert all(row.within_bound for row in rays)
    assert all(row.within_bound is None for row in table if row.bound is None)
    assert json.loads(json.dumps([row.to_dict() for row in table]))[0]["side"] == "left"


def test_arc_dominance_at_small_radius():
    # at r1 = 1e-6 the arc beats every segment except the wedge piece that
    # approaches it along the decaying direction, which is just as large
    table = {row.label: row.magnitude for row in
             segment_magnitude_table(0.5 + 3j, default_radii(1e-6))}
    for side, wedge in (("l", "C_lp"), ("r", "C_rn")):
        arc = table[f"C_{side}c"]
        others = [m for lab, m in table.items() if lab[2] == side and lab not in (wedge, f"C_{side}c")]
        assert arc >= 10 * max(others)
        assert table[wedge] == pytest.approx(arc, rel=0.05)
    # leading order: integral of w^(-z) / (2 pi i w) over the arc
    z = 0.5 + 3j
    ends = [cmath.exp(-z * 1j * th) for th in (-0.25 * PI, 0.75 * PI)]
    lead = abs(ends[0] - ends[1]) / (2 * PI * abs(z)) * 1e-6 ** -0.5
    assert table["C_lc"] == pytest.approx(lead, rel=1e-6)


def test_invariance_spread_small():
    spread = contour_invariance_check(0.4 + 4j, invariance_configs())
    assert spread < 1e-8


def test_invariance_identical_configs():
    assert contour_invariance_check(0.4 + 4j, [DEFAULT_RADII, DEFAULT_RADII]) == 0.0


def test_invariance_needs_two():
    with pytest.raises(DomainError):
        contour_invariance_check(0.4 + 4j, [DEFAULT_RADII])


def test_cancellation_at_zero_and_off_line():
    at_zero = cancellation_report(complex(0.5, ZEROS[0]))
    off_line = cancellation_report(complex(0.3, ZEROS[0]))
    assert at_zero.ratio < 1e-6
    assert off_line.ratio > 1e3 * at_zero.ratio
    assert at_zero.xi_left_abs == pytest.approx(at_zero.xi_right_abs, rel=1e-9)
    assert json.loads(json.dumps(at_zero.to_dict()))["schema_version"] == 1
    assert cancellation_report(0.5 + 3j).ratio > 1e-3


def test_zeros_match_oracles():
    found = find_critical_zeros(10.0, 26.0, step=0.1)
    ts = [rec.t for rec in found]
    hardy = oracles.hardy_zeros(10.0, 26.0)
    assert len(ts) == len(hardy) == 3
    for t, h, k in zip(ts, hardy, (1, 2, 3)):
        assert abs(t - h) < 1e-8
        assert abs(t - float(mpmath.zetazero(k).imag)) < 1e-8
    assert all(rec.confirmed for rec in found)
    assert all(rec.bracket[0] <= rec.t <= rec.bracket[1] for rec in found)


def test_no_zeros_below_first():
    assert find_critical_zeros(1.0, 13.0, confirm=False) == []
    assert oracles.hardy_zeros(1.0, 13.0) == []


def test_zeros_stable_under_step_halving():
    a = find_critical_zeros(13.0, 22.0, step=0.2, confirm=False)
    b = find_critical_zeros(13.0, 22.0, step=0.1, confirm=False)
    assert len(a) == len(b) == 2
    for ra, rb in zip(a, b):
        assert abs(ra.t - rb.t) < 1e-8
        assert not ra.confirmed  # unconfirmed when the contour check is skipped


@pytest.mark.parametrize("t_min, t_max", [(20.0, 10.0), (5.0, 5.0), (0.0, 5.0)])
def test_zero_range_errors(t_min, t_max):
    with pytest.raises(DomainError):
        find_critical_zeros(t_min, t_max)


def test_parallel_map_keeps_order(monkeypatch):
    monkeypatch.setenv("XI_CONTOUR_THREADS", "3")
    assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]


@pytest.mark.parametrize("value", ["", "0", "1", "4"])
def test_thread_setting_accepted(monkeypatch, value):
    monkeypatch.setenv("XI_CONTOUR_THREADS", value)
    assert parallel_map(str, [1, 2]) == ["1", "2"]


@pytest.mark.parametrize("value", ["-1", "many"])
def test_thread_setting_rejected(monkeypatch, value):
    monkeypatch.setenv("XI_CONTOUR_THREADS", value)
    with pytest.raises(DomainError):
        parallel_map(str, [1, 2])
