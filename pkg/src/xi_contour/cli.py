"""Command-line front end: ``xi-contour <command> [options]``.

Exit codes: 0 success, 1 usage or configuration error, 2 a verification
check failed. Reports go to ``--output`` (or standard output); diagnostics
go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import acceptance
from .contour_geometry import RadiiConfig
from .errors import (
    AuditFailure,
    FitError,
    RealnessViolation,
    XiContourError,
)
from .experiments import (
    CONFIRM_RATIO,
    arc_scaling_fit,
    cancellation_report,
    contour_invariance_check,
    find_critical_zeros,
    invariance_configs,
    wedge_scaling_fit,
)
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .special_functions import completed_zeta_direct
from .zeta_contour import (
    DEFAULT_RADII,
    SCHEMA_VERSION,
    completed_zeta_contour,
    default_radii,
    formula_audit,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2

COMMANDS = ("eval", "audit", "invariance", "scaling", "zeros", "cancellation", "verify-all")
CSV_COMMANDS = ("scaling", "zeros", "verify-all")
INVARIANCE_TOL = 1e-8
POINTS_PER_DECADE = 4

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"^[+-]?{_NUM}$")
_IMAG_RE = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_BOTH_RE = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i$")


class UsageError(Exception):
    pass


def _coef(text: str) -> float:
    return float(text + "1") if text in ("", "+", "-") else float(text)


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` / ``a-bi`` (also plain ``a`` or ``bi``), no spaces."""
    if _REAL_RE.match(text):
        return complex(float(text), 0.0)
    m = _IMAG_RE.match(text)
    if m:
        return complex(0.0, _coef(m.group("im")))
    m = _BOTH_RE.match(text)
    if m:
        return complex(float(m.group("re")), _coef(m.group("im")))
    raise UsageError(f"cannot parse complex number {text!r}; use a+bi with no spaces")


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; 2 is reserved for failed checks
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("radii overrides")
    g.add_argument("--r1", type=float, help="central arc radius (default 1e-3)")
    g.add_argument("--rm", type=float, help="inner ray radius r_m (default 0.1)")
    g.add_argument("--rM", type=float, help="outer ray radius r_M (default 5)")
    g.add_argument("--ray-cut", type=float, help="ray truncation radius (default from --tail-eps)")
    q = p.add_argument_group("quadrature overrides")
    q.add_argument("--abs-tol", type=float)
    q.add_argument("--rel-tol", type=float)
    q.add_argument("--max-depth", type=int)
    q.add_argument("--tail-eps", type=float)
    p.add_argument("--output", "-o", help="write the report here instead of standard output")
    p.add_argument("--format", choices=("json", "csv"), help="report format")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xi-contour",
                     description="Completed zeta function in contour-integral form, with checks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("eval", help="contour and direct evaluation at one point")
    p.add_argument("--z", type=_complex_arg, required=True)
    _add_common(p)

    p = sub.add_parser("audit", help="score the assembly conventions against the direct value")
    p.add_argument("--grid", type=_complex_arg, nargs="+", default=list(acceptance.AUDIT_GRID))
    _add_common(p)

    p = sub.add_parser("invariance", help="spread of the contour value over four radii settings")
    p.add_argument("--z", type=_complex_arg, default=0.4 + 4j)
    _add_common(p)

    p = sub.add_parser("scaling", help="log-log slope of an arc or wedge integral in r1")
    p.add_argument("--zR", type=float, required=True)
    p.add_argument("--zI", type=float, required=True)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--decades", type=int, default=3, help="decades below r_m/10 (at least 2)")
    p.add_argument("--kind", choices=("arc", "wedge"), default="arc")
    _add_common(p)

    p = sub.add_parser("zeros", help="critical-line zeros, each checked by the contour form")
    p.add_argument("--t-min", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--no-confirm", action="store_true", help="skip the contour check")
    _add_common(p)

    p = sub.add_parser("cancellation", help="|xi_left + xi_right| / max(|xi_left|, |xi_right|)")
    p.add_argument("--z", type=_complex_arg, required=True)
    _add_common(p)

    p = sub.add_parser("verify-all", help="run every acceptance criterion")
    _add_common(p)
    return parser


@dataclass(frozen=True)
class RunConfig:
    command: str
    radii: RadiiConfig
    quadrature: QuadratureConfig
    output: str | None
    fmt: str
    args: argparse.Namespace


def _configs(args) -> tuple[RadiiConfig, QuadratureConfig]:
    d = DEFAULT_QUADRATURE
    cfg = QuadratureConfig(
        abs_tol=d.abs_tol if args.abs_tol is None else args.abs_tol,
        rel_tol=d.rel_tol if args.rel_tol is None else args.rel_tol,
        max_depth=d.max_depth if args.max_depth is None else args.max_depth,
        tail_eps=d.tail_eps if args.tail_eps is None else args.tail_eps,
    )
    overrides = (args.r1, args.rm, args.rM, args.ray_cut, args.tail_eps)
    if all(v is None for v in overrides):
        return DEFAULT_RADII, cfg
    r = DEFAULT_RADII
    radii = default_radii(
        r.r1 if args.r1 is None else args.r1,
        r.r_m if args.rm is None else args.rm,
        r.r_M if args.rM is None else args.rM,
        args.ray_cut,
        cfg=cfg,
    )
    return radii, cfg


def make_run_config(argv: list[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    default_fmt = "csv" if args.command == "scaling" else "json"
    if args.command == "verify-all" and args.format is None:
        default_fmt = "text"
    fmt = args.format or default_fmt
    if fmt == "csv" and args.command not in CSV_COMMANDS:
        raise UsageError(f"csv output is available for {', '.join(CSV_COMMANDS)} only")
    radii, cfg = _configs(args)
    return RunConfig(args.command, radii, cfg, args.output, fmt, args)


# ---------------------------------------------------------------------------
# report rendering


def _cx(c: complex) -> dict:
    return {"re": c.real, "im": c.imag}


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _csv_text(header, rows, footer=()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _emit(rc: RunConfig, text: str) -> None:
    if rc.output:
        with open(rc.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _with_config(rc: RunConfig, body: dict) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": rc.command}
    out.update(body)
    out["radii"] = rc.radii.to_dict()
    out["quadrature"] = rc.quadrature.to_dict()
    return out


# ---------------------------------------------------------------------------
# commands; each returns (report text, exit code)


def _cmd_eval(rc: RunConfig):
    z = rc.args.z
    ev = completed_zeta_contour(z, rc.radii, rc.quadrature)
    direct = completed_zeta_direct(z)
    body = ev.to_dict()
    body.pop("schema_version")
    body["direct"] = _cx(direct)
    body["deviation"] = abs(ev.xi_total - direct)
    return _json_text(_with_config(rc, body)), EXIT_OK


def _cmd_audit(rc: RunConfig):
    try:
        report = formula_audit(rc.args.grid, rc.radii, rc.quadrature)
        code = EXIT_OK
    except AuditFailure as exc:
        report, code = exc.report, EXIT_VERIFY
        print(f"error: AuditFailure: {exc}", file=sys.stderr)
    body = report.to_dict()
    body.pop("schema_version")
    return _json_text(_with_config(rc, body)), code


def _cmd_invariance(rc: RunConfig):
    z = rc.args.z
    configs = invariance_configs(rc.quadrature)
    spread = contour_invariance_check(z, configs, rc.quadrature)
    passed = spread <= INVARIANCE_TOL
    body = {
        "z": _cx(z),
        "configs": [c.to_dict() for c in configs],
        "spread": spread,
        "tolerance": INVARIANCE_TOL,
        "passed": passed,
    }
    return _json_text(_with_config(rc, body)), EXIT_OK if passed else EXIT_VERIFY


def _cmd_scaling(rc: RunConfig):
    a = rc.args
    if a.decades < 2:
        raise UsageError("--decades must be at least 2")
    top = rc.radii.r_m / 10.0
    sweep = [float(x) for x in top * np.logspace(-a.decades, 0, POINTS_PER_DECADE * a.decades + 1)]
    fn = arc_scaling_fit if a.kind == "arc" else wedge_scaling_fit
    z = complex(a.zR, a.zI)
    code = EXIT_OK
    try:
        fit = fn(z, sweep, a.side, rc.quadrature, rc.radii)
    except FitError as exc:
        fit, code = exc.fit, EXIT_VERIFY
        print(f"error: FitError: {exc}", file=sys.stderr)
    if rc.fmt == "csv":
        rows = [[repr(r), repr(m), a.side, repr(a.zR), repr(a.zI)] for r, m in fit.sweep]
        footer = (f"slope={fit.slope!r}", f"r_squared={fit.r_squared!r}")
        return _csv_text(["r1", "abs_integral", "side", "zR", "zI"], rows, footer), code
    body = fit.to_dict()
    body["kind"] = a.kind
    body["expected_slope"] = fit.expected_slope()
    return _json_text(_with_config(rc, body)), code


def _cmd_zeros(rc: RunConfig):
    a = rc.args
    found = find_critical_zeros(a.t_min, a.t_max, a.step, rc.quadrature, rc.radii,
                                confirm=not a.no_confirm)
    failed = [r for r in found if not a.no_confirm and not r.confirmed]
    code = EXIT_VERIFY if failed else EXIT_OK
    if rc.fmt == "csv":
        rows = [[repr(r.t), repr(r.residual), repr(r.contour_ratio),
                 "" if a.no_confirm else str(r.confirmed).lower()] for r in found]
        return _csv_text(["t", "residual", "contour_ratio", "confirmed"], rows), code
    body = {
        "t_range": [a.t_min, a.t_max],
        "step": a.step,
        "confirm_ratio": CONFIRM_RATIO,
        "zeros": [r.to_dict() for r in found],
    }
    return _json_text(_with_config(rc, body)), code


def _cmd_cancellation(rc: RunConfig):
    rep = cancellation_report(rc.args.z, rc.radii, rc.quadrature)
    body = rep.to_dict()
    body.pop("schema_version")
    return _json_text(_with_config(rc, body)), EXIT_OK


def _cmd_verify_all(rc: RunConfig):
    # the criteria fix their own radii and tolerances
    overrides = ("r1", "rm", "rM", "ray_cut", "abs_tol", "rel_tol", "max_depth", "tail_eps")
    if any(getattr(rc.args, k) is not None for k in overrides):
        raise UsageError("verify-all runs at the default radii and tolerances; drop the overrides")
    live = rc.output is not None or rc.fmt != "text"
    results = acceptance.run_all(
        progress=(lambda r: print(r.line(), file=sys.stderr)) if live else None
    )
    code = EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
    if rc.fmt == "json":
        body = {
            "schema_version": SCHEMA_VERSION,
            "command": rc.command,
            "passed": code == EXIT_OK,
            "criteria": [r.to_dict() for r in results],
        }
        return _json_text(body), code
    if rc.fmt == "csv":
        rows = [[r.number, r.name, str(r.passed).lower(), r.detail] for r in results]
        return _csv_text(["number", "name", "passed", "detail"], rows), code
    n_pass = sum(r.passed for r in results)
    lines = [r.line() for r in results] + [f"{n_pass}/{len(results)} criteria passed"]
    return "\n".join(lines) + "\n", code


_HANDLERS = {
    "eval": _cmd_eval,
    "audit": _cmd_audit,
    "invariance": _cmd_invariance,
    "scaling": _cmd_scaling,
    "zeros": _cmd_zeros,
    "cancellation": _cmd_cancellation,
    "verify-all": _cmd_verify_all,
}


def run(argv: list[str]) -> int:
    """Execute one command; returns the process exit code."""
    try:
        rc = make_run_config(list(argv))
        text, code = _HANDLERS[rc.command](rc)
        _emit(rc, text)
        return code
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RealnessViolation, FitError, AuditFailure) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (XiContourError, ValueError) as exc:
        # DomainError, OrderingError, PoleError, ConvergenceError and bad numbers
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
