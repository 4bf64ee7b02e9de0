"""Command-line front end.

Subcommands: solve (full pipeline for the preset architecture), dixon-det
(elimination determinant of a quadric system), verify (residuals of a
point), plus an undocumented oracle subcommand for debugging.  Exit codes:
0 success, 1 bad input, 2 degenerate system.  Errors go to stderr as
"error[code]: message".
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction

from .dixon import (
    DegenerateSystem,
    QuadricSystem,
    dixon_determinant,
    load_system,
)
from .oracle import OracleConfig, oracle_solve, verify_point
from .polyring import NotDivisible
from .solver import (
    CrossCheckMismatch,
    UnivariatePoly,
    fdp_report,
)
from .spm import (
    MotorAngles,
    Quaternion,
    build_3rrrr_system,
    extraneous_set,
)


@dataclass(frozen=True)
class CliRequest:
    """One parsed invocation."""

    subcommand: str
    motor_angles: MotorAngles | None = None
    system: QuadricSystem | None = None
    point: Quaternion | None = None
    retain: str = "q0"
    fmt: str = "text"
    precision: int = 17
    include_extraneous: bool = False
    grid: int = 24


def _error(code: str, message) -> None:
    print(f"error[{code}]: {message}", file=_sys.stderr)


def _parse_sincos(pairs: list[str]) -> MotorAngles:
    out = []
    for p in pairs:
        a, b = p.split(",")
        out.append((Fraction(a), Fraction(b)))
    return MotorAngles.from_exact(out)


def _parse_theta(arg: str) -> MotorAngles:
    parts = [float(x) for x in arg.split(",")]
    return MotorAngles.from_theta(*parts)


def _parse_point(arg: str) -> Quaternion:
    parts = [Fraction(x) for x in arg.split(",")]
    if len(parts) != 4:
        raise ValueError("point needs four comma-separated coordinates")
    return Quaternion(*parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spmfdp",
        description="Forward displacement of spherical parallel manipulators "
                    "by quadric elimination.")
    subs = parser.add_subparsers(dest="subcommand", required=True,
                                 metavar="{solve,dixon-det,verify}")

    def add_common(p, with_angles=True, with_system=True):
        if with_angles:
            p.add_argument("--theta", help="motor angles in radians: a,b,c")
            p.add_argument("--sincos", nargs=3, metavar="A,B",
                           help="exact sin/cos pairs, e.g. 3/5,4/5 5/13,12/13 7/25,24/25")
        if with_system:
            p.add_argument("--system", help="quadric system JSON file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--precision", type=int, default=17,
                       help="significant digits in output (default 17)")

    p_solve = subs.add_parser("solve", help="solve the forward displacement problem")
    add_common(p_solve, with_system=False)
    p_solve.add_argument("--include-extraneous", action="store_true",
                         help="also list the eight half-coordinate points")

    p_det = subs.add_parser("dixon-det", help="elimination determinant coefficients")
    add_common(p_det)
    p_det.add_argument("--retain", default="q0",
                       choices=("q0", "q1", "q2", "q3"))

    p_verify = subs.add_parser("verify", help="residuals of a candidate point")
    add_common(p_verify)
    p_verify.add_argument("--point", required=True,
                          help="q0,q1,q2,q3 (rationals or decimals)")

    p_oracle = subs.add_parser("oracle")  # debugging; kept out of the listing
    add_common(p_oracle)
    p_oracle.add_argument("--grid", type=int, default=24)
    return parser


def _request_from_ns(ns) -> CliRequest:
    sources = [s for s in ("theta", "sincos", "system")
               if getattr(ns, s, None)]
    if len(sources) != 1:
        raise ValueError(
            f"exactly one input source required, got {sources or 'none'}")
    motor = None
    system = None
    if getattr(ns, "theta", None):
        motor = _parse_theta(ns.theta)
    elif getattr(ns, "sincos", None):
        motor = _parse_sincos(ns.sincos)
    else:
        system = load_system(ns.system)
    return CliRequest(
        subcommand=ns.subcommand,
        motor_angles=motor,
        system=system,
        point=_parse_point(ns.point) if getattr(ns, "point", None) else None,
        retain=getattr(ns, "retain", "q0"),
        fmt=ns.format,
        precision=ns.precision,
        include_extraneous=getattr(ns, "include_extraneous", False),
        grid=getattr(ns, "grid", 24),
    )


def _system_of(request: CliRequest) -> QuadricSystem:
    if request.system is not None:
        return request.system
    return build_3rrrr_system(request.motor_angles)


def _emit(request: CliRequest, payload: dict, text_lines) -> None:
    if request.fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines():
            print(line)


def _run_solve(request: CliRequest) -> int:
    report = fdp_report(request.motor_angles,
                        include_extraneous=request.include_extraneous,
                        precision=request.precision)

    def lines():
        sols = report["solutions"]
        n = sum(1 for s in sols if not s["extraneous"])
        yield f"solutions: {n} non-extraneous" + (
            f" (+{len(sols) - n} extraneous)" if len(sols) > n else "")
        yield "      q0                      q1                      q2                      q3                      max residual"
        for i, s in enumerate(sols, 1):
            res = max(abs(r) for r in s["residuals"])
            tag = "  [extraneous]" if s["extraneous"] else ""
            yield ("  {:2d}  ".format(i)
                   + "  ".join(f"{v:<22s}" for v in s["q"])
                   + f"  {res:.2e}{tag}")
        yield "retained-coordinate roots:"
        for r in report["roots"]:
            mult = f" (multiplicity {r['multiplicity']})" if r["multiplicity"] > 1 else ""
            yield f"  {r['value']}{mult}"
        diag = report["diagnostics"]
        yield ("diagnostics: " + ", ".join(f"{k}={v}" for k, v in diag.items()))

    _emit(request, report, lines)
    return 0


def _run_dixon_det(request: CliRequest) -> int:
    system = _system_of(request)
    if system.retained != request.retain:
        system = system.retarget(request.retain)
    det = UnivariatePoly.from_multipoly(dixon_determinant(system),
                                        request.retain)
    coeffs = [f"{c.numerator}/{c.denominator}" for c in det.coeffs]
    payload = {"retained": request.retain, "degree": det.degree(),
               "determinant_coeffs": coeffs}

    def lines():
        yield f"det in {request.retain}, degree {det.degree()}, coefficients (ascending):"
        for k, c in enumerate(coeffs):
            yield f"  {request.retain}^{k}: {c}"

    _emit(request, payload, lines)
    return 0


def _run_verify(request: CliRequest) -> int:
    system = _system_of(request)
    report = verify_point(system, request.point)
    pt = request.point.to_floats()
    near_extraneous = any(
        max(abs(a - b) for a, b in zip(pt, rho.to_floats())) < 1e-6
        for rho in extraneous_set())
    residuals = [str(r) if report.exact else f"{float(r):.{request.precision}g}"
                 for r in report.residuals]
    payload = {
        "point": [str(v) for v in request.point.as_tuple()],
        "residuals": residuals,
        "max_residual": report.max_residual,
        "exact": report.exact,
        "is_solution": report.is_solution(),
        "extraneous": near_extraneous,
    }

    def lines():
        yield f"point: {payload['point']}"
        for i, r in enumerate(residuals, 1):
            yield f"  f{i} residual: {r}"
        yield f"max residual: {report.max_residual:.3e}" + (
            " (exact arithmetic)" if report.exact else "")
        yield f"solution: {payload['is_solution']}   extraneous: {near_extraneous}"

    _emit(request, payload, lines)
    return 0


def _run_oracle(request: CliRequest) -> int:
    system = _system_of(request)
    cfg = OracleConfig(grid_resolution=request.grid)
    points = oracle_solve(system, cfg)
    rho = [r.to_floats() for r in extraneous_set()]

    def near_rho(q):
        return any(max(abs(a - b) for a, b in zip(q.to_floats(), r)) < 1e-6
                   for r in rho)

    payload = {"count": len(points),
               "points": [{
                   "q": [f"{v:.{request.precision}g}" for v in q.to_floats()],
                   "extraneous": near_rho(q),
               } for q in points]}

    def lines():
        yield f"oracle found {len(points)} real points"
        for item in payload["points"]:
            tag = "  [extraneous]" if item["extraneous"] else ""
            yield "  " + "  ".join(f"{v:<22s}" for v in item["q"]) + tag

    _emit(request, payload, lines)
    return 0


_RUNNERS = {
    "solve": _run_solve,
    "dixon-det": _run_dixon_det,
    "verify": _run_verify,
    "oracle": _run_oracle,
}


def run(request: CliRequest) -> int:
    """Execute a parsed request; returns the process exit code."""
    try:
        return _RUNNERS[request.subcommand](request)
    except DegenerateSystem as exc:
        _error("degenerate-system", exc)
        return 2
    except CrossCheckMismatch as exc:
        _error("cross-check-mismatch", exc)
        return 1
    except (NotDivisible, ValueError, KeyError, OSError) as exc:
        _error("bad-input", exc)
        return 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        request = _request_from_ns(ns)
    except (ValueError, ZeroDivisionError, OSError,
            json.JSONDecodeError) as exc:
        _error("bad-input", exc)
        return 1
    return run(request)


if __name__ == "__main__":
    raise SystemExit(main())
