"""Command-line front end.

Exit status: 0 success, 1 domain error, 2 usage error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import report
from .deflection import (
    DEFAULT_ROOT_TOL,
    DeflectionResult,
    Method,
    deflection_closed_form,
    deflection_root_find,
)
from .errors import DeflectionError
from .model import ModelParams, PhysicalConstants, derive
from .ode import IntegrationSettings, Mode, deflection_from_trajectory, integrate_orbit, trajectory_csv

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3


class _UsageError(Exception):
    pass


@dataclass(frozen=True)
class DeltaSpec:
    """``value`` in metres, or in solar radii when ``in_radii`` is set."""

    value: float
    in_radii: bool

    def params(self, constants: PhysicalConstants) -> ModelParams:
        if self.in_radii:
            return ModelParams.from_multiple(self.value, constants)
        return ModelParams(self.value, constants.r_sun, constants)

    def label(self) -> str:
        return f"{self.value:g}R" if self.in_radii else f"{self.value:g} m"


def parse_delta(text: str) -> DeltaSpec:
    """``1.3R`` is 1.3 solar radii; a bare number is metres."""
    raw = text.strip()
    in_radii = raw[-1:] in ("R", "r")
    number = raw[:-1] if in_radii else raw
    try:
        value = float(number)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid delta {text!r} (use e.g. 1.3R or 9.04e8)")
    if not (math.isfinite(value) and value >= 0.0):
        raise argparse.ArgumentTypeError(f"delta must be finite and >= 0, got {text!r}")
    return DeltaSpec(value, in_radii)


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(value) and value > 0.0):
        raise argparse.ArgumentTypeError(f"must be finite and > 0, got {text!r}")
    return value


def _multiples(text: str) -> list[float]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if item[-1:] in ("R", "r"):
            item = item[:-1]
        try:
            value = float(item)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid delta multiple {item!r}")
        if not (math.isfinite(value) and value >= 0.0):
            raise argparse.ArgumentTypeError(f"delta multiple must be >= 0, got {item!r}")
        out.append(value)
    if len(set(out)) != len(out):
        raise argparse.ArgumentTypeError(f"duplicate delta multiples in {text!r}")
    return out


def _m_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid m range {text!r} (use LO:HI, e.g. -7:9)")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty m range {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("constants and output")
    g.add_argument("--mu", type=_positive, default=None, metavar="M3_PER_S2",
                   help="solar gravitational parameter GM in m^3/s^2 (default IAU 1.32712440018e20)")
    g.add_argument("--c", type=_positive, default=None, metavar="M_PER_S",
                   help="speed of light in m/s (default 299792458)")
    g.add_argument("--r-sun", type=_positive, default=None, metavar="M",
                   help="solar radius, also the impact radius R, in m (default IAU 6.957e8)")
    g.add_argument("--format", choices=("text", "csv", "json"), default="text",
                   help="output format, unitless choice (default text)")
    g.add_argument("--units", choices=("arcsec", "rad"), default="arcsec",
                   help="angle unit for deflect and verify output: arcsec or rad (default arcsec)")
    g.add_argument("--out", default=None, metavar="PATH",
                   help="write output to PATH instead of standard output")

    delta_help = "space quantum delta: N R for N solar radii (e.g. 1.3R) or bare metres"
    parser = argparse.ArgumentParser(
        prog="qgdeflect",
        description="Solar-limb light deflection under the corrected force GMm/(r(r - delta)).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("deflect", parents=[common], help="deflection for one delta and branch")
    p.add_argument("--delta", type=parse_delta, default=parse_delta("1.3R"), help=delta_help + " (default 1.3R)")
    p.add_argument("--m", type=int, default=1, help="branch index, dimensionless integer (default 1)")
    p.add_argument("--method", choices=[m.value for m in Method], default="closed_form",
                   help="computation route, unitless choice (default closed_form)")
    p.add_argument("--tol", type=_positive, default=DEFAULT_ROOT_TOL, metavar="RAD",
                   help="root-finding tolerance in rad (default 1e-15)")

    p = sub.add_parser("table1", parents=[common], help="deflection at m = 1 versus delta")
    p.add_argument("--deltas", type=_multiples, default=[1.0, 1.3, 2.0], metavar="LIST",
                   help="comma-separated delta values in solar radii (default 1,1.3,2)")
    p.add_argument("--obs-value", type=float, default=report.OBSERVATION.value, metavar="ARCSEC",
                   help="observed deflection in arcsec (default 1.775)")
    p.add_argument("--obs-uncertainty", type=_positive, default=report.OBSERVATION.uncertainty,
                   metavar="ARCSEC", help="observation uncertainty in arcsec (default 0.019)")

    for name, text in (("table2", "branch sweep annotated with published values"),
                       ("sweep-m", "branch sweep for any delta")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--delta", type=parse_delta, default=parse_delta("1.3R"),
                       help=delta_help + " (default 1.3R)")
        p.add_argument("--m-range", type=_m_range, default=(-7, 9), metavar="LO:HI",
                       help="inclusive branch range, dimensionless; write --m-range=-7:9 (default -7:9)")

    p = sub.add_parser("verify", parents=[common],
                       help="cross-check closed form, root finding and ODE integration")
    p.add_argument("--delta", type=parse_delta, action="append", default=None,
                   help=delta_help + "; repeatable (default R, 1.3R, 2R)")
    p.add_argument("--m", type=int, default=1, help="branch index, dimensionless integer (default 1)")
    p.add_argument("--tol", type=float, default=1e-6, metavar="REL",
                   help="allowed pairwise relative gap, dimensionless (default 1e-6)")
    p.add_argument("--root-tol", type=_positive, default=DEFAULT_ROOT_TOL, metavar="RAD",
                   help="root-finding tolerance in rad (default 1e-15)")
    p.add_argument("--rel-tol", type=_positive, default=1e-12, metavar="REL",
                   help="ODE relative error tolerance, dimensionless (default 1e-12)")

    p = sub.add_parser("dump-trajectory", parents=[common],
                       help="integrate the orbit and write accepted steps as CSV")
    p.add_argument("--delta", type=parse_delta, default=parse_delta("1.3R"), help=delta_help + " (default 1.3R)")
    p.add_argument("--mode", choices=[m.value for m in Mode], default="linearized",
                   help="orbit equation to integrate, unitless choice (default linearized)")
    p.add_argument("--rel-tol", type=_positive, default=1e-12, metavar="REL",
                   help="relative error tolerance, dimensionless (default 1e-12)")
    p.add_argument("--abs-tol", type=_positive, default=None, metavar="PER_M",
                   help="absolute error tolerance on u in 1/m (default 1e-12 * D)")
    p.add_argument("--max-step", type=_positive, default=0.01, metavar="RAD",
                   help="largest step in rad (default 0.01)")
    p.add_argument("--theta-max", type=_positive, default=4 * math.pi, metavar="RAD",
                   help="integration limit in rad (default 4 pi)")
    return parser


def _constants(args) -> PhysicalConstants:
    base = PhysicalConstants()
    return PhysicalConstants(
        mu_sun=args.mu if args.mu is not None else base.mu_sun,
        c=args.c if args.c is not None else base.c,
        r_sun=args.r_sun if args.r_sun is not None else base.r_sun,
    )


def _angle(result: DeflectionResult, units: str) -> float:
    return result.delta_theta_arcsec if units == "arcsec" else result.delta_theta


def _fmt_angle(value: float, units: str) -> str:
    return f"{value:#.4g} arcsec" if units == "arcsec" else f"{value:.10g} rad"


def _compute(params: ModelParams, m: int, method: str, tol: float,
             rel_tol: float = 1e-12) -> DeflectionResult:
    dq = derive(params)
    method = Method(method)
    if method is Method.CLOSED_FORM:
        return deflection_closed_form(dq, m)
    if method is Method.ROOT_FIND:
        return deflection_root_find(dq, m, tol)
    if m != 1:
        raise DeflectionError("ODE integration only resolves the physical branch m = 1")
    mode = Mode.EXACT if method is Method.ODE_EXACT else Mode.LINEARIZED
    traj = integrate_orbit(dq, params, IntegrationSettings(mode=mode, rel_tol=rel_tol))
    return deflection_from_trajectory(traj)


def _result_dict(result: DeflectionResult) -> dict:
    return {
        "branch_m": result.branch_m,
        "phi_rad": result.phi,
        "delta_theta_rad": result.delta_theta,
        "delta_theta_arcsec": result.delta_theta_arcsec,
        "method": result.method.value,
    }


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def cmd_deflect(args) -> tuple[int, str]:
    params = args.delta.params(_constants(args))
    result = _compute(params, args.m, args.method, args.tol)
    if args.format == "json":
        return EXIT_OK, json.dumps(_result_dict(result), indent=2) + "\n"
    if args.format == "csv":
        d = _result_dict(result)
        return EXIT_OK, _csv(list(d), [list(d.values())])
    line = (f"delta_theta = {_fmt_angle(_angle(result, args.units), args.units)}"
            f"  (m = {result.branch_m}, delta = {args.delta.label()}, {result.method.value})\n")
    return EXIT_OK, line


def cmd_table1(args) -> tuple[int, str]:
    constants = _constants(args)
    obs = report.Observation(args.obs_value, args.obs_uncertainty)
    table = report.table1(ModelParams(0.0, constants.r_sun, constants), args.deltas, obs)
    return EXIT_OK, report.render(table, args.format).decode("utf-8")


def cmd_table2(args) -> tuple[int, str]:
    params = args.delta.params(_constants(args))
    return EXIT_OK, report.render(report.table2(params, args.m_range), args.format).decode("utf-8")


def cmd_sweep_m(args) -> tuple[int, str]:
    params = args.delta.params(_constants(args))
    return EXIT_OK, report.render(report.sweep_m(params, args.m_range), args.format).decode("utf-8")


_VERIFY_METHODS = (Method.CLOSED_FORM, Method.ROOT_FIND, Method.ODE_LINEARIZED)


def run_verification(deltas, constants, m=1, tol=1e-6, root_tol=DEFAULT_ROOT_TOL, rel_tol=1e-12):
    """Run every method for each delta; return ``(cases, passed)``."""
    cases = []
    passed = True
    for spec in deltas:
        params = spec.params(constants)
        results = {meth: _compute(params, m, meth, root_tol, rel_tol) for meth in _VERIFY_METHODS}
        ref = abs(results[Method.CLOSED_FORM].delta_theta)
        gaps = {}
        for i, a in enumerate(_VERIFY_METHODS):
            for b in _VERIFY_METHODS[i + 1:]:
                gaps[f"{a.value}-{b.value}"] = abs(results[a].delta_theta - results[b].delta_theta) / ref
        ok = all(g <= tol for g in gaps.values())
        passed &= ok
        cases.append({"delta": spec.label(), "results": results, "gaps": gaps, "ok": ok})
    return cases, passed


def cmd_verify(args) -> tuple[int, str]:
    deltas = args.delta or [parse_delta("1R"), parse_delta("1.3R"), parse_delta("2R")]
    if not (math.isfinite(args.tol) and args.tol >= 0.0):
        raise _UsageError(f"--tol must be finite and >= 0, got {args.tol!r}")
    cases, passed = run_verification(deltas, _constants(args), args.m, args.tol,
                                     args.root_tol, args.rel_tol)
    status = EXIT_OK if passed else EXIT_VERIFY
    units = args.units
    if args.format == "json":
        doc = {
            "tolerance": args.tol,
            "units": units,
            "passed": passed,
            "cases": [
                {
                    "delta": c["delta"],
                    "delta_theta": {k.value: _angle(r, units) for k, r in c["results"].items()},
                    "relative_gaps": c["gaps"],
                    "ok": c["ok"],
                }
                for c in cases
            ],
        }
        return status, json.dumps(doc, indent=2) + "\n"
    if args.format == "csv":
        header = ["delta", *(f"{m.value}_{units}" for m in _VERIFY_METHODS),
                  *(f"gap_{k}" for k in cases[0]["gaps"]), "ok"]
        rows = [[c["delta"], *(_angle(c["results"][m], units) for m in _VERIFY_METHODS),
                 *c["gaps"].values(), "true" if c["ok"] else "false"] for c in cases]
        return status, _csv(header, rows)
    lines = [f"verification (m = {args.m}, relative tolerance {args.tol:g})"]
    for c in cases:
        lines.append(f"delta = {c['delta']}")
        for meth, r in c["results"].items():
            value = _angle(r, units)
            text = f"{value:.12g} arcsec" if units == "arcsec" else f"{value:.12g} rad"
            lines.append(f"  {meth.value:<15} {text}")
        for pair, gap in c["gaps"].items():
            lines.append(f"  gap {pair:<30} {gap:.3e}")
        lines.append(f"  {'ok' if c['ok'] else 'FAILED'}")
    lines.append("PASS" if passed else "FAIL")
    return status, "\n".join(lines) + "\n"


def cmd_dump_trajectory(args) -> tuple[int, str]:
    if args.format != "text" and args.format != "csv":
        raise _UsageError("dump-trajectory writes CSV only")
    params = args.delta.params(_constants(args))
    settings = IntegrationSettings(
        mode=args.mode, rel_tol=args.rel_tol, abs_tol=args.abs_tol,
        max_step=args.max_step, theta_max=args.theta_max,
    )
    return EXIT_OK, trajectory_csv(integrate_orbit(derive(params), params, settings))


_COMMANDS = {
    "deflect": cmd_deflect,
    "table1": cmd_table1,
    "table2": cmd_table2,
    "sweep-m": cmd_sweep_m,
    "verify": cmd_verify,
    "dump-trajectory": cmd_dump_trajectory,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status, text = _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"qgdeflect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DeflectionError, ValueError) as exc:
        print(f"qgdeflect: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    data = text.encode("utf-8")
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
