"""Command-line front end.

Subcommands: evolve, measure, scan, crossings, ordering, validate. Outputs
are deterministic (no timestamps; 17-significant-digit CSV numbers), so
identical configurations produce byte-identical artifacts.

Exit codes: 0 success, 1 configuration error, 2 validation failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import config, selfcheck
from .analysis import (
    crossing_times,
    events_to_json,
    ordering_table,
    rows_to_json,
    scan_states,
    vanish_time,
)
from .dynamics import DampingProfile, analytic_evolve, channel_factors, integrate
from .errors import ConfigError, NotPositiveAtStart, ValidationFailure
from .measures import csv_header, csv_row, measure_all
from .states import FAMILIES, WernerSpec, from_json_dict, to_json_dict, validate, werner

_DEFAULT_DT = 1e-3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for validation
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wernerdecay", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    profile_args = _Parser(add_help=False)
    profile_args.add_argument("--gamma1", type=float, default=0.1, help="damping rate of qubit 1")
    profile_args.add_argument("--gamma2", type=float, default=0.1, help="damping rate of qubit 2")
    profile_args.add_argument("--nbar1", type=float, default=0.0, help="thermal occupation of reservoir 1")
    profile_args.add_argument("--nbar2", type=float, default=0.0, help="thermal occupation of reservoir 2")

    state_args = _Parser(add_help=False)
    state_args.add_argument("--state", choices=FAMILIES, help="Werner family tag")
    state_args.add_argument("--p", type=float, help="Werner mixing parameter in [0, 1]")
    state_args.add_argument("--state-file", help="JSON density-matrix file instead of --state/--p")

    out_args = _Parser(add_help=False)
    out_args.add_argument("--output", help="output path (default: stdout)")
    out_args.add_argument("--format", choices=("csv", "json"), help="output format")

    route_args = _Parser(add_help=False)
    route_args.add_argument("--oracle", action="store_true", help="force the RK4 integrator route")
    route_args.add_argument("--both", action="store_true", help="also run the integrator and report the deviation")
    route_args.add_argument("--dt", type=float, help="integrator step (only with --oracle/--both or nbar > 0)")

    p_evolve = sub.add_parser("evolve", parents=[profile_args, state_args, out_args, route_args],
                              help="emit the evolved density matrix")
    p_evolve.add_argument("--t", type=float, default=0.0, help="evolution time")

    p_measure = sub.add_parser("measure", parents=[profile_args, state_args, out_args, route_args],
                               help="emit the measure bundle of the evolved state")
    p_measure.add_argument("--t", type=float, default=0.0, help="evolution time")

    p_scan = sub.add_parser("scan", parents=[profile_args, state_args, out_args, route_args],
                            help="emit measures over a uniform time grid")
    p_scan.add_argument("--tmax", type=float, default=20.0)
    p_scan.add_argument("--steps", type=int, default=400)

    p_cross = sub.add_parser("crossings", parents=[profile_args, out_args],
                             help="emit negativity vanishing and pairwise crossing events")
    p_cross.add_argument("--p", type=float, required=True)
    p_cross.add_argument("--tmax", type=float, default=20.0)

    p_order = sub.add_parser("ordering", parents=[profile_args, out_args],
                             help="emit the negativity interval-ordering table")
    p_order.add_argument("--p", type=float, required=True)
    p_order.add_argument("--tmax", type=float, default=20.0)

    sub.add_parser("validate", parents=[out_args],
                   help="run the full invariant suite and report pass/fail")
    return parser


def _profile(args) -> DampingProfile:
    try:
        return DampingProfile(args.gamma1, args.gamma2, args.nbar1, args.nbar2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _config_echo(args, keys) -> dict:
    echo = {"command": args.command}
    for key in keys:
        echo[key] = getattr(args, key.replace("-", "_"))
    return echo


def _load_state(args):
    """Initial state from the single configured source: (label, p, rho)."""
    has_spec = args.state is not None or args.p is not None
    has_file = getattr(args, "state_file", None) is not None
    if has_spec and has_file:
        raise ConfigError("give either --state/--p or --state-file, not both")
    if has_file:
        try:
            with open(args.state_file, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
            rho = from_json_dict(obj)
        except OSError:
            raise
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise OSError(f"unreadable state file {args.state_file}: {exc}") from exc
        return "file", float("nan"), validate(rho)
    if args.state is None or args.p is None:
        raise ConfigError("a state needs both --state and --p (or --state-file)")
    try:
        spec = WernerSpec(args.state, args.p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return spec.family, spec.p, werner(spec)


def _routing(args, profile) -> tuple[str, float]:
    """Pick evolution route: "analytic", "rk4" or "both"."""
    if args.oracle and args.both:
        raise ConfigError("--oracle and --both are mutually exclusive")
    if args.dt is not None and not (args.oracle or args.both or not profile.quiet):
        raise ConfigError("--dt is only meaningful with --oracle/--both or nbar > 0")
    dt = _DEFAULT_DT if args.dt is None else args.dt
    if dt <= 0:
        raise ConfigError(f"--dt must be positive, got {dt}")
    if args.both:
        if not profile.quiet:
            raise ConfigError("--both needs quiet reservoirs (nbar1 = nbar2 = 0)")
        return "both", dt
    if args.oracle or not profile.quiet:
        return "rk4", dt
    return "analytic", dt


def _evolved(rho0, profile, t, route, dt):
    if t < 0:
        raise ConfigError(f"--t must be nonnegative, got {t}")
    if route == "analytic":
        return analytic_evolve(rho0, channel_factors(profile, t)), None
    if route == "rk4":
        if t == 0.0:
            return validate(rho0), None
        return integrate(rho0, profile, t, dt=min(dt, t)), None
    exact = analytic_evolve(rho0, channel_factors(profile, t))
    if t == 0.0:
        return exact, 0.0
    rk4 = integrate(rho0, profile, t, dt=min(dt, t))
    return exact, float(np.abs(exact - rk4).max())


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _cmd_evolve(args) -> int:
    profile = _profile(args)
    label, p, rho0 = _load_state(args)
    route, dt = _routing(args, profile)
    if args.format == "csv":
        raise ConfigError("evolve emits JSON only")
    state, dev = _evolved(rho0, profile, args.t, route, dt)
    obj = {
        "config": _config_echo(args, ("state", "p", "state_file", "gamma1", "gamma2",
                                      "nbar1", "nbar2", "t", "oracle", "both")),
        "label": label,
        "t": args.t,
        "route": route,
        "state": to_json_dict(state),
    }
    if dev is not None:
        obj["oracle_dev"] = dev
    _emit(_json_text(obj), args.output)
    return 0


def _cmd_measure(args) -> int:
    profile = _profile(args)
    label, p, rho0 = _load_state(args)
    route, dt = _routing(args, profile)
    state, dev = _evolved(rho0, profile, args.t, route, dt)
    ms = measure_all(state)
    if args.format == "csv":
        text = csv_header() + "\n" + csv_row(args.t, ms) + "\n"
    else:
        obj = {
            "config": _config_echo(args, ("state", "p", "state_file", "gamma1", "gamma2",
                                          "nbar1", "nbar2", "t", "oracle", "both")),
            "label": label,
            "t": args.t,
            "route": route,
            **ms.as_dict(),
        }
        if dev is not None:
            obj["oracle_dev"] = dev
        text = _json_text(obj)
    _emit(text, args.output)
    return 0


def _cmd_scan(args) -> int:
    profile = _profile(args)
    label, p, rho0 = _load_state(args)
    route, dt = _routing(args, profile)
    if args.tmax <= 0:
        raise ConfigError(f"--tmax must be positive, got {args.tmax}")
    if args.steps < 2:
        raise ConfigError(f"--steps must be at least 2, got {args.steps}")
    table = scan_states([(label, p, rho0)], profile, args.tmax, args.steps,
                        dt=dt, both=(route == "both"),
                        force_oracle=(route == "rk4" and profile.quiet))
    echo = _config_echo(args, ("state", "p", "state_file", "gamma1", "gamma2",
                               "nbar1", "nbar2", "tmax", "steps", "oracle", "both"))
    if args.format == "json":
        text = _json_text({"config": echo, **table.to_json_obj()})
    else:
        comment = " ".join(f"{k}={v}" for k, v in echo.items())
        text = table.to_csv(header_comment=comment)
    _emit(text, args.output)
    return 0


def _cmd_crossings(args) -> int:
    profile = _profile(args)
    if not profile.quiet:
        raise ConfigError("crossings needs quiet reservoirs (nbar1 = nbar2 = 0)")
    if not 0.0 <= args.p <= 1.0:
        raise ConfigError(f"--p must lie in [0, 1], got {args.p}")
    if args.format == "csv":
        raise ConfigError("crossings emits JSON only")
    crossings = []
    for fa, fb in (("X", "Y"), ("X", "Z"), ("Y", "Z")):
        crossings += crossing_times(fa, fb, "n", args.p, profile, tmax=args.tmax)
    crossings.sort(key=lambda e: e.time)
    vanish = []
    for family in FAMILIES:
        try:
            event = vanish_time(family, "n", args.p, profile, tmax=args.tmax)
        except NotPositiveAtStart:
            event = None
        if event is not None:
            vanish.append(event)
    obj = {
        "config": _config_echo(args, ("p", "gamma1", "gamma2", "nbar1", "nbar2", "tmax")),
        "crossings": events_to_json(crossings),
        "vanish": events_to_json(vanish),
    }
    _emit(_json_text(obj), args.output)
    return 0


def _cmd_ordering(args) -> int:
    profile = _profile(args)
    if not profile.quiet:
        raise ConfigError("ordering needs quiet reservoirs (nbar1 = nbar2 = 0)")
    if not 0.0 <= args.p <= 1.0:
        raise ConfigError(f"--p must lie in [0, 1], got {args.p}")
    if args.format == "csv":
        raise ConfigError("ordering emits JSON only")
    crossings = []
    for fa, fb in (("X", "Y"), ("X", "Z"), ("Y", "Z")):
        crossings += crossing_times(fa, fb, "n", args.p, profile, tmax=args.tmax)
    crossings.sort(key=lambda e: e.time)
    rows = ordering_table(args.p, profile, tmax=args.tmax)
    obj = {
        "config": _config_echo(args, ("p", "gamma1", "gamma2", "nbar1", "nbar2", "tmax")),
        "crossings": events_to_json(crossings),
        "rows": rows_to_json(rows),
    }
    _emit(_json_text(obj), args.output)
    return 0


def _cmd_validate(args) -> int:
    if args.format == "csv":
        raise ConfigError("validate emits text or JSON")
    results = []
    failed = None
    for result in selfcheck.iter_checks():
        results.append(result)
        if not result.passed:
            failed = result
            break  # fail loudly on the first violated tolerance
    if args.format == "json":
        _emit(_json_text([r.as_dict() for r in results]), args.output)
    else:
        lines = []
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status}  {r.name}  residual {r.residual:.3e}  tolerance {r.tolerance:.3e}"
            if r.detail:
                line += f"  ({r.detail})"
            lines.append(line)
        lines.append("FAILED" if failed else f"OK ({len(results)} checks)")
        _emit("\n".join(lines) + "\n", args.output)
    return 2 if failed else 0


_COMMANDS = {
    "evolve": _cmd_evolve,
    "measure": _cmd_measure,
    "scan": _cmd_scan,
    "crossings": _cmd_crossings,
    "ordering": _cmd_ordering,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    tol = os.environ.get("WERNER_TOL")
    if tol is None:
        config.reset_validation_tolerance()
    else:
        try:
            config.set_validation_tolerance(float(tol))
        except ValueError as exc:
            sys.stderr.write(f"config error: bad WERNER_TOL: {exc}\n")
            return 1
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    except ValidationFailure as exc:
        sys.stderr.write(f"validation failure: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
