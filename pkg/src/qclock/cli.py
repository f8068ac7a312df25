"""Command-line front-end emitting versioned CSV/JSON tables.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
2 usage error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .cost import CANONICAL_LABELS, canonical_cost, mean_cost_bound
from .measurement import (
    measurement_times,
    mutual_information_bits,
    posterior,
    wrap_angle,
)
from .sim import KINDS, SimConfig, run_simulation, scan_n, state_for
from .solver import SolverConvergenceError
from .states import energy_stats

SCHEMA_VERSION = "1"


class UsageError(ValueError):
    """Invalid arguments detected after parsing."""


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _echo(command: str, params: dict) -> str:
    parts = [command] + [f"{k}={v}" for k, v in params.items() if v is not None]
    return " ".join(parts)


def _write_csv(command, params, header, rows, scalars=None):
    lines = [f"# schema_version={SCHEMA_VERSION}", f"# command={_echo(command, params)}"]
    for name, value in (scalars or {}).items():
        lines.append(f"# {name}={_fmt(value)}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    sys.stdout.write("\n".join(lines) + "\n")


def _write_json(command, params, payload):
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "args": {k: v for k, v in params.items() if v is not None},
        "payload": payload,
    }
    sys.stdout.write(json.dumps(record, indent=2) + "\n")


def _write_gnuplot(path: str, title: str, plot_line: str) -> None:
    datafile = Path(path).with_suffix(".csv").name
    script = (
        f"# companion plot script (schema_version {SCHEMA_VERSION});"
        f" expects the CSV output in '{datafile}'\n"
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set title '{title}'\n"
        f"{plot_line.format(datafile=datafile)}\n"
    )
    Path(path).write_text(script, encoding="utf-8")
    print(f"wrote gnuplot script: {path}", file=sys.stderr)


def _require_cost(args) -> str:
    if args.kind == "optimal" and args.cost is None:
        raise UsageError("--cost is required when --kind is 'optimal'")
    return args.cost or "sin2"


def cmd_state(args) -> int:
    cost_label = _require_cost(args)
    state = state_for(args.kind, args.n, cost_label)
    stats = energy_stats(state)
    cost_fn = canonical_cost(cost_label, max(1, args.n))
    mean_cost = mean_cost_bound(state, cost_fn)
    params = {"kind": args.kind, "n": args.n, "cost": cost_label}
    if args.format == "json":
        _write_json(
            "state",
            params,
            {
                "amplitudes": state.amplitudes.tolist(),
                "mean_energy": stats.mean_energy,
                "energy_stddev": stats.energy_stddev,
                "resolution_bound": stats.resolution_bound,
                "mean_cost": mean_cost,
            },
        )
    else:
        _write_csv(
            "state",
            params,
            ["m", "amplitude"],
            list(enumerate(state.amplitudes)),
            scalars={
                "mean_energy": stats.mean_energy,
                "energy_stddev": stats.energy_stddev,
                "resolution_bound": stats.resolution_bound,
                "mean_cost": mean_cost,
            },
        )
    return 0


def cmd_posterior(args) -> int:
    cost_label = args.cost
    if args.kind == "optimal" and cost_label is None:
        raise UsageError("--cost is required when --kind is 'optimal'")
    grid_size = args.grid if args.grid is not None else 16 * (args.n + 1)
    if grid_size < 4 * (args.n + 1):
        raise UsageError(f"--grid must be at least {4 * (args.n + 1)} for n={args.n}")
    if not 0 <= args.outcome <= args.n:
        raise UsageError(f"--outcome must be in 0..{args.n}")
    state = state_for(args.kind, args.n, cost_label)
    post = posterior(state, args.outcome, grid_size)
    t_r = measurement_times(args.n)[args.outcome]
    offsets = wrap_angle(post.grid - t_r)
    params = {
        "kind": args.kind,
        "n": args.n,
        "outcome": args.outcome,
        "grid": grid_size,
        "cost": cost_label,
    }
    if args.gnuplot:
        _write_gnuplot(
            args.gnuplot,
            f"posterior density, kind={args.kind}, n={args.n}",
            "plot '{datafile}' using 2:3 with lines",
        )
    if args.format == "json":
        _write_json(
            "posterior",
            params,
            {
                "outcome_time": t_r,
                "t": post.grid.tolist(),
                "offset": offsets.tolist(),
                "density": post.density.tolist(),
            },
        )
    else:
        rows = list(zip(post.grid, offsets, post.density))
        _write_csv(
            "posterior",
            params,
            ["t", "offset", "density"],
            rows,
            scalars={"outcome_time": t_r},
        )
    return 0


def _parse_range(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"invalid range {text!r}; expected a:b or a:b:step")
    try:
        numbers = [int(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"invalid range {text!r}: {exc}") from None
    start, stop = numbers[0], numbers[1]
    step = numbers[2] if len(numbers) == 3 else 1
    if start < 1 or stop < start or step < 1:
        raise UsageError(f"invalid range {text!r}: need 1 <= a <= b and step >= 1")
    return list(range(start, stop + 1, step))


def cmd_scan(args) -> int:
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    for kind in kinds:
        if kind not in KINDS:
            raise UsageError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if not kinds:
        raise UsageError("--kinds must name at least one state kind")
    n_values = _parse_range(args.n)
    rows = scan_n(kinds, args.cost, n_values)
    params = {"kinds": ",".join(kinds), "cost": args.cost, "n": args.n}
    header = [
        "n",
        "kind",
        "mean_cost",
        "delta_t",
        "mutual_information_bits",
        "matches_phase_state",
        "error",
    ]
    if args.gnuplot:
        _write_gnuplot(
            args.gnuplot,
            f"mean cost scan, cost={args.cost}",
            "set logscale xy\nplot '{datafile}' using 1:3 with linespoints",
        )
    if args.format == "json":
        payload = [
            {
                "n": row.n_ions,
                "kind": row.kind,
                "mean_cost": row.mean_cost,
                "delta_t": row.delta_t,
                "mutual_information_bits": row.mutual_information_bits,
                "matches_phase_state": row.matches_phase_state,
                "error": row.error,
            }
            for row in rows
        ]
        _write_json("scan", params, payload)
    else:
        table = [
            (
                row.n_ions,
                row.kind,
                row.mean_cost,
                row.delta_t,
                row.mutual_information_bits,
                row.matches_phase_state,
                row.error,
            )
            for row in rows
        ]
        _write_csv("scan", params, header, table)
    if any(row.error for row in rows):
        print("scan: one or more rows failed to converge", file=sys.stderr)
        return 3
    return 0


def cmd_simulate(args) -> int:
    config = SimConfig(args.kind, args.n, args.cost, args.samples, args.seed)
    result = run_simulation(config)
    params = {
        "kind": args.kind,
        "n": args.n,
        "cost": args.cost,
        "samples": args.samples,
        "seed": args.seed,
    }
    if args.format == "csv":
        edges = result.bin_edges
        rows = [
            (edges[i], edges[i + 1], int(count))
            for i, count in enumerate(result.histogram)
        ]
        _write_csv(
            "simulate",
            params,
            ["bin_left", "bin_right", "count"],
            rows,
            scalars={
                "empirical_mean_cost": result.empirical_mean_cost,
                "empirical_delta_t": result.empirical_delta_t,
                "standard_error_cost": result.standard_error_cost,
            },
        )
    else:
        _write_json(
            "simulate",
            params,
            {
                "empirical_mean_cost": result.empirical_mean_cost,
                "empirical_delta_t": result.empirical_delta_t,
                "standard_error_cost": result.standard_error_cost,
                "histogram": {
                    "bin_edges": result.bin_edges.tolist(),
                    "counts": result.histogram.tolist(),
                },
            },
        )
    return 0


def cmd_mutinfo(args) -> int:
    if args.kind == "optimal" and args.cost is None:
        raise UsageError("--cost is required when --kind is 'optimal'")
    state = state_for(args.kind, args.n, args.cost)
    bits = mutual_information_bits(state)
    payload = {
        "bits": bits,
        "nats": bits * float(np.log(2.0)),
        "holevo_bound_bits": float(np.log2(args.n + 1)),
    }
    params = {"kind": args.kind, "n": args.n, "cost": args.cost}
    if args.format == "csv":
        _write_csv(
            "mutinfo",
            params,
            ["bits", "nats", "holevo_bound_bits"],
            [(payload["bits"], payload["nats"], payload["holevo_bound_bits"])],
        )
    else:
        _write_json("mutinfo", params, payload)
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _seed_int(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _add_format(parser, default):
    parser.add_argument("--format", choices=("csv", "json"), default=default)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qclock",
        description="Quantum-clock states, covariant measurement statistics, "
        "and scaling tables (angles in radians, energy unit E_m = m).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", help="amplitudes, energy stats, mean cost")
    p_state.add_argument("--kind", choices=KINDS, required=True)
    p_state.add_argument("--n", type=_positive_int, required=True)
    p_state.add_argument("--cost", choices=CANONICAL_LABELS)
    _add_format(p_state, "csv")
    p_state.set_defaults(handler=cmd_state)

    p_post = sub.add_parser("posterior", help="posterior density for one outcome")
    p_post.add_argument("--kind", choices=KINDS, required=True)
    p_post.add_argument("--n", type=_positive_int, required=True)
    p_post.add_argument("--outcome", type=int, default=0)
    p_post.add_argument("--grid", type=int, default=None)
    p_post.add_argument("--cost", choices=CANONICAL_LABELS)
    p_post.add_argument("--gnuplot", metavar="PATH")
    _add_format(p_post, "csv")
    p_post.set_defaults(handler=cmd_posterior)

    p_scan = sub.add_parser("scan", help="analytic table over a range of N")
    p_scan.add_argument("--kinds", required=True, help="comma-separated state kinds")
    p_scan.add_argument("--cost", choices=CANONICAL_LABELS, required=True)
    p_scan.add_argument("--n", required=True, help="range a:b[:step], inclusive")
    p_scan.add_argument("--gnuplot", metavar="PATH")
    _add_format(p_scan, "csv")
    p_scan.set_defaults(handler=cmd_scan)

    p_sim = sub.add_parser("simulate", help="seeded Monte Carlo clock run")
    p_sim.add_argument("--kind", choices=KINDS, required=True)
    p_sim.add_argument("--n", type=_positive_int, required=True)
    p_sim.add_argument("--cost", choices=CANONICAL_LABELS, required=True)
    p_sim.add_argument("--samples", type=_positive_int, required=True)
    p_sim.add_argument("--seed", type=_seed_int, default=0)
    _add_format(p_sim, "json")
    p_sim.set_defaults(handler=cmd_simulate)

    p_info = sub.add_parser("mutinfo", help="mutual information summary")
    p_info.add_argument(
        "--kind", choices=KINDS + ("basis",), required=True,
        help="state kind; 'basis' is a zero-information diagnostic",
    )
    p_info.add_argument("--n", type=_positive_int, required=True)
    p_info.add_argument("--cost", choices=CANONICAL_LABELS)
    _add_format(p_info, "json")
    p_info.set_defaults(handler=cmd_mutinfo)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
