"""Command-line interface: counting tables, enumeration streams, simulation,
analysis, gadget generation, and a benchmark harness.

Decision answers are printed as ``true``/``false`` on stdout; exit codes only
distinguish *how* a command ended: 0 completed, 2 usage error, 3 missing
file, 4 malformed input, 5 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import counting, dynamics, enumeration
from .errors import (
    BlockparError,
    NetworkSyntaxError,
    ResourceCapError,
    ScheduleFormatError,
)
from .network import BooleanNetwork, format_config, parse_config, parse_network, serialize_network
from .partitions import Partition
from .schedule import PartitionedOrder, parse_schedule, serialize_schedule

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING_FILE = 3
EXIT_BAD_INPUT = 4
EXIT_RESOURCE_CAP = 5

#: Single-run timings (seconds) reported for an earlier pure-Python
#: implementation of the same enumerations on a 2.80 GHz laptop; shown in
#: benchmark output purely as context.
REFERENCE_SECONDS = {
    ("bp", 8): 0.523,
    ("bp", 9): 6.17,
    ("bp", 10): 84.0,
    ("bp", 11): 1272.0,
    ("bp", 12): 19658.0,
    ("bp0", 7): 0.103,
    ("bp0", 8): 0.996,
    ("bp0", 9): 12.2,
    ("bp0", 10): 160.0,
    ("bp0", 11): 2311.0,
    ("bp0", 12): 35366.0,
    ("bpstar", 8): 0.161,
    ("bpstar", 9): 1.51,
    ("bpstar", 10): 16.3,
    ("bpstar", 11): 193.0,
    ("bpstar", 12): 2709.0,
}


@dataclass
class RunReport:
    """Machine-readable record of one CLI invocation."""

    command: str
    parameters: dict
    duration_s: float
    result: dict = field(default_factory=dict)
    exit_status: int = 0


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise BlockparError(f"cannot read {path}: {exc}") from exc


def _load_network(path: str) -> BooleanNetwork:
    return parse_network(_read_file(path))


def _load_schedule(source: str, n: Optional[int] = None) -> PartitionedOrder:
    """Inline JSON when the argument starts with '['; otherwise a file path."""
    text = source if source.lstrip().startswith("[") else _read_file(source)
    return parse_schedule(text, n=n)


def _out_stream(args):
    if getattr(args, "out", None):
        return open(args.out, "w", encoding="utf-8")
    return sys.stdout


# ---------------------------------------------------------------------------
# Commands

def cmd_count(args) -> dict:
    rows = []
    for n in range(1, args.n_max + 1):
        rows.append(
            {
                "n": n,
                "bs": counting.count_bs(n),
                "bp": counting.count_bp(n),
                "bp0": counting.count_bp0(n),
                "bp_star": counting.count_bp_star(n),
                "bs_inter_bp": counting.count_bs_inter_bp(n),
            }
        )
    stream = _out_stream(args)
    try:
        if args.format == "json":
            json.dump(rows, stream, indent=2)
            stream.write("\n")
        else:
            stream.write("n,bs,bp,bp0,bp_star,bs_inter_bp\n")
            for row in rows:
                stream.write(
                    f"{row['n']},{row['bs']},{row['bp']},{row['bp0']},"
                    f"{row['bp_star']},{row['bs_inter_bp']}\n"
                )
    finally:
        if stream is not sys.stdout:
            stream.close()
    return {"rows": len(rows)}


def cmd_enum(args) -> dict:
    partition = Partition.parse(args.partition) if args.partition else None
    if partition is not None and partition.n != args.n:
        raise ScheduleFormatError(
            f"--partition {args.partition} does not sum to n={args.n}"
        )
    stream = _out_stream(args)
    emitted = 0
    try:
        if args.threads > 1 and partition is None and args.limit is None:
            lines = enumeration.sharded_lines(args.n, args.klass, args.threads)
            for line in lines:
                stream.write(line + "\n")
                emitted += 1
        else:
            for mu in enumeration.enum_class(args.n, args.klass, partition):
                stream.write(serialize_schedule(mu) + "\n")
                emitted += 1
                if args.limit is not None and emitted >= args.limit:
                    break
    finally:
        if stream is not sys.stdout:
            stream.close()
    print(f"count={emitted}", file=sys.stderr)
    return {"count": emitted}


def cmd_step(args) -> dict:
    f = _load_network(args.network)
    mu = _load_schedule(args.schedule, n=f.n)
    x = parse_config(args.config, n=f.n)
    image = dynamics.step(f, mu, x, cap=args.cap_substeps)
    print(format_config(image, f.n))
    return {"image": format_config(image, f.n)}


def cmd_trace(args) -> dict:
    f = _load_network(args.network)
    mu = _load_schedule(args.schedule, n=f.n)
    x = parse_config(args.config, n=f.n)
    trace = dynamics.step_trace(f, mu, x, cap=args.cap_substeps)
    for configuration in trace:
        print(format_config(configuration, f.n))
    return {"substeps": len(trace) - 1, "image": format_config(trace[-1], f.n)}


def cmd_dynamics(args) -> dict:
    f = _load_network(args.network)
    mu = _load_schedule(args.schedule, n=f.n)
    graph = dynamics.transition_graph(
        f, mu, cap=args.cap_substeps, workers=args.threads
    )
    stream = _out_stream(args)
    try:
        if args.format == "dot":
            stream.write(dynamics.to_dot(graph))
        else:
            json.dump(dynamics.graph_json(graph), stream, indent=2)
            stream.write("\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return {"cycles": list(graph.cycle_lengths())}


def _answer(value: bool) -> dict:
    print("true" if value else "false")
    return {"answer": value}


def cmd_check(args) -> dict:
    f = _load_network(args.network)
    mu = _load_schedule(args.schedule, n=f.n)
    prop = args.property
    cap = args.cap_substeps
    if prop == "bijective":
        return _answer(dynamics.is_bijective(f, mu, cap=cap))
    if prop == "identity":
        return _answer(dynamics.is_identity(f, mu, cap=cap))
    if prop == "constant":
        image = dynamics.is_constant(f, mu, cap=cap)
        result = _answer(image is not None)
        if image is not None:
            print(format_config(image, f.n))
            result["image"] = format_config(image, f.n)
        return result
    if prop == "fixed-point":
        if args.config:
            x = parse_config(args.config, n=f.n)
            return _answer(dynamics.is_fixed_point(f, mu, x, cap=cap))
        points = dynamics.fixed_points(f, mu, cap=cap)
        result = _answer(bool(points))
        result["count"] = len(points)
        return result
    if prop.startswith("limit-cycle:"):
        k = int(prop.split(":", 1)[1])
        return _answer(dynamics.limit_cycle_exists(f, mu, k, cap=cap))
    if prop == "reach":
        if not args.config or not args.target:
            raise ScheduleFormatError("reach requires --config and --target")
        x = parse_config(args.config, n=f.n)
        y = parse_config(args.target, n=f.n)
        return _answer(dynamics.reachable(f, mu, x, y, cap=cap))
    if prop == "preimage":
        if not args.target:
            raise ScheduleFormatError("preimage requires --target")
        y = parse_config(args.target, n=f.n)
        witness = dynamics.has_preimage(f, mu, y, cap=cap)
        result = _answer(witness is not None)
        if witness is not None:
            print(format_config(witness, f.n))
            result["witness"] = format_config(witness, f.n)
        return result
    if prop == "subdynamics":
        if not args.graph:
            raise ScheduleFormatError("subdynamics requires --graph")
        try:
            graph = json.loads(_read_file(args.graph))
        except json.JSONDecodeError as exc:
            raise ScheduleFormatError(f"bad subdynamics graph JSON: {exc}") from exc
        if not isinstance(graph, dict):
            raise ScheduleFormatError("subdynamics graph must be a JSON object")
        return _answer(dynamics.subdynamics(f, mu, graph, cap=cap))
    raise ScheduleFormatError(f"unknown property {prop!r}")


def cmd_gadget(args) -> dict:
    if args.kind != "counter":
        raise ScheduleFormatError(f"unknown gadget kind {args.kind!r}")
    bundle = dynamics.counter_gadget(args.n)
    network_text = serialize_network(bundle.network)
    schedule_text = serialize_schedule(bundle.schedule)
    summary = {
        "automata": bundle.n_automata,
        "padding": [bundle.padding.start, bundle.padding.stop],
        "counter": [bundle.counter.start, bundle.counter.stop],
        "primes": list(bundle.basis.primes),
        "substeps": bundle.schedule.lcm(),
    }
    if args.out_prefix:
        network_path = args.out_prefix + ".bn"
        schedule_path = args.out_prefix + ".schedule"
        with open(network_path, "w", encoding="utf-8") as handle:
            handle.write(network_text)
        with open(schedule_path, "w", encoding="utf-8") as handle:
            handle.write(schedule_text + "\n")
        print(network_path)
        print(schedule_path)
        summary["files"] = [network_path, schedule_path]
    else:
        json.dump(
            {"network": network_text, "schedule": schedule_text, **summary},
            sys.stdout,
            indent=2,
        )
        print()
    return summary


def cmd_bench(args) -> dict:
    klasses = [k.strip() for k in args.classes.split(",") if k.strip()]
    rows = []
    for klass in klasses:
        if klass not in enumeration.CLASSES:
            raise ScheduleFormatError(f"unknown schedule class {klass!r}")
    for n in range(1, args.n_max + 1):
        for klass in klasses:
            timings = []
            count = None
            for _ in range(args.repeats):
                started = time.perf_counter()
                count = enumeration.class_count(n, klass, workers=args.threads)
                timings.append(time.perf_counter() - started)
            median = statistics.median(timings)
            reference = REFERENCE_SECONDS.get((klass, n))
            rows.append(
                {
                    "class": klass,
                    "n": n,
                    "count": count,
                    "median_s": round(median, 4),
                    "reference_s": reference,
                    "ratio": round(median / reference, 4) if reference else None,
                }
            )
    stream = _out_stream(args)
    try:
        if args.format == "json":
            json.dump(rows, stream, indent=2)
            stream.write("\n")
        else:
            stream.write("class,n,count,median_s,reference_s,ratio\n")
            for row in rows:
                stream.write(
                    f"{row['class']},{row['n']},{row['count']},{row['median_s']},"
                    f"{'' if row['reference_s'] is None else row['reference_s']},"
                    f"{'' if row['ratio'] is None else row['ratio']}\n"
                )
    finally:
        if stream is not sys.stdout:
            stream.close()
    return {"rows": len(rows)}


# ---------------------------------------------------------------------------
# Wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockpar",
        description="Block-parallel update schedules: count, enumerate, simulate, analyse.",
    )
    parser.add_argument("--report", metavar="FILE", help="write a JSON run report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact counts of all schedule classes")
    p.add_argument("n_max", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser("enum", help="stream one schedule per class member")
    p.add_argument("n", type=int)
    p.add_argument("--class", dest="klass", choices=enumeration.CLASSES, default="bp")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--partition", help='restrict to one support, e.g. "2+2+3"')
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(handler=cmd_enum)

    def add_simulation_args(p, config=True, config_required=False):
        p.add_argument("--network", required=True, metavar="FILE")
        p.add_argument("--schedule", required=True, metavar="FILE|JSON")
        if config:
            p.add_argument("--config", metavar="BITS", required=config_required)
        p.add_argument("--cap-substeps", type=int, default=dynamics.DEFAULT_SUBSTEP_CAP)

    p = sub.add_parser("step", help="image of a configuration after one step")
    add_simulation_args(p, config_required=True)
    p.set_defaults(handler=cmd_step)

    p = sub.add_parser("trace", help="configuration after every substep")
    add_simulation_args(p, config_required=True)
    p.set_defaults(handler=cmd_trace)

    p = sub.add_parser("dynamics", help="full transition graph with cycle summary")
    add_simulation_args(p, config=False)
    p.add_argument("--format", choices=("dot", "json"), default="json")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(handler=cmd_dynamics)

    p = sub.add_parser("check", help="decide a dynamical property (prints true/false)")
    p.add_argument(
        "property",
        help="bijective | identity | constant | fixed-point | limit-cycle:K"
        " | reach | preimage | subdynamics",
    )
    add_simulation_args(p)
    p.add_argument("--target", metavar="BITS", help="target configuration (reach/preimage)")
    p.add_argument("--graph", metavar="FILE", help="functional graph JSON (subdynamics)")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("gadget", help="emit a gadget network/schedule pair")
    p.add_argument("kind", choices=("counter",))
    p.add_argument("n", type=int)
    p.add_argument("--out-prefix", metavar="PATH")
    p.set_defaults(handler=cmd_gadget)

    p = sub.add_parser("bench", help="enumeration timings next to reference timings")
    p.add_argument("n_max", type=int)
    p.add_argument("--classes", default="bp,bp0,bpstar")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(handler=cmd_bench)

    parser.add_argument("--seed", type=int, default=None, help="accepted for reproducibility; recorded in reports")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    status = EXIT_OK
    result: dict = {}
    try:
        result = args.handler(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        status = EXIT_MISSING_FILE
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_RESOURCE_CAP
    except (ScheduleFormatError, NetworkSyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_BAD_INPUT
    except BlockparError as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_BAD_INPUT
    if args.report:
        parameters = {
            k: v
            for k, v in vars(args).items()
            if k not in {"handler", "report"} and not callable(v)
        }
        report = RunReport(
            command=args.command,
            parameters=parameters,
            duration_s=round(time.perf_counter() - started, 6),
            result=result,
            exit_status=status,
        )
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(asdict(report), handle, indent=2, default=str)
            handle.write("\n")
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
