"""Command-line entry point.

Machine-readable records go to stdout; human summaries and diagnostics go to
stderr.  Exit codes: 0 success/PASS, 1 conformance or replay FAIL, 2 usage or
config errors, 3 invariant breach.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

from .kum.graph import StorageGraph
from .kum.machine import (InvariantBreach, MachineState, Status, format_trace,
                          parse_trace)
from .kum.machine import run as run_machine
from .lang.parser import parse_graph, parse_program
from .lang.printer import print_graph
from .realize import (DEFAULT_WINDOW, compile_scenario, conformance_check,
                      map_events)
from .sim.engine import init_scenario, run_sim
from .sim.eventlog import read_event_log, replay_event_log, write_event_log
from .sim.params import ConfigError
from .sim.render import render_pgm, render_ppm, render_svg
from .sim.scenario import SimConfig, snapshot_dumps, state_snapshot

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BREACH = 3

DEFAULT_SEED = 42


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _write_out(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text, encoding="utf-8")


def _resolve_seed(seed: int) -> int:
    if seed == 0:  # entropy mode, explicitly non-reproducible
        chosen = secrets.randbits(32) or 1
        print(f"seed 0 requests entropy; using seed {chosen}", file=sys.stderr)
        return chosen
    return seed


def _load_program(path: str):
    res = parse_program(_read(path), path)
    for d in res.diagnostics:
        print(d, file=sys.stderr)
    if not res.ok:
        raise CliError(f"{path}: parse failed")
    return res.program


def _load_graph(path: str, degree_bound: int = 3) -> StorageGraph:
    res = parse_graph(_read(path), path, degree_bound)
    for d in res.diagnostics:
        print(d, file=sys.stderr)
    if not res.ok:
        raise CliError(f"{path}: parse failed")
    return res.graph


def _load_scenario(path: str) -> SimConfig:
    try:
        return SimConfig.from_dict(json.loads(_read(path)))
    except (json.JSONDecodeError, ConfigError) as exc:
        raise CliError(f"{path}: {exc}") from exc


def cmd_run(args) -> int:
    program = _load_program(args.program)
    graph = _load_graph(args.graph, program.degree_bound)
    try:
        result = run_machine(MachineState(graph), program, args.max_steps)
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    _write_out(format_trace(result.trace), args.out)
    state = result.state
    note = "step limit reached" if result.step_limit else state.status.value
    print(f"{note}; steps={state.step_count} ops={len(result.trace)}"
          f" output={state.output!r}", file=sys.stderr)
    return EXIT_OK


def cmd_sim(args) -> int:
    config = _load_scenario(args.scenario)
    if args.seed is not None:
        config.seed = _resolve_seed(args.seed)
    state = init_scenario(config)
    run_sim(state, args.ticks)
    _write_out(write_event_log(state, config), args.out)
    if args.snapshot:
        Path(args.snapshot).write_text(
            snapshot_dumps(state_snapshot(state)), encoding="utf-8")
    print(f"{state.status} at tick {state.tick}; events={len(state.events)}",
          file=sys.stderr)
    return EXIT_OK


def cmd_realize(args) -> int:
    graph = _load_graph(args.graph)
    seed = _resolve_seed(args.seed if args.seed is not None else DEFAULT_SEED)
    expected = parse_trace(_read(args.expected)) if args.expected else None
    scenario = compile_scenario(graph, seed=seed,
                                expected=[r.op for r in expected] if expected else None)
    state = init_scenario(scenario.config)
    run_sim(state, args.ticks)
    log = write_event_log(state, scenario.config, scenario.label_map.labeler())
    _write_out(log, args.out)
    if expected is None:
        print(f"{state.status} at tick {state.tick}; events={len(state.events)}",
              file=sys.stderr)
        return EXIT_OK
    ops = map_events(state.events, scenario.label_map)
    initial = StorageGraph({graph.active: graph.nodes[graph.active]}, set(), graph.active)
    report = conformance_check([r.op for r in expected], ops,
                               window=args.window, expected_initial=initial)
    if args.format == "records":
        sys.stdout.write(report.records())
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_stats(args) -> int:
    from .sim.engine import degree_stats
    text = _read(args.input)
    if text.startswith("#scenario"):
        from .realize import replay_ops
        config, ticks, _ = read_event_log(text)
        state = init_scenario(config)
        run_sim(state, ticks)
        from .sim.engine import extract_graph
        graph, _ = extract_graph(state)
    else:
        res = parse_graph(text, args.input)
        for d in res.diagnostics:
            print(d, file=sys.stderr)
        if not res.ok:
            raise CliError(f"{args.input}: parse failed")
        graph = res.graph
    stats = degree_stats(graph)
    hist = ",".join(f"{k}:{v}" for k, v in stats["histogram"].items())
    _write_out(
        f"nodes={stats['nodes']} edges={stats['edges']}"
        f" avg_degree={stats['avg_degree']:.6g} max_degree={stats['max_degree']}"
        f" histogram={hist}\n", args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        snap = json.loads(_read(args.snapshot))
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.snapshot}: {exc}") from exc
    out = Path(args.out)
    if out.suffix == ".svg":
        out.write_text(render_svg(snap), encoding="utf-8")
    elif out.suffix == ".ppm":
        out.write_bytes(render_ppm(snap))
    elif out.suffix == ".pgm":
        out.write_bytes(render_pgm(snap))
    else:
        raise CliError(f"unsupported render format {out.suffix!r} (use .svg/.ppm/.pgm)")
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def cmd_replay(args) -> int:
    text = _read(args.log)
    try:
        reproduced = replay_event_log(text)
    except ConfigError as exc:
        raise CliError(str(exc)) from exc
    if reproduced == text:
        print("replay reproduced the log byte-exactly", file=sys.stderr)
        return EXIT_OK
    print("replay DIVERGED from the recorded log", file=sys.stderr)
    sys.stdout.write(reproduced)
    return EXIT_FAIL


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="physarum",
        description="Pointer-machine programs, foraging simulation, and conformance checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a rule program on a storage graph")
    p.add_argument("program", help=".kum program file")
    p.add_argument("graph", help=".kg graph file")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--out", help="also write the trace here")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("sim", help="run a foraging scenario")
    p.add_argument("scenario", help="scenario config (JSON)")
    p.add_argument("--ticks", type=int, default=1000)
    p.add_argument("--seed", type=int, help="override the scenario seed (0 = entropy)")
    p.add_argument("--out", help="also write the event log here")
    p.add_argument("--snapshot", help="write a full state snapshot here (JSON)")
    p.set_defaults(fn=cmd_sim)

    p = sub.add_parser("realize", help="compile a graph to a scenario, simulate, check conformance")
    p.add_argument("graph", help=".kg data graph")
    p.add_argument("--expected", help="expected trace file to check against")
    p.add_argument("--seed", type=int, help=f"simulation seed (default {DEFAULT_SEED}, 0 = entropy)")
    p.add_argument("--ticks", type=int, default=1500)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--out", help="also write the event log here")
    p.add_argument("--format", choices=("text", "records"), default="text",
                   help="conformance report style: human text on stderr, or"
                        " line-delimited records on stdout too")
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("stats", help="degree statistics of a graph or event log")
    p.add_argument("input", help=".kg file or event log")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("render", help="render a state snapshot")
    p.add_argument("snapshot", help="snapshot JSON from `sim --snapshot`")
    p.add_argument("-o", "--out", required=True, help="output path (.svg/.ppm/.pgm)")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("replay", help="re-run a recorded event log and compare")
    p.add_argument("log", help="event log with embedded scenario")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("serve", help="start the interactive steering server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8700)
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH


if __name__ == "__main__":
    sys.exit(main())
