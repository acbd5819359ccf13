"""Small-step execution of rule programs over the storage graph.

Every accepted step leaves the graph satisfying all storage invariants; a
step that would break one is rejected atomically.  Each primitive
modification is recorded in an event trace whose records carry the canonical
hash of the graph after that modification, so runs can be compared and
replayed structurally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .canon import canonical_hash
from .graph import StorageGraph, validate_graph
from .rules import (Cut, Delete, Halt, Link, Move, New, Output, Program,
                    Relabel, RewriteRule, match_pattern)

OP_KINDS = ("ADD_NODE", "REMOVE_NODE", "ADD_EDGE", "REMOVE_EDGE",
            "RELABEL", "MOVE_ACTIVE", "OUTPUT", "HALT")


class Status(Enum):
    RUNNING = "Running"
    HALTED = "Halted"
    STUCK = "Stuck"


class InvariantBreach(RuntimeError):
    """A rule application would leave the graph invalid; state unchanged."""

    def __init__(self, rule: str, detail: str):
        super().__init__(f"rule {rule}: {detail}")
        self.rule = rule
        self.detail = detail


@dataclass(frozen=True)
class PrimOp:
    """One primitive storage modification."""

    kind: str
    args: tuple = ()

    def format_args(self) -> str:
        if self.kind in ("ADD_NODE", "RELABEL"):
            nid, label = self.args
            return f"{nid}:{label}"
        if self.kind in ("ADD_EDGE", "REMOVE_EDGE"):
            u, v = self.args
            return f"{u},{v}"
        if self.kind in ("REMOVE_NODE", "MOVE_ACTIVE"):
            return str(self.args[0])
        if self.kind == "OUTPUT":
            return json.dumps(self.args[0])
        if self.kind == "HALT":
            return self.args[0] if self.args else ""
        raise ValueError(f"unknown op kind {self.kind}")

    @staticmethod
    def parse(kind: str, text: str) -> "PrimOp":
        if kind in ("ADD_NODE", "RELABEL"):
            nid, label = text.split(":", 1)
            return PrimOp(kind, (int(nid), label))
        if kind in ("ADD_EDGE", "REMOVE_EDGE"):
            u, v = text.split(",")
            return PrimOp(kind, (int(u), int(v)))
        if kind in ("REMOVE_NODE", "MOVE_ACTIVE"):
            return PrimOp(kind, (int(text),))
        if kind == "OUTPUT":
            return PrimOp(kind, (json.loads(text),))
        if kind == "HALT":
            return PrimOp(kind, (text,) if text else ())
        raise ValueError(f"unknown op kind {kind}")


def add_node(nid: int, label: str) -> PrimOp:
    return PrimOp("ADD_NODE", (nid, label))


def add_edge(u: int, v: int) -> PrimOp:
    return PrimOp("ADD_EDGE", (min(u, v), max(u, v)))


def remove_edge(u: int, v: int) -> PrimOp:
    return PrimOp("REMOVE_EDGE", (min(u, v), max(u, v)))


@dataclass(frozen=True)
class TraceRecord:
    step: int
    rule: str
    op: PrimOp
    hash: str = ""

    def format(self) -> str:
        return (f"step={self.step} rule={self.rule} op={self.op.kind}"
                f" args={self.op.format_args()} hash={self.hash}")

    @staticmethod
    def parse(line: str) -> "TraceRecord":
        fields = {}
        key = None
        for chunk in line.strip().split(" "):
            if "=" in chunk and chunk.split("=", 1)[0] in ("step", "rule", "op", "args", "hash"):
                key, val = chunk.split("=", 1)
                fields[key] = val
            elif key is not None:
                fields[key] += " " + chunk  # quoted output strings may hold spaces
        return TraceRecord(
            step=int(fields["step"]),
            rule=fields.get("rule", ""),
            op=PrimOp.parse(fields["op"], fields.get("args", "")),
            hash=fields.get("hash", ""),
        )


def format_trace(records: list[TraceRecord]) -> str:
    return "".join(r.format() + "\n" for r in records)


def parse_trace(text: str) -> list[TraceRecord]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(TraceRecord.parse(line))
    return out


@dataclass
class MachineState:
    graph: StorageGraph
    output: str = ""
    step_count: int = 0
    status: Status = Status.RUNNING

    def copy(self) -> "MachineState":
        return MachineState(self.graph.copy(), self.output, self.step_count, self.status)


def apply_rule(state: MachineState, rule: RewriteRule, binding: dict[str, int],
               degree_bound: int = 3) -> tuple[MachineState, list[PrimOp]]:
    """Apply the rule's actions in order; atomic on invariant breach.

    New nodes get an edge to the active node as part of their creation;
    deletes drop every incident edge.  Actions after a halt are ignored.
    """
    nxt = state.copy()
    g = nxt.graph
    env = dict(binding)
    ops: list[PrimOp] = []

    def need(var: str) -> int:
        if var not in env:
            raise InvariantBreach(rule.name, f"unbound variable {var}")
        nid = env[var]
        if nid not in g.nodes:
            raise InvariantBreach(rule.name, f"variable {var} refers to deleted node {nid}")
        return nid

    try:
        for act in rule.actions:
            if isinstance(act, New):
                nid = g.fresh_id()
                g.add_node(nid, act.label)
                ops.append(add_node(nid, act.label))
                g.add_edge(g.active, nid)
                ops.append(add_edge(g.active, nid))
                env[act.var] = nid
            elif isinstance(act, Delete):
                nid = need(act.var)
                for u, v in g.remove_node(nid):
                    ops.append(remove_edge(u, v))
                ops.append(PrimOp("REMOVE_NODE", (nid,)))
                del env[act.var]
            elif isinstance(act, Link):
                u, v = need(act.a), need(act.b)
                g.add_edge(u, v)
                ops.append(add_edge(u, v))
            elif isinstance(act, Cut):
                u, v = need(act.a), need(act.b)
                g.remove_edge(u, v)
                ops.append(remove_edge(u, v))
            elif isinstance(act, Relabel):
                nid = need(act.var)
                g.nodes[nid] = act.label
                ops.append(PrimOp("RELABEL", (nid, act.label)))
            elif isinstance(act, Output):
                nxt.output += act.text
                ops.append(PrimOp("OUTPUT", (act.text,)))
            elif isinstance(act, Move):
                g.active = need(act.var)
                ops.append(PrimOp("MOVE_ACTIVE", (g.active,)))
            elif isinstance(act, Halt):
                nxt.status = Status.HALTED
                ops.append(PrimOp("HALT"))
                break
            else:
                raise InvariantBreach(rule.name, f"unknown action {act!r}")
    except ValueError as exc:  # structural errors from graph mutation
        raise InvariantBreach(rule.name, str(exc)) from exc

    report = validate_graph(g, degree_bound)
    if not report.ok:
        raise InvariantBreach(rule.name, str(report))
    nxt.step_count += 1
    return nxt, ops


def step(state: MachineState, program: Program) -> tuple[MachineState, list[PrimOp], Optional[str]]:
    """One machine step: first rule in program order that matches is applied.

    Returns (state, ops, rule name); a state with no matching rule comes
    back Stuck with no ops.
    """
    if state.status is not Status.RUNNING:
        raise RuntimeError(f"machine is {state.status.value}, not Running")
    for rule in program.rules:
        binding = match_pattern(state.graph, rule.pattern)
        if binding is not None:
            nxt, ops = apply_rule(state, rule, binding, program.degree_bound)
            return nxt, ops, rule.name
    stuck = state.copy()
    stuck.status = Status.STUCK
    return stuck, [], None


@dataclass
class RunResult:
    state: MachineState
    trace: list[TraceRecord]
    step_limit: bool = False


def run(initial: MachineState, program: Program, max_steps: int = 10_000,
        with_hashes: bool = True) -> RunResult:
    """Iterate steps until halt, stuck, or the step budget runs out.

    Bulk callers that only need the op sequence can skip the per-step
    canonical hashes.
    """
    state = initial
    trace: list[TraceRecord] = []
    steps = 0
    while state.status is Status.RUNNING and steps < max_steps:
        state, ops, rule_name = step(state, program)
        if rule_name is None:
            break
        steps += 1
        # hash after the whole step: every record of the step shares it
        post = canonical_hash(state.graph) if with_hashes else ""
        for op in ops:
            trace.append(TraceRecord(state.step_count, rule_name, op, post))
    limit = state.status is Status.RUNNING and steps >= max_steps
    return RunResult(state, trace, step_limit=limit)
