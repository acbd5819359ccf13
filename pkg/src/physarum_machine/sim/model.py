"""Simulation entities: flakes, tips, veins, graph nodes, and events."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..kum.machine import PrimOp
from .params import ConfigError, FLOW_SPEED_RANGE, REVERSAL_PERIOD_RANGE

STATIONARY = "stationary"
DYNAMIC = "dynamic"
DYNAMIC_LABEL = "DYN"


@dataclass
class Flake:
    id: int
    x: int
    y: int
    color: str
    mass: float
    occupied: bool = False
    node: Optional[int] = None  # sim-graph node once occupied

    @property
    def exhausted(self) -> bool:
        return self.mass <= 0


@dataclass
class SimGraphNode:
    id: int
    kind: str  # stationary | dynamic
    x: int
    y: int
    flake: Optional[int] = None  # flake id for stationary nodes


@dataclass
class Tip:
    id: int
    x: float
    y: float
    heading: tuple[float, float]
    origin_node: int
    path: list[tuple[int, int]]  # visited cells, starts at the origin's cell
    alive: bool = True
    starve: int = 0

    @property
    def cell(self) -> tuple[int, int]:
        return (int(self.x), int(self.y))


@dataclass
class Vein:
    id: int
    a: int
    b: int
    polyline: list[tuple[int, int]]
    flow_speed: float       # mm/s, sampled in [1, 3]
    reversal_period: float  # s, sampled in [60, 180]
    phase: float            # s
    leaf_starve: int = 0
    cycle_starve: int = 0

    def __post_init__(self):
        lo, hi = FLOW_SPEED_RANGE
        if not lo <= self.flow_speed <= hi:
            raise ConfigError(f"vein flow speed {self.flow_speed} outside [{lo}, {hi}] mm/s")
        lo, hi = REVERSAL_PERIOD_RANGE
        if not lo <= self.reversal_period <= hi:
            raise ConfigError(f"vein reversal period {self.reversal_period} outside [{lo}, {hi}] s")

    def endpoints(self) -> tuple[int, int]:
        return (self.a, self.b)

    def other(self, node: int) -> int:
        return self.b if node == self.a else self.a

    @property
    def length(self) -> int:
        return len(self.polyline)


def flow_sign(vein: Vein, t: float) -> int:
    """Square-wave shuttle flow direction at time t seconds.

    The sign flips every reversal_period seconds starting from the vein's
    phase; the two directions of the undirected edge alternate in one stream.
    """
    if t < 0:
        raise ValueError("time must be >= 0")
    return 1 if math.floor((t + vein.phase) / vein.reversal_period) % 2 == 0 else -1


# -- events -------------------------------------------------------------------

OCCUPY = "OCCUPY"
BRANCH = "BRANCH"
VEIN_COMPLETE = "VEIN_COMPLETE"
VEIN_RETRACT = "VEIN_RETRACT"
NODE_ABANDONED = "NODE_ABANDONED"
ACTIVE_MOVED = "ACTIVE_MOVED"
HALT = "HALT"
INTERVENTION = "INTERVENTION"

EVENT_KINDS = (OCCUPY, BRANCH, VEIN_COMPLETE, VEIN_RETRACT, NODE_ABANDONED,
               ACTIVE_MOVED, HALT, INTERVENTION)


@dataclass(frozen=True)
class SimEvent:
    """One emergent happening, stamped with its tick.

    The payload holds sim-level operands (node ids, flake color, position);
    map_event translates it into primitive graph operations.
    """

    tick: int
    kind: str
    payload: tuple[tuple[str, object], ...] = ()

    def get(self, key: str, default=None):
        for k, v in self.payload:
            if k == key:
                return v
        return default


def event(tick: int, kind: str, **payload) -> SimEvent:
    return SimEvent(tick, kind, tuple(sorted(payload.items())))


def default_labeler(color: str) -> str:
    """Sim-level node label for a flake color (the realization layer may
    substitute the program's own labels)."""
    return color


def map_event(ev: SimEvent, labeler: Callable[[str], str] = default_labeler) -> list[PrimOp]:
    """Primitive graph operations realized by one emergent event."""
    if ev.kind == OCCUPY:
        node = ev.get("node")
        origin = ev.get("origin")
        label = labeler(ev.get("color"))
        return [PrimOp("ADD_NODE", (node, label)),
                PrimOp("ADD_EDGE", (min(origin, node), max(origin, node)))]
    if ev.kind == BRANCH:
        return [PrimOp("ADD_NODE", (ev.get("node"), DYNAMIC_LABEL))]
    if ev.kind == VEIN_COMPLETE:
        a, b = ev.get("a"), ev.get("b")
        return [PrimOp("ADD_EDGE", (min(a, b), max(a, b)))]
    if ev.kind == VEIN_RETRACT:
        a, b = ev.get("a"), ev.get("b")
        return [PrimOp("REMOVE_EDGE", (min(a, b), max(a, b)))]
    if ev.kind == NODE_ABANDONED:
        return [PrimOp("REMOVE_NODE", (ev.get("node"),))]
    if ev.kind == ACTIVE_MOVED:
        return [PrimOp("MOVE_ACTIVE", (ev.get("node"),))]
    if ev.kind == HALT:
        return [PrimOp("HALT", (ev.get("mode"),))]
    if ev.kind == INTERVENTION:
        return []
    raise ValueError(f"unknown event kind {ev.kind}")


def format_event(ev: SimEvent, labeler: Callable[[str], str] = default_labeler) -> str:
    """Line-delimited record: the event followed by its primitive ops."""
    meta = " ".join(f"{k}={v}" for k, v in ev.payload)
    ops = map_event(ev, labeler)
    opstr = " ".join(f"op={op.kind}[{op.format_args()}]" for op in ops)
    parts = [f"tick={ev.tick}", f"src={ev.kind}"]
    if meta:
        parts.append(meta)
    if opstr:
        parts.append(opstr)
    return " ".join(parts)
