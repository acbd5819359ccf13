"""Bridge between the abstract machine and the simulator.

A data graph compiles into a spatial scenario (nodes become flakes, labels
become food colorings, the plasmodium starts at the active node).  Emergent
events map back to primitive graph ops, and the conformance checker aligns
them against an expected trace: operands resolve through unlabeled junction
nodes (a vein from a to b may route via branch points), and bounded surplus
is tolerated between matches because foraging emits incidental structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .kum.canon import canonical_hash
from .kum.graph import StorageGraph
from .kum.machine import PrimOp
from .sim.model import DYNAMIC_LABEL, SimEvent, map_event
from .sim.params import COLORS, SimParams
from .sim.scenario import SimConfig

DEFAULT_WINDOW = 4


class TooManyLabels(ValueError):
    """More stationary labels than color channels."""


class LayoutError(ValueError):
    """Node coordinates missing, colliding, or out of bounds."""


class NodeUnknown(KeyError):
    pass


@dataclass(frozen=True)
class LabelColorMap:
    """Injective stationary-label -> flake-color assignment."""

    mapping: tuple[tuple[str, str], ...]

    def __post_init__(self):
        colors = [c for _, c in self.mapping]
        if len(set(colors)) != len(colors):
            raise TooManyLabels("label-color map must be injective")
        for c in colors:
            if c not in COLORS:
                raise TooManyLabels(f"unknown color {c!r}")
        if len(self.mapping) > len(COLORS):
            raise TooManyLabels(f"at most {len(COLORS)} stationary labels supported")

    @staticmethod
    def auto(labels: Iterable[str]) -> "LabelColorMap":
        ordered = sorted(set(labels))
        if len(ordered) > len(COLORS):
            raise TooManyLabels(
                f"{len(ordered)} labels exceed the {len(COLORS)} color channels")
        return LabelColorMap(tuple(zip(ordered, COLORS)))

    def color(self, label: str) -> str:
        for lab, col in self.mapping:
            if lab == label:
                return col
        raise NodeUnknown(f"label {label!r} not in the color map")

    def label(self, color: str) -> str:
        for lab, col in self.mapping:
            if col == color:
                return lab
        return DYNAMIC_LABEL if color == DYNAMIC_LABEL else color

    def labeler(self):
        """Color -> label function for map_events / extract_graph."""
        return self.label


@dataclass
class Scenario:
    """Compiled simulator input plus the realization bookkeeping."""

    config: SimConfig
    label_map: LabelColorMap
    positions: dict[int, tuple[int, int]]  # abstract node id -> cell
    start_node: int
    expected: Optional[list[PrimOp]] = None


def _circle_layout(ids: Sequence[int], width: int, height: int) -> dict[int, tuple[int, int]]:
    cx, cy = width // 2, height // 2
    radius = 0.38 * min(width, height)
    out: dict[int, tuple[int, int]] = {}
    for i, nid in enumerate(ids):
        ang = 2 * math.pi * i / max(1, len(ids))
        out[nid] = (int(round(cx + radius * math.cos(ang))),
                    int(round(cy + radius * math.sin(ang))))
    return out


# long-range plumes; data nodes persist instead of depleting away
LOADING_PARAMS = SimParams(decay=2e-4, spawn_burst=1, flake_mass=1e6)


def compile_scenario(graph: StorageGraph,
                     layout: Optional[dict[int, tuple[int, int]]] = None,
                     label_map: Optional[LabelColorMap] = None,
                     seed: int = 42,
                     arena: tuple[int, int] = (64, 64),
                     params: Optional[SimParams] = None,
                     expected: Optional[list[PrimOp]] = None,
                     intervention_spacing: int = 400) -> Scenario:
    """Turn a data graph into a foraging scenario.

    Every node becomes a flake colored by its label; the plasmodium starts on
    the active node's flake.  Expected-trace additions of nodes outside the
    data graph become scheduled flake placements (fresh nutrients dropped in
    during the run).
    """
    width, height = arena
    if label_map is None:
        wanted = set(graph.nodes.values())
        for op in expected or ():
            if op.kind == "ADD_NODE" and op.args[1] != DYNAMIC_LABEL:
                wanted.add(op.args[1])
        label_map = LabelColorMap.auto(wanted)
    ids = sorted(graph.nodes)
    if layout is None:
        positions = _circle_layout(ids, width, height)
    else:
        positions = {nid: tuple(layout[nid]) for nid in ids if nid in layout}
        missing = [nid for nid in ids if nid not in positions]
        if missing:
            raise LayoutError(f"layout misses nodes {missing}")
    extra_ids: list[int] = []
    if expected:
        for op in expected:
            if op.kind == "ADD_NODE" and op.args[0] not in graph.nodes:
                extra_ids.append(op.args[0])
        if layout is None:
            everyone = ids + extra_ids
            positions = _circle_layout(everyone, width, height)
        else:
            missing = [nid for nid in extra_ids if nid not in layout]
            if missing:
                raise LayoutError(f"layout misses scheduled nodes {missing}")
            for nid in extra_ids:
                positions[nid] = tuple(layout[nid])
    cells = list(positions.values())
    if len(set(cells)) != len(cells):
        raise LayoutError("two nodes share a cell")
    for x, y in cells:
        if not (0 <= x < width and 0 <= y < height):
            raise LayoutError(f"cell ({x},{y}) outside the {width}x{height} arena")

    if params is None:
        params = LOADING_PARAMS
    flakes = [(positions[nid][0], positions[nid][1],
               label_map.color(graph.nodes[nid]), params.flake_mass)
              for nid in ids]
    interventions: list[tuple[int, dict]] = []
    for k, nid in enumerate(extra_ids):
        label = next(op.args[1] for op in expected
                     if op.kind == "ADD_NODE" and op.args[0] == nid)
        interventions.append((intervention_spacing * (k + 1), {
            "kind": "PlaceFlake",
            "x": positions[nid][0], "y": positions[nid][1],
            "color": label_map.color(label),
            "mass": params.flake_mass,
        }))
    config = SimConfig(
        width=width, height=height, seed=seed,
        start=positions[graph.active],
        params=params,
        flakes=flakes,
        interventions=interventions,
    )
    return Scenario(config, label_map, positions, graph.active, expected)


def map_events(events: Sequence[SimEvent],
               label_map: Optional[LabelColorMap] = None) -> list[PrimOp]:
    """Emergent events as primitive graph operations, in tick order."""
    labeler = label_map.labeler() if label_map is not None else (lambda c: c)
    out: list[PrimOp] = []
    for ev in events:
        out.extend(map_event(ev, labeler))
    return out


# -- conformance ---------------------------------------------------------------

def _replay_op(g: StorageGraph, op: PrimOp) -> None:
    if op.kind == "ADD_NODE":
        g.add_node(op.args[0], op.args[1])
    elif op.kind == "REMOVE_NODE":
        g.remove_node(op.args[0])
    elif op.kind == "ADD_EDGE":
        g.add_edge(*op.args)
    elif op.kind == "REMOVE_EDGE":
        g.remove_edge(*op.args)
    elif op.kind == "RELABEL":
        g.nodes[op.args[0]] = op.args[1]
    elif op.kind == "MOVE_ACTIVE":
        g.active = op.args[0]
    # OUTPUT / HALT leave the graph alone


def replay_ops(initial: StorageGraph, ops: Iterable[PrimOp]) -> StorageGraph:
    g = initial.copy()
    for op in ops:
        _replay_op(g, op)
    return g


def _anchors(g: StorageGraph, start: int, bound: set[int],
             skip_edge: Optional[tuple[int, int]] = None) -> set[int]:
    """Bound nodes reachable from start through unbound interior nodes."""
    if start in bound:
        return {start}
    seen = {start}
    frontier = [start]
    out: set[int] = set()
    while frontier:
        nxt: list[int] = []
        for v in frontier:
            for w in g.neighbors(v):
                if skip_edge and {v, w} == set(skip_edge):
                    continue
                if w in seen:
                    continue
                seen.add(w)
                if w in bound:
                    out.add(w)
                else:
                    nxt.append(w)
        frontier = nxt
    return out


def smooth_junctions(g: StorageGraph) -> StorageGraph:
    """Contract nodes labeled as junctions, keeping the labeled skeleton.

    The result has an edge between two labeled nodes iff some vein path joins
    them through junction nodes only.  If the active node is a junction, the
    smallest labeled node it touches becomes active.
    """
    keep = sorted(v for v, lab in g.nodes.items() if lab != DYNAMIC_LABEL)
    bound = set(keep)
    out = StorageGraph({v: g.nodes[v] for v in keep}, set(), g.active)
    for v in keep:
        for w in sorted(_anchors_via_dyn(g, v, bound)):
            if w != v:
                out.edges.add((min(v, w), max(v, w)))
    if g.active not in bound:
        reach = sorted(_anchors_via_dyn(g, g.active, bound) - {g.active})
        out.active = reach[0] if reach else (keep[0] if keep else g.active)
    return out


def _anchors_via_dyn(g: StorageGraph, start: int, bound: set[int]) -> set[int]:
    seen = {start}
    frontier = [start]
    out: set[int] = set()
    while frontier:
        nxt: list[int] = []
        for v in frontier:
            for w in g.neighbors(v):
                if w in seen:
                    continue
                seen.add(w)
                if w in bound:
                    out.add(w)
                else:
                    nxt.append(w)
        frontier = nxt
    return out


@dataclass
class ConformanceReport:
    window: int
    matched: list[tuple[int, int]] = field(default_factory=list)
    unmatched_expected: list[int] = field(default_factory=list)
    surplus: int = 0
    max_gap: int = 0
    graphs_isomorphic: bool = False
    expected_hash: str = ""
    emergent_hash: str = ""

    @property
    def passed(self) -> bool:
        return (not self.unmatched_expected and self.max_gap <= self.window
                and self.graphs_isomorphic)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lines = [
            f"conformance: {verdict}",
            f"matched ops: {len(self.matched)}",
            f"unmatched expected ops: {len(self.unmatched_expected)}"
            + (f" at indices {self.unmatched_expected}" if self.unmatched_expected else ""),
            f"surplus emergent ops: {self.surplus} (max between matches {self.max_gap},"
            f" window {self.window})",
            f"final graphs isomorphic: {self.graphs_isomorphic}"
            f" (expected {self.expected_hash} vs emergent {self.emergent_hash})",
        ]
        return "\n".join(lines)

    def records(self) -> str:
        lines = [f"verdict={'PASS' if self.passed else 'FAIL'} window={self.window}"
                 f" matched={len(self.matched)} unmatched={len(self.unmatched_expected)}"
                 f" surplus={self.surplus} max_gap={self.max_gap}"
                 f" iso={int(self.graphs_isomorphic)}"]
        for ei, mi in self.matched:
            lines.append(f"match expected={ei} emergent={mi}")
        for ei in self.unmatched_expected:
            lines.append(f"unmatched expected={ei}")
        return "\n".join(lines) + "\n"


def _op_matches(exp: PrimOp, em: PrimOp, binding: dict[int, int],
                emergent_graph: StorageGraph) -> Optional[dict[int, int]]:
    """Binding updates if exp corresponds to em, else None."""
    if exp.kind != em.kind:
        return None
    bound = set(binding.values())
    if exp.kind == "ADD_NODE":
        xid, lab = exp.args
        mid, mlab = em.args
        if lab != mlab or xid in binding or mid in bound:
            return None
        return {xid: mid}
    if exp.kind == "REMOVE_NODE":
        if binding.get(exp.args[0]) != em.args[0]:
            return None
        return {}
    if exp.kind in ("ADD_EDGE", "REMOVE_EDGE"):
        u, v = exp.args
        if u not in binding or v not in binding:
            return None
        skip = em.args if exp.kind == "REMOVE_EDGE" else None
        au = _anchors(emergent_graph, em.args[0], bound, skip)
        av = _anchors(emergent_graph, em.args[1], bound, skip)
        bu, bv = binding[u], binding[v]
        if (bu in au and bv in av) or (bu in av and bv in au):
            return {}
        return None
    if exp.kind == "MOVE_ACTIVE":
        target = binding.get(exp.args[0])
        if target is None:
            return None
        if em.args[0] == target or target in _anchors(emergent_graph, em.args[0], bound):
            return {}
        return None
    if exp.kind == "RELABEL":
        if binding.get(exp.args[0]) != em.args[0] or exp.args[1] != em.args[1]:
            return None
        return {}
    if exp.kind == "OUTPUT":
        return {} if exp.args == em.args else None
    if exp.kind == "HALT":
        if exp.args and exp.args != em.args:
            return None
        return {}
    return None


def conformance_check(expected: Sequence[PrimOp], emergent: Sequence[PrimOp],
                      window: int = DEFAULT_WINDOW,
                      expected_initial: Optional[StorageGraph] = None,
                      emergent_initial: Optional[StorageGraph] = None,
                      binding: Optional[dict[int, int]] = None) -> ConformanceReport:
    """Greedy order-preserving alignment of an expected abstract trace
    against the emergent one, then a final-graph isomorphism check.

    The default initial graphs are the single-node starts: expected active
    node bound to emergent node 1 (the inoculation point).
    """
    if expected_initial is None:
        expected_initial = StorageGraph({0: DYNAMIC_LABEL}, set(), 0)
    if emergent_initial is None:
        emergent_initial = StorageGraph({1: expected_initial.nodes[expected_initial.active]},
                                        set(), 1)
    if binding is None:
        binding = {expected_initial.active: emergent_initial.active}

    report = ConformanceReport(window=window)
    g = emergent_initial.copy()
    bind = dict(binding)
    ei = 0
    gap = 0
    for mi, em in enumerate(emergent):
        matched = False
        if ei < len(expected):
            updates = _op_matches(expected[ei], em, bind, g)
            if updates is not None:
                if expected[ei].kind == "REMOVE_NODE":
                    bind.pop(expected[ei].args[0], None)
                bind.update(updates)
                report.matched.append((ei, mi))
                ei += 1
                matched = True
        _replay_op(g, em)
        if matched:
            gap = 0
        else:
            gap += 1
            if ei < len(expected):  # trailing surplus is judged by the final graph
                report.surplus += 1
                report.max_gap = max(report.max_gap, gap)
    report.unmatched_expected = list(range(ei, len(expected)))

    expected_final = replay_ops(expected_initial, expected)
    emergent_final = smooth_junctions(g)
    report.expected_hash = canonical_hash(expected_final)
    report.emergent_hash = canonical_hash(emergent_final)
    report.graphs_isomorphic = report.expected_hash == report.emergent_hash
    return report


def solution_component(g: StorageGraph, initial: int) -> StorageGraph:
    """Connected component of the initial node (the machine's answer)."""
    if initial not in g.nodes:
        raise NodeUnknown(f"node {initial} not in the graph")
    keep = g.component(initial)
    return StorageGraph(
        {v: g.nodes[v] for v in sorted(keep)},
        {e for e in g.edges if e[0] in keep and e[1] in keep},
        g.active if g.active in keep else initial,
    )
