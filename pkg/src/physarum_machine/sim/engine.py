"""Deterministic foraging engine.

Within a tick the stage order is fixed: field update, tips (ascending id),
vein bookkeeping, nutrient depletion, event collection, halting check.  All
randomness comes from two named generator streams (tips, veins) so runs are
fully determined by (config, seed, interventions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..kum.graph import StorageGraph
from .arena import Arena, field_step, flake_plume, make_steady_solver
from .model import (ACTIVE_MOVED, BRANCH, DYNAMIC, DYNAMIC_LABEL, HALT,
                    INTERVENTION, NODE_ABANDONED, OCCUPY, STATIONARY,
                    VEIN_COMPLETE, VEIN_RETRACT, Flake, SimEvent, SimGraphNode,
                    Tip, Vein, default_labeler, event)
from .params import (COMMAND_ESCAPE, COMMAND_FRUCTIFY, COMMAND_SCLEROTIUM,
                     COMMAND_SEARCH, COLORS, FLOW_SPEED_RANGE, MAX_STRANDS,
                     REVERSAL_PERIOD_RANGE, ConfigError, SimParams)
from .scenario import SimConfig


class HaltedError(RuntimeError):
    """Operation requires a running simulation."""


class EmptyPlasmodium(RuntimeError):
    """No sim-graph nodes to extract."""


# 16 compass directions; branch modes must be >= 3 slots (67.5 degrees) apart
N_DIRS = 16
DIRS = tuple(
    (math.cos(2 * math.pi * k / N_DIRS), math.sin(2 * math.pi * k / N_DIRS))
    for k in range(N_DIRS)
)
MIN_MODE_SEP = 3


@dataclass(frozen=True)
class Propagate:
    direction: tuple[float, float]


@dataclass(frozen=True)
class Branch:
    first: tuple[float, float]
    second: tuple[float, float]


@dataclass(frozen=True)
class Occupy:
    flake: int


@dataclass(frozen=True)
class Retract:
    pass


@dataclass
class SimState:
    params: SimParams
    arena: Arena
    seed: int
    flakes: list[Flake] = field(default_factory=list)
    tips: list[Tip] = field(default_factory=list)
    veins: dict[int, Vein] = field(default_factory=dict)
    nodes: dict[int, SimGraphNode] = field(default_factory=dict)
    active_node: int = 1
    high_command: str = COMMAND_SEARCH
    tick: int = 0
    status: str = "Running"
    events: list[SimEvent] = field(default_factory=list)
    events_reported: int = 0  # prefix of events already returned by sim_step
    intervention_log: list[tuple[int, dict]] = field(default_factory=list)
    schedule: dict[int, list[dict]] = field(default_factory=dict)
    # id counters and spawn pacing
    next_node: int = 2
    next_vein: int = 1
    next_tip: int = 1
    spawn_cooldown: int = 0
    spawn_budget: int = 0
    # spatial indexes
    node_cells: dict[tuple[int, int], int] = field(default_factory=dict)
    vein_cells: dict[tuple[int, int], int] = field(default_factory=dict)
    trail_cells: dict[tuple[int, int], int] = field(default_factory=dict)
    tips_rng: np.random.Generator = None  # type: ignore[assignment]
    veins_rng: np.random.Generator = None  # type: ignore[assignment]
    # per-flake steady plumes currently superposed in the chemo field
    plumes: dict[int, np.ndarray] = field(default_factory=dict, repr=False)
    plume_active: set[int] = field(default_factory=set, repr=False)
    _solver: object = field(default=None, repr=False)

    @property
    def running(self) -> bool:
        return self.status == "Running"

    def alive_tips(self) -> list[Tip]:
        return [t for t in self.tips if t.alive]

    def degree(self, node: int) -> int:
        return sum(1 for v in self.veins.values() if node in v.endpoints())

    def vein_neighbors(self, node: int) -> list[int]:
        out = sorted(v.other(node) for v in self.veins.values() if node in v.endpoints())
        return out

    def has_vein(self, a: int, b: int) -> bool:
        return any({v.a, v.b} == {a, b} for v in self.veins.values())

    def flake_by_id(self, fid: int) -> Flake:
        return self.flakes[fid]

    def emit(self, kind: str, **payload) -> SimEvent:
        ev = event(self.tick, kind, **payload)
        self.events.append(ev)
        return ev


def _stream(seed: int, key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(key,))))


def _solver_for(state: SimState):
    if state._solver is None:
        state._solver = make_steady_solver(state.arena.width, state.arena.height, state.params)
    return state._solver


def _plume_on(state: SimState, flake: Flake) -> None:
    """Superpose the flake's steady plume (recruitment signal on)."""
    if not state.params.warmup_steady or state.params.decay <= 0 or flake.mass <= 0:
        return
    if flake.id not in state.plumes:
        state.plumes[flake.id] = flake_plume(
            _solver_for(state), state.arena, flake.x, flake.y, flake.color, state.params)
    if flake.id not in state.plume_active:
        state.arena.chemo += state.plumes[flake.id]
        state.plume_active.add(flake.id)


def _plume_off(state: SimState, flake: Flake) -> None:
    """Remove the flake's plume: the body engulfed it or it is spent."""
    if flake.id in state.plume_active:
        state.arena.chemo -= state.plumes[flake.id]
        np.maximum(state.arena.chemo, 0.0, out=state.arena.chemo)
        state.plume_active.discard(flake.id)


def init_scenario(config: SimConfig) -> SimState:
    """Build the initial state: fields, flakes, and the one-node plasmodium."""
    params = config.params
    arena = Arena(config.width, config.height, params.cell_size, params.dt)
    for region in config.light:
        x0, y0, x1, y1, intensity = region
        if not (arena.in_bounds(x0, y0) and arena.in_bounds(x1, y1)):
            raise ConfigError(f"light region {region} out of bounds")
        if not 0 <= intensity <= 1:
            raise ConfigError(f"light intensity {intensity} outside [0, 1]")
        arena.light[y0:y1 + 1, x0:x1 + 1] = intensity

    state = SimState(params=params, arena=arena, seed=config.seed)
    state.tips_rng = _stream(config.seed, 0)
    state.veins_rng = _stream(config.seed, 1)

    seen: dict[tuple[int, int], int] = {}
    for i, (x, y, color, mass) in enumerate(config.flakes):
        if not arena.in_bounds(x, y):
            raise ConfigError(f"flake {i} at ({x},{y}) out of bounds")
        if (x, y) in seen:
            raise ConfigError(f"flakes {seen[(x, y)]} and {i} share cell ({x},{y})")
        if color not in COLORS:
            raise ConfigError(f"flake {i} has unknown color {color!r}")
        if mass < 0:
            raise ConfigError(f"flake {i} has negative mass")
        seen[(x, y)] = i
        state.flakes.append(Flake(i, x, y, color, mass))

    sx, sy = config.start
    if not arena.in_bounds(sx, sy):
        raise ConfigError(f"start position ({sx},{sy}) out of bounds")
    start_flake = next((f for f in state.flakes if (f.x, f.y) == (sx, sy)), None)
    if start_flake is not None:
        node = SimGraphNode(1, STATIONARY, sx, sy, flake=start_flake.id)
        start_flake.occupied = True
        start_flake.node = 1
    else:
        node = SimGraphNode(1, DYNAMIC, sx, sy)
    state.nodes[1] = node
    state.node_cells[(sx, sy)] = 1
    state.active_node = 1
    state.spawn_budget = params.spawn_burst
    for tick, iv in config.interventions:
        state.schedule.setdefault(tick, []).append(dict(iv))
    # pre-diffuse so gradients exist at tick 0 (experimental setups rest
    # before observation); occupied flakes are covered, hence no plume
    if params.warmup_steady and params.decay > 0:
        for flake in state.flakes:
            if not flake.occupied:
                _plume_on(state, flake)
    for _ in range(params.warmup_ticks):
        field_step(arena, state.flakes, params)
    return state


# -- tip behavior -------------------------------------------------------------

def _score_directions(state: SimState, x: float, y: float,
                      heading: tuple[float, float], noisy: bool = True
                      ) -> tuple[list[float], list[float]]:
    """(total score, chemo differential) per compass direction."""
    p = state.params
    arena = state.arena
    here = arena.chemo_at(x, y)
    light_w = p.light_weight * (p.escape_boost if state.high_command == COMMAND_ESCAPE else 1.0)
    totals: list[float] = []
    diffs: list[float] = []
    for dx, dy in DIRS:
        px, py = x + dx * p.sense_dist, y + dy * p.sense_dist
        chemo = arena.chemo_at(px, py)
        light = arena.light_at(px, py)
        persist = dx * heading[0] + dy * heading[1]
        noise = float(state.tips_rng.uniform(-1.0, 1.0)) if noisy else 0.0
        totals.append(p.chemo_weight * chemo + p.persist_weight * persist
                      - light_w * light + p.noise_weight * noise)
        diffs.append(max(chemo - here, 0.0))
    return totals, diffs


def _chemo_peaks(diffs: list[float]) -> list[int]:
    """Indices that are local maxima on the circular candidate ring."""
    n = len(diffs)
    return [k for k in range(n)
            if diffs[k] > 0
            and diffs[k] >= diffs[(k - 1) % n]
            and diffs[k] >= diffs[(k + 1) % n]]


def _valley(diffs: list[float], i: int, j: int) -> float:
    """Lowest differential on the shorter arc strictly between i and j."""
    n = len(diffs)
    fwd = (j - i) % n
    if fwd <= n - fwd:
        cells = [(i + k) % n for k in range(1, fwd)]
    else:
        cells = [(j + k) % n for k in range(1, n - fwd)]
    return min((diffs[k] for k in cells), default=0.0)


def _flake_near(state: SimState, cell: tuple[int, int], origin: int) -> Optional[Flake]:
    """Live flake within one cell, skipping the origin node's own flake."""
    best: Optional[Flake] = None
    for f in state.flakes:
        if f.mass <= 0 or f.node == origin:
            continue
        if abs(f.x - cell[0]) <= 1 and abs(f.y - cell[1]) <= 1:
            if best is None or f.id < best.id:
                best = f
    return best


def tip_step(tip: Tip, state: SimState):
    """Decide this tick's low-level command for one pseudopodium tip."""
    p = state.params
    flake = _flake_near(state, tip.cell, tip.origin_node)
    if flake is not None:
        return Occupy(flake.id)
    if state.arena.chemo_at(tip.x, tip.y) < p.retract_floor:
        tip.starve += 1
    else:
        tip.starve = 0
    if tip.starve >= p.starve_ticks:
        return Retract()
    totals, diffs = _score_directions(state, tip.x, tip.y, tip.heading)
    origin_cell = _node_cell(state, tip.origin_node)
    home_dist = _cheb(tip.cell, origin_cell)
    if home_dist <= p.leave_radius:
        # outward streaming beats the origin's own plume while leaving home
        ax, ay = tip.x - (origin_cell[0] + 0.5), tip.y - (origin_cell[1] + 0.5)
        norm = math.hypot(ax, ay)
        away = (ax / norm, ay / norm) if norm > 1e-9 else tip.heading
        for k, (dx, dy) in enumerate(DIRS):
            totals[k] += p.leave_weight * (dx * away[0] + dy * away[1])
    if (len(peaks := sorted(_chemo_peaks(diffs), key=lambda k: -diffs[k])) >= 2
            and len(state.alive_tips()) < p.tip_cap
            and home_dist >= p.branch_home_dist
            and diffs[peaks[0]] >= p.branch_floor):
        first = peaks[0]
        for second in peaks[1:]:
            sep = abs(first - second)
            sep = min(sep, N_DIRS - sep)
            if (sep >= MIN_MODE_SEP
                    and diffs[second] >= p.branch_ratio * diffs[first]
                    and _valley(diffs, first, second) <= p.valley_ratio * diffs[second]):
                return Branch(DIRS[first], DIRS[second])
    best = max(range(N_DIRS), key=lambda k: totals[k])
    return Propagate(DIRS[best])


# -- vein plumbing ------------------------------------------------------------

def _register_polyline(state: SimState, vein: Vein) -> None:
    for cell in vein.polyline:
        state.vein_cells.setdefault(cell, vein.id)


def _unregister_polyline(state: SimState, vein: Vein) -> None:
    for cell in vein.polyline:
        if state.vein_cells.get(cell) == vein.id:
            del state.vein_cells[cell]


def _sample_vein(state: SimState, a: int, b: int, polyline: list[tuple[int, int]]) -> Vein:
    speed = float(state.veins_rng.uniform(*FLOW_SPEED_RANGE))
    period = float(state.veins_rng.uniform(*REVERSAL_PERIOD_RANGE))
    phase = float(state.veins_rng.uniform(0.0, period))
    vein = Vein(state.next_vein, a, b, polyline, speed, period, phase)
    state.next_vein += 1
    state.veins[vein.id] = vein
    _register_polyline(state, vein)
    return vein


def _dedup_path(path: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for cell in path:
        if not out or out[-1] != cell:
            out.append(cell)
    return out


def _kill_tip(state: SimState, tip: Tip) -> None:
    tip.alive = False
    for cell in tip.path:
        if state.trail_cells.get(cell) == tip.id:
            del state.trail_cells[cell]


def _new_node(state: SimState, kind: str, x: int, y: int, flake: Optional[int] = None) -> SimGraphNode:
    node = SimGraphNode(state.next_node, kind, x, y, flake=flake)
    state.next_node += 1
    state.nodes[node.id] = node
    state.node_cells[(x, y)] = node.id
    return node


def _move_active(state: SimState, node: int) -> None:
    if node == state.active_node:
        return
    state.active_node = node
    state.spawn_cooldown = 0
    state.spawn_budget = state.params.spawn_burst
    state.emit(ACTIVE_MOVED, node=node)


def _do_occupy(state: SimState, tip: Tip, flake: Flake) -> None:
    path = _dedup_path(tip.path + [(flake.x, flake.y)])
    if flake.node is not None:
        target = flake.node
        if (target == tip.origin_node or state.has_vein(tip.origin_node, target)
                or state.degree(tip.origin_node) >= MAX_STRANDS
                or state.degree(target) >= MAX_STRANDS
                or len(path) < 2):
            _kill_tip(state, tip)
            return
        _kill_tip(state, tip)
        _sample_vein(state, tip.origin_node, target, path)
        state.emit(VEIN_COMPLETE, a=tip.origin_node, b=target)
        return
    if state.degree(tip.origin_node) >= MAX_STRANDS or len(path) < 2:
        _kill_tip(state, tip)
        return
    _kill_tip(state, tip)
    node = _new_node(state, STATIONARY, flake.x, flake.y, flake=flake.id)
    flake.occupied = True
    flake.node = node.id
    _plume_off(state, flake)
    state.emit(OCCUPY, node=node.id, origin=tip.origin_node, flake=flake.id, color=flake.color)
    _sample_vein(state, tip.origin_node, node.id, path)
    _move_active(state, node.id)


def _do_branch(state: SimState, tip: Tip, cmd: Branch) -> bool:
    p = state.params
    path = _dedup_path(tip.path)
    cell = tip.cell
    if (len(path) < p.min_branch_path or cell in state.node_cells
            or cell in state.vein_cells
            or state.degree(tip.origin_node) >= MAX_STRANDS
            or len(state.alive_tips()) + 1 >= p.tip_cap):
        return False
    _kill_tip(state, tip)
    node = _new_node(state, DYNAMIC, cell[0], cell[1])
    state.emit(BRANCH, node=node.id, x=cell[0], y=cell[1])
    _sample_vein(state, tip.origin_node, node.id, path)
    state.emit(VEIN_COMPLETE, a=tip.origin_node, b=node.id)
    for direction in (cmd.first, cmd.second):
        _spawn_tip(state, node.id, direction)
    return True


def _do_fuse(state: SimState, tip: Tip, cell: tuple[int, int]) -> None:
    """Tip ran onto an existing vein: split it at the crossing point."""
    host = state.veins.get(state.vein_cells[cell])
    if host is None or tip.origin_node in host.endpoints():
        # folding back into its own strand adds no topology
        _kill_tip(state, tip)
        return
    if state.degree(tip.origin_node) >= MAX_STRANDS:
        _kill_tip(state, tip)
        return
    try:
        idx = host.polyline.index(cell)
    except ValueError:
        _kill_tip(state, tip)
        return
    if idx <= 0 or idx >= len(host.polyline) - 1:
        _kill_tip(state, tip)
        return
    path = _dedup_path(tip.path + [cell])
    if len(path) < 2:
        _kill_tip(state, tip)
        return
    _kill_tip(state, tip)
    node = _new_node(state, DYNAMIC, cell[0], cell[1])
    state.emit(BRANCH, node=node.id, x=cell[0], y=cell[1])
    _unregister_polyline(state, host)
    del state.veins[host.id]
    state.emit(VEIN_RETRACT, a=host.a, b=host.b)
    _sample_vein(state, host.a, node.id, host.polyline[:idx + 1])
    state.emit(VEIN_COMPLETE, a=host.a, b=node.id)
    _sample_vein(state, node.id, host.b, host.polyline[idx:])
    state.emit(VEIN_COMPLETE, a=node.id, b=host.b)
    _sample_vein(state, tip.origin_node, node.id, path)
    state.emit(VEIN_COMPLETE, a=tip.origin_node, b=node.id)


def _cheb(a: tuple[int, int], b: tuple[int, int]) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _node_cell(state: SimState, node: int) -> tuple[int, int]:
    n = state.nodes[node]
    return (n.x, n.y)


def _spawn_tip(state: SimState, origin: int, direction: tuple[float, float]) -> Tip:
    cell = _node_cell(state, origin)
    tip = Tip(state.next_tip, cell[0] + 0.5, cell[1] + 0.5, direction, origin, [cell])
    state.next_tip += 1
    state.tips.append(tip)
    return tip


def _spawn_from_active(state: SimState) -> None:
    p = state.params
    if state.spawn_cooldown > 0:
        state.spawn_cooldown -= 1
        return
    alive = len(state.alive_tips())
    if alive >= p.tip_cap or state.degree(state.active_node) >= MAX_STRANDS:
        return
    want = max(1, state.spawn_budget)
    want = min(want, p.tip_cap - alive)
    cell = _node_cell(state, state.active_node)
    if p.spawn_floor > 0 and state.high_command != COMMAND_ESCAPE:
        around = max(state.arena.chemo_at(cell[0] + 0.5 + dx * p.sense_dist,
                                          cell[1] + 0.5 + dy * p.sense_dist)
                     for dx, dy in DIRS)
        if around < p.spawn_floor:
            return
    totals, _ = _score_directions(state, cell[0] + 0.5, cell[1] + 0.5, (0.0, 0.0))
    ranked = sorted(range(N_DIRS), key=lambda k: -totals[k])
    chosen: list[int] = []
    for k in ranked:
        step = (int(cell[0] + 0.5 + DIRS[k][0] * 1.5), int(cell[1] + 0.5 + DIRS[k][1] * 1.5))
        if step in state.vein_cells or (step in state.node_cells and step != cell):
            continue
        if any(min(abs(k - c), N_DIRS - abs(k - c)) < MIN_MODE_SEP for c in chosen):
            continue
        chosen.append(k)
        if len(chosen) >= want:
            break
    for k in chosen:
        _spawn_tip(state, state.active_node, DIRS[k])
    if chosen:
        state.spawn_budget = 0
        state.spawn_cooldown = p.spawn_interval


def _advance_tip(state: SimState, tip: Tip, direction: tuple[float, float]) -> None:
    p = state.params
    tip.heading = direction
    step = p.tip_speed_cells
    nx = min(max(tip.x + direction[0] * step, 0.01), state.arena.width - 0.01)
    ny = min(max(tip.y + direction[1] * step, 0.01), state.arena.height - 0.01)
    tip.x, tip.y = nx, ny
    cell = tip.cell
    if cell == tip.path[-1]:
        return
    origin_cell = _node_cell(state, tip.origin_node)
    near_home = _cheb(cell, origin_cell) <= 2
    if cell in state.node_cells and not near_home:
        target = state.node_cells[cell]
        path = _dedup_path(tip.path + [cell])
        if (target != tip.origin_node and not state.has_vein(tip.origin_node, target)
                and state.degree(tip.origin_node) < MAX_STRANDS
                and state.degree(target) < MAX_STRANDS and len(path) >= 2):
            _kill_tip(state, tip)
            _sample_vein(state, tip.origin_node, target, path)
            state.emit(VEIN_COMPLETE, a=tip.origin_node, b=target)
        else:
            _kill_tip(state, tip)
        return
    if cell in state.vein_cells:
        # strict rule keeping polylines apart: meeting another strand means
        # fusing into it (or dissolving); walking along it is never allowed
        tip.path.append(cell)
        _do_fuse(state, tip, cell)
        return
    if cell in state.trail_cells and state.trail_cells[cell] != tip.id:
        _kill_tip(state, tip)
        return
    tip.path.append(cell)
    state.trail_cells.setdefault(cell, tip.id)


# -- vein lifecycle -----------------------------------------------------------

def _retract_vein(state: SimState, vein: Vein) -> None:
    _unregister_polyline(state, vein)
    del state.veins[vein.id]
    state.emit(VEIN_RETRACT, a=vein.a, b=vein.b)
    for node_id in sorted(vein.endpoints()):
        node = state.nodes.get(node_id)
        if node is None or node_id == state.active_node or len(state.nodes) <= 1:
            continue
        if state.degree(node_id) > 0:
            continue
        exhausted = (node.kind == DYNAMIC
                     or (node.flake is not None and state.flakes[node.flake].mass <= 0))
        if exhausted:
            state.emit(NODE_ABANDONED, node=node_id)
            if node.flake is not None:
                state.flakes[node.flake].node = None
                state.flakes[node.flake].occupied = False
            del state.nodes[node_id]
            if state.node_cells.get((node.x, node.y)) == node_id:
                del state.node_cells[(node.x, node.y)]


def _dead_leaf(state: SimState, vein: Vein, alive_origins: set[int]) -> bool:
    for node_id in vein.endpoints():
        if node_id == state.active_node or state.degree(node_id) != 1:
            continue
        node = state.nodes[node_id]
        if node.kind == STATIONARY:
            if node.flake is not None and state.flakes[node.flake].mass <= 0:
                return True
        elif node_id not in alive_origins:
            return True
    return False


def _cycle_candidates(state: SimState) -> set[int]:
    """For every cycle in the vein graph, the vein that should atrophy
    (longest polyline; ties to the higher id)."""
    if not state.veins:
        return set()
    adj: dict[int, list[tuple[int, int]]] = {n: [] for n in state.nodes}
    for vid in sorted(state.veins):
        v = state.veins[vid]
        adj[v.a].append((v.b, vid))
        adj[v.b].append((v.a, vid))
    parent: dict[int, tuple[int, int]] = {}
    seen: set[int] = set()
    tree: set[int] = set()
    extra: list[int] = []
    for root in sorted(state.nodes):
        if root in seen:
            continue
        seen.add(root)
        frontier = [root]
        while frontier:
            cur = frontier.pop(0)
            for nbr, vid in sorted(adj[cur]):
                if vid in tree or vid in extra:
                    continue
                if nbr in seen:
                    extra.append(vid)
                else:
                    seen.add(nbr)
                    parent[nbr] = (cur, vid)
                    tree.add(vid)
                    frontier.append(nbr)
    out: set[int] = set()
    keep_ratio = state.params.cycle_keep_ratio
    for vid in extra:
        v = state.veins[vid]
        cycle = [vid]
        # tree paths from both endpoints up to their common ancestor
        la, lb = [v.a], [v.b]
        pa: list[int] = []
        pb: list[int] = []
        while la[-1] in parent:
            pa.append(parent[la[-1]][1])
            la.append(parent[la[-1]][0])
        while lb[-1] in parent:
            pb.append(parent[lb[-1]][1])
            lb.append(parent[lb[-1]][0])
        shared = set(la) & set(lb)
        meet = next(n for n in la if n in shared)
        cycle += pa[:la.index(meet)] + pb[:lb.index(meet)]
        if len(cycle) < 2:
            continue
        best = max(cycle, key=lambda w: (state.veins[w].length, w))
        rest = [state.veins[w].length for w in cycle if w != best]
        # near-symmetric redundancy is kept; only clearly longer detours atrophy
        if state.veins[best].length >= keep_ratio * (sum(rest) / len(rest)):
            out.add(best)
    return out


def _active_escape(state: SimState) -> None:
    node = state.nodes[state.active_node]
    if node.kind != STATIONARY or node.flake is None:
        return
    if state.flakes[node.flake].mass > 0:
        return
    best: Optional[tuple[int, int]] = None
    for nbr in state.vein_neighbors(state.active_node):
        n = state.nodes[nbr]
        if n.kind == STATIONARY and n.flake is not None and state.flakes[n.flake].mass > 0:
            rank = 0
        elif n.kind == DYNAMIC:
            rank = 1
        else:
            continue  # an exhausted neighbor is no better than staying
        if best is None or (rank, nbr) < best:
            best = (rank, nbr)
    if best is not None:
        _move_active(state, best[1])


# -- the tick -----------------------------------------------------------------

def apply_intervention(state: SimState, iv: dict) -> None:
    """Apply one intervention now and log it for replay."""
    if not state.running:
        raise HaltedError(f"simulation already halted ({state.status})")
    kind = iv.get("kind")
    if kind == "PlaceFlake":
        x, y = int(iv["x"]), int(iv["y"])
        color = iv.get("color", "Uncolored")
        mass = float(iv.get("mass", state.params.flake_mass))
        if not state.arena.in_bounds(x, y):
            raise ConfigError(f"flake position ({x},{y}) out of bounds")
        if color not in COLORS:
            raise ConfigError(f"unknown color {color!r}")
        if mass < 0:
            raise ConfigError("flake mass must be >= 0")
        existing = next((f for f in state.flakes if (f.x, f.y) == (x, y)), None)
        if existing is not None:
            # refresh in place: the node keeps its identity and its edges
            existing.mass += mass
            if not existing.occupied:
                _plume_on(state, existing)
        else:
            flake = Flake(len(state.flakes), x, y, color, mass)
            state.flakes.append(flake)
            node_id = state.node_cells.get((x, y))
            if node_id is not None:
                # dropped onto live plasmodium: occupied immediately
                node = state.nodes[node_id]
                node.kind = STATIONARY
                node.flake = flake.id
                flake.occupied = True
                flake.node = node_id
            else:
                _plume_on(state, flake)
    elif kind == "PlaceLight":
        x0, y0 = int(iv["x0"]), int(iv["y0"])
        x1, y1 = int(iv["x1"]), int(iv["y1"])
        intensity = float(iv.get("intensity", 1.0))
        if not (state.arena.in_bounds(x0, y0) and state.arena.in_bounds(x1, y1)):
            raise ConfigError("light region out of bounds")
        if not 0 <= intensity <= 1:
            raise ConfigError("light intensity outside [0, 1]")
        state.arena.light[y0:y1 + 1, x0:x1 + 1] = intensity
    elif kind == "RemoveLight":
        state.arena.light[:, :] = 0.0
    else:
        raise ConfigError(f"unknown intervention kind {kind!r}")
    state.intervention_log.append((state.tick, dict(iv)))
    state.emit(INTERVENTION, **{("action" if k == "kind" else k): v for k, v in iv.items()})


def halt_status(state: SimState) -> str:
    """Running while any flake still holds mass; otherwise the halt mode."""
    if any(f.mass > 0 for f in state.flakes):
        return "Running"
    ambient = float(np.mean(state.arena.light))
    return "Fructify" if ambient >= state.params.fruct_light else "Sclerotium"


def sim_step(state: SimState) -> list[SimEvent]:
    """Advance one tick; returns every event not yet reported.

    Interventions applied between ticks are stamped with the tick about to
    run, so they ride along with that tick's batch.
    """
    if not state.running:
        raise HaltedError(f"simulation already halted ({state.status})")

    for iv in state.schedule.pop(state.tick, []):
        apply_intervention(state, iv)

    # high-level command for this tick (halting may override at the end)
    cell = _node_cell(state, state.active_node)
    lit = state.arena.light_at(cell[0], cell[1]) >= state.params.escape_light
    state.high_command = COMMAND_ESCAPE if lit else COMMAND_SEARCH

    field_step(state.arena, state.flakes, state.params)

    # tips: cull, spawn, advance in ascending id order
    for tip in state.tips:
        if not tip.alive:
            continue
        origin = state.nodes.get(tip.origin_node)
        if origin is None:
            _kill_tip(state, tip)
            continue
        if (origin.kind == STATIONARY and origin.flake is not None
                and state.flakes[origin.flake].mass <= 0
                and tip.origin_node != state.active_node):
            _kill_tip(state, tip)
    _spawn_from_active(state)
    for tip in [t for t in state.tips if t.alive]:
        cmd = tip_step(tip, state)
        if isinstance(cmd, Occupy):
            _do_occupy(state, tip, state.flakes[cmd.flake])
        elif isinstance(cmd, Retract):
            _kill_tip(state, tip)
        elif isinstance(cmd, Branch):
            if not _do_branch(state, tip, cmd):
                _advance_tip(state, tip, cmd.first)
        else:
            _advance_tip(state, tip, cmd.direction)
    state.tips = [t for t in state.tips if t.alive]

    # the settled body absorbs attractant under itself (tips only sense)
    if state.params.body_consume > 0:
        keep = 1.0 - state.params.body_consume
        for cx, cy in set(state.node_cells) | set(state.vein_cells):
            state.arena.chemo[cy, cx] *= keep

    # veins: escape a starving active node, then retire dead structure
    _active_escape(state)
    alive_origins = {t.origin_node for t in state.alive_tips()}
    retract: list[int] = []
    for vid in sorted(state.veins):
        vein = state.veins[vid]
        if _dead_leaf(state, vein, alive_origins):
            vein.leaf_starve += 1
        else:
            vein.leaf_starve = 0
        if vein.leaf_starve >= state.params.vein_grace:
            retract.append(vid)
    cycle = _cycle_candidates(state)
    for vid in sorted(state.veins):
        vein = state.veins[vid]
        if vid in cycle:
            vein.cycle_starve += 1
        else:
            vein.cycle_starve = 0
        if vein.cycle_starve >= state.params.cycle_grace and vid not in retract:
            retract.append(vid)
    for vid in sorted(retract):
        if vid in state.veins:
            _retract_vein(state, state.veins[vid])

    # nutrient depletion; spent sources stop recruiting
    for flake in state.flakes:
        if flake.occupied and flake.mass > 0:
            flake.mass = max(0.0, flake.mass - state.params.deplete_rate * state.params.dt)
        if flake.mass <= 0:
            _plume_off(state, flake)
            if state.params.sink_exhausted:
                state.arena.chemo[flake.y, flake.x] = 0.0

    mode = halt_status(state)
    if mode != "Running":
        state.status = mode
        state.high_command = COMMAND_FRUCTIFY if mode == "Fructify" else COMMAND_SCLEROTIUM
        state.emit(HALT, mode=mode)
    # one high-level command per tick, settled within the tick
    assert state.high_command in (COMMAND_SEARCH, COMMAND_ESCAPE,
                                  COMMAND_SCLEROTIUM, COMMAND_FRUCTIFY)
    assert state.active_node in state.nodes
    state.tick += 1
    emitted = state.events[state.events_reported:]
    state.events_reported = len(state.events)
    return emitted


def run_sim(state: SimState, ticks: int) -> SimState:
    for _ in range(ticks):
        if not state.running:
            break
        sim_step(state)
    return state


# -- extraction ---------------------------------------------------------------

def extract_graph(state: SimState, labeler: Callable[[str], str] = default_labeler
                  ) -> tuple[StorageGraph, dict[int, dict]]:
    """Storage graph of the current plasmodium plus per-node metadata."""
    if not state.nodes:
        raise EmptyPlasmodium("no sim-graph nodes")
    nodes: dict[int, str] = {}
    meta: dict[int, dict] = {}
    for nid in sorted(state.nodes):
        node = state.nodes[nid]
        if node.kind == STATIONARY and node.flake is not None:
            label = labeler(state.flakes[node.flake].color)
        else:
            label = DYNAMIC_LABEL
        nodes[nid] = label
        meta[nid] = {"kind": node.kind, "x": node.x, "y": node.y, "flake": node.flake}
    edges = {(min(v.a, v.b), max(v.a, v.b)) for v in state.veins.values()}
    return StorageGraph(nodes, edges, state.active_node), meta


def degree_stats(g: StorageGraph) -> dict:
    degrees = [g.degree(v) for v in sorted(g.nodes)]
    hist: dict[int, int] = {}
    for d in degrees:
        hist[d] = hist.get(d, 0) + 1
    return {
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "avg_degree": (sum(degrees) / len(degrees)) if degrees else 0.0,
        "max_degree": max(degrees, default=0),
        "histogram": dict(sorted(hist.items())),
    }
