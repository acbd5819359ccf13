"""Scenario configuration (JSON) and full-state snapshots.

The scenario schema:

    {
      "arena": {"width": 200, "height": 200, "cell_size": 0.5, "dt": 1.0},
      "seed": 42,
      "start": {"x": 100, "y": 100},
      "params": { ... SimParams overrides ... },
      "flakes": [{"x": 50, "y": 60, "color": "Uncolored", "mass": 100.0}, ...],
      "light":  [{"x0": 0, "y0": 0, "x1": 30, "y1": 30, "intensity": 0.8}, ...],
      "interventions": [{"tick": 100, "kind": "PlaceFlake", "x": 1, "y": 2,
                         "color": "Red", "mass": 50.0}, ...]
    }

Positions are cell coordinates; cell_size is mm per cell and dt seconds per
tick.  Snapshots serialize the complete simulation state, floats included,
so equality of serialized snapshots means equality of states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .model import Flake, SimGraphNode, Tip, Vein
from .params import ConfigError, SimParams


@dataclass
class SimConfig:
    width: int
    height: int
    seed: int = 42
    start: tuple[int, int] = (0, 0)
    params: SimParams = field(default_factory=SimParams)
    flakes: list[tuple[int, int, str, float]] = field(default_factory=list)
    light: list[tuple[int, int, int, int, float]] = field(default_factory=list)
    interventions: list[tuple[int, dict]] = field(default_factory=list)

    @staticmethod
    def from_dict(data: dict) -> "SimConfig":
        try:
            arena = data.get("arena", {})
            width = int(arena["width"])
            height = int(arena["height"])
            overrides = dict(data.get("params", {}))
            if "cell_size" in arena:
                overrides["cell_size"] = float(arena["cell_size"])
            if "dt" in arena:
                overrides["dt"] = float(arena["dt"])
            params = SimParams().with_overrides(overrides)
            start = (int(data["start"]["x"]), int(data["start"]["y"]))
            flakes = [(int(f["x"]), int(f["y"]), f.get("color", "Uncolored"),
                       float(f.get("mass", params.flake_mass)))
                      for f in data.get("flakes", [])]
            light = [(int(r["x0"]), int(r["y0"]), int(r["x1"]), int(r["y1"]),
                      float(r.get("intensity", 1.0)))
                     for r in data.get("light", [])]
            ivs = []
            for entry in data.get("interventions", []):
                entry = dict(entry)
                tick = int(entry.pop("tick"))
                ivs.append((tick, entry))
            return SimConfig(width, height, int(data.get("seed", 42)), start,
                             params, flakes, light, ivs)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad scenario config: {exc}") from exc

    def to_dict(self) -> dict:
        p = self.params
        defaults = SimParams()
        overrides = {}
        for name in vars(defaults):
            if name in ("cell_size", "dt"):
                continue
            if getattr(p, name) != getattr(defaults, name):
                overrides[name] = getattr(p, name)
        out = {
            "arena": {"width": self.width, "height": self.height,
                      "cell_size": p.cell_size, "dt": p.dt},
            "seed": self.seed,
            "start": {"x": self.start[0], "y": self.start[1]},
            "flakes": [{"x": x, "y": y, "color": c, "mass": m}
                       for x, y, c, m in self.flakes],
            "light": [{"x0": a, "y0": b, "x1": c, "y1": d, "intensity": i}
                      for a, b, c, d, i in self.light],
            "interventions": [dict(iv, tick=t) for t, iv in self.interventions],
        }
        if overrides:
            out["params"] = overrides
        return out

    @staticmethod
    def loads(text: str) -> "SimConfig":
        return SimConfig.from_dict(json.loads(text))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# -- snapshots -----------------------------------------------------------------

def state_snapshot(state, include_rng: bool = False) -> dict:
    """Complete serializable view of the simulation state."""
    snap = {
        "tick": state.tick,
        "status": state.status,
        "high_command": state.high_command,
        "active_node": state.active_node,
        "seed": state.seed,
        "arena": {
            "width": state.arena.width,
            "height": state.arena.height,
            "cell_size": state.arena.cell_size,
            "dt": state.arena.dt,
            "chemo": [[float(v) for v in row] for row in state.arena.chemo],
            "light": [[float(v) for v in row] for row in state.arena.light],
        },
        "flakes": [{"id": f.id, "x": f.x, "y": f.y, "color": f.color,
                    "mass": f.mass, "occupied": f.occupied, "node": f.node}
                   for f in state.flakes],
        "nodes": [{"id": n.id, "kind": n.kind, "x": n.x, "y": n.y, "flake": n.flake}
                  for _, n in sorted(state.nodes.items())],
        "veins": [{"id": v.id, "a": v.a, "b": v.b,
                   "polyline": [list(c) for c in v.polyline],
                   "flow_speed": v.flow_speed,
                   "reversal_period": v.reversal_period,
                   "phase": v.phase}
                  for _, v in sorted(state.veins.items())],
        "tips": [{"id": t.id, "x": t.x, "y": t.y,
                  "heading": [t.heading[0], t.heading[1]],
                  "origin": t.origin_node, "starve": t.starve,
                  "path": [list(c) for c in t.path]}
                 for t in state.tips if t.alive],
        "events": len(state.events),
        "counters": {"node": state.next_node, "vein": state.next_vein,
                     "tip": state.next_tip,
                     "spawn_cooldown": state.spawn_cooldown,
                     "spawn_budget": state.spawn_budget},
    }
    if include_rng:
        def rng_state(gen):
            s = gen.bit_generator.state
            return {"state": int(s["state"]["state"]), "inc": int(s["state"]["inc"]),
                    "has_uint32": int(s["has_uint32"]), "uinteger": int(s["uinteger"])}
        snap["rng"] = {"tips": rng_state(state.tips_rng), "veins": rng_state(state.veins_rng)}
    return snap


def snapshot_dumps(snap: dict) -> str:
    return json.dumps(snap, sort_keys=True)
