"""Spatial plasmodium foraging simulator."""

from .arena import Arena, field_step
from .engine import (Branch, EmptyPlasmodium, HaltedError, Occupy, Propagate,
                     Retract, SimState, apply_intervention, degree_stats,
                     extract_graph, halt_status, init_scenario, run_sim,
                     sim_step, tip_step)
from .eventlog import read_event_log, replay_event_log, write_event_log
from .model import (Flake, SimEvent, SimGraphNode, Tip, Vein, default_labeler,
                    flow_sign, format_event, map_event)
from .params import (COLORS, ConfigError, SimParams, attract, check_attract)
from .render import render_pgm, render_ppm, render_svg
from .scenario import SimConfig, snapshot_dumps, state_snapshot

__all__ = [
    "Arena", "Branch", "COLORS", "ConfigError", "EmptyPlasmodium", "Flake",
    "HaltedError", "Occupy", "Propagate", "Retract", "SimConfig", "SimEvent",
    "SimGraphNode", "SimParams", "SimState", "Tip", "Vein",
    "apply_intervention", "attract", "check_attract", "default_labeler",
    "degree_stats", "extract_graph", "field_step", "flow_sign", "format_event",
    "halt_status", "init_scenario", "map_event", "read_event_log",
    "render_pgm", "render_ppm", "render_svg", "replay_event_log", "run_sim",
    "sim_step", "snapshot_dumps", "state_snapshot", "tip_step",
    "write_event_log",
]
