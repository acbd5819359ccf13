"""Line-delimited event logs with an embedded scenario header.

A log is self-contained for replay: the first line carries the scenario
(with every intervention that was applied, scheduled or live) and the run
length; the remaining lines are events with their primitive graph ops.
"""

from __future__ import annotations

import json
from typing import Callable

from .engine import SimState, init_scenario, run_sim
from .model import SimEvent, default_labeler, format_event
from .params import ConfigError
from .scenario import SimConfig


def write_event_log(state: SimState, config: SimConfig,
                    labeler: Callable[[str], str] = default_labeler) -> str:
    """Serialize a finished (or paused) run; replayable standalone."""
    exported = SimConfig(
        width=config.width, height=config.height, seed=config.seed,
        start=config.start, params=config.params, flakes=list(config.flakes),
        light=list(config.light),
        interventions=[(t, dict(iv)) for t, iv in state.intervention_log],
    )
    header = {"scenario": exported.to_dict(), "ticks": state.tick}
    lines = ["#scenario " + json.dumps(header, sort_keys=True)]
    lines.extend(format_event(ev, labeler) for ev in state.events)
    return "\n".join(lines) + "\n"


def read_event_log(text: str) -> tuple[SimConfig, int, list[str]]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#scenario "):
        raise ConfigError("event log misses the #scenario header")
    header = json.loads(lines[0][len("#scenario "):])
    config = SimConfig.from_dict(header["scenario"])
    ticks = int(header["ticks"])
    events = [ln for ln in lines[1:] if ln.strip() and not ln.startswith("#")]
    return config, ticks, events


def replay_event_log(text: str, labeler: Callable[[str], str] = default_labeler) -> str:
    """Re-run the embedded scenario; byte-equality with the input means the
    run reproduced exactly."""
    config, ticks, _ = read_event_log(text)
    state = init_scenario(config)
    run_sim(state, ticks)
    return write_event_log(state, config, labeler)
