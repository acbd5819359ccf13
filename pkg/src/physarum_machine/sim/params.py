"""Simulation parameters and the flake color preference scale.

Everything here is config-overridable.  Flow speed and reversal period are
sampled per vein from their physical ranges (1-3 mm/s, 60-180 s); the other
defaults are model choices with no claimed physical calibration.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace


class ConfigError(ValueError):
    """Bad scenario or parameter configuration."""


UNCOLORED = "Uncolored"
GREEN = "Green"
YELLOW = "Yellow"
BLUE = "Blue"
RED = "Red"
COLORS = (UNCOLORED, GREEN, YELLOW, BLUE, RED)

DEFAULT_ATTRACT = {UNCOLORED: 1.0, GREEN: 0.8, YELLOW: 0.6, BLUE: 0.6, RED: 0.3}

FLOW_SPEED_RANGE = (1.0, 3.0)        # mm/s
REVERSAL_PERIOD_RANGE = (60.0, 180.0)  # s

COMMAND_SEARCH = "SearchForNutrients"
COMMAND_ESCAPE = "EscapeLight"
COMMAND_SCLEROTIUM = "FormSclerotium"
COMMAND_FRUCTIFY = "Fructify"

MAX_STRANDS = 3  # protoplasmic strands meeting at one point


def check_attract(table: dict[str, float]) -> dict[str, float]:
    """Enforce the preference ordering Uncolored > Green > Yellow = Blue > Red."""
    for c in COLORS:
        if c not in table:
            raise ConfigError(f"attract table misses color {c}")
        if not 0 < table[c] <= 1:
            raise ConfigError(f"attract({c}) = {table[c]} outside (0, 1]")
    if not (table[UNCOLORED] > table[GREEN] > table[YELLOW] == table[BLUE] > table[RED]):
        raise ConfigError(
            "attract ordering must be Uncolored > Green > Yellow = Blue > Red")
    return dict(table)


@dataclass(frozen=True)
class SimParams:
    cell_size: float = 0.5      # mm per cell
    dt: float = 1.0             # s per tick
    kappa: float = 0.05         # diffusion rate per tick (stability needs < 0.25)
    decay: float = 0.002        # chemo decay fraction per second
    body_consume: float = 0.5   # chemo fraction absorbed per tick under the body
    sink_exhausted: bool = True  # spent flake cells stop holding attractant
    source_rate: float = 1.0    # units/s injected by a fully attractive flake
    tip_speed: float = 0.2      # mm/s
    sense_dist: float = 2.0     # cells, gradient probe distance
    chemo_weight: float = 1.0
    persist_weight: float = 0.4
    light_weight: float = 2.0
    escape_boost: float = 4.0   # extra light weight under EscapeLight
    noise_weight: float = 0.15
    branch_ratio: float = 0.9   # second/best chemo ratio that triggers a branch
    branch_min_angle: float = 60.0  # degrees between the two branch modes
    branch_floor: float = 0.5   # gradient differential needed before branching
    valley_ratio: float = 0.5   # dip between modes proving real bimodality
    branch_home_dist: int = 5   # min cells from the origin node before branching
    leave_radius: int = 4       # within this range of home, outward motion wins
    leave_weight: float = 4.0   # strength of the outward bias near home
    retract_floor: float = 1e-4  # chemo level below which a tip starves
    starve_ticks: int = 40      # ticks of starvation before a tip retracts
    deplete_rate: float = 0.1   # units/s eaten from an occupied flake
    flake_mass: float = 100.0
    tip_cap: int = 16
    fruct_light: float = 0.5    # ambient light for fructification at halt
    escape_light: float = 0.25  # light at the active node triggering escape
    spawn_interval: int = 8     # ticks between tip spawns from the active node
    spawn_burst: int = 2        # tips spawned right after the active node moves
    spawn_floor: float = 0.0    # min nearby chemo before the active node spawns
    min_branch_path: int = 3    # cells a tip must travel before it may branch
    vein_grace: int = 25        # ticks a dead-leaf vein lingers before retracting
    cycle_grace: int = 20       # ticks a redundant cycle vein lingers
    cycle_keep_ratio: float = 1.25  # longest/mean-of-rest above which a cycle thins
    warmup_steady: bool = True  # start from the exact steady-state plume
    warmup_ticks: int = 0       # extra pre-diffusion iterations at init
    attract: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_ATTRACT))

    def __post_init__(self):
        check_attract(self.attract)
        if not 0 <= self.kappa < 0.25:
            raise ConfigError(f"kappa {self.kappa} outside the stable range [0, 0.25)")
        if not 0 <= self.decay * self.dt < 1:
            raise ConfigError("decay per tick must stay below 1")

    def attract_for(self, color: str) -> float:
        if color not in self.attract:
            raise ConfigError(f"unknown flake color {color!r}")
        return self.attract[color]

    def with_overrides(self, overrides: dict) -> "SimParams":
        known = {f.name for f in fields(SimParams)}
        bad = sorted(set(overrides) - known)
        if bad:
            raise ConfigError(f"unknown parameters: {', '.join(bad)}")
        merged = dict(overrides)
        if "attract" in merged:
            table = dict(DEFAULT_ATTRACT)
            table.update(merged["attract"])
            merged["attract"] = table
        return replace(self, **merged)

    @property
    def tip_speed_cells(self) -> float:
        return self.tip_speed / self.cell_size * self.dt


def attract(color: str) -> float:
    """Default attraction multiplier for a flake color."""
    if color not in DEFAULT_ATTRACT:
        raise ConfigError(f"unknown flake color {color!r}")
    return DEFAULT_ATTRACT[color]
