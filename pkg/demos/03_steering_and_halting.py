"""Steering a run with interventions, and the two ways a machine halts.

Placing a fresh flake redirects growth (the experimenter's move); covering
the arena with light flips the high-level command to escape.  When every
nutrient is spent the machine halts: sclerotium in darkness, fructification
under light.

Run:  python demos/03_steering_and_halting.py
"""

from physarum_machine.sim import (SimConfig, SimParams, apply_intervention,
                                  init_scenario, run_sim, sim_step)

params = SimParams(decay=2e-4, spawn_burst=1, noise_weight=0.0)

# -- redirect growth mid-run -------------------------------------------------
config = SimConfig(width=60, height=31, seed=5, start=(8, 15), params=params,
                   flakes=[(30, 15, "Uncolored", 40.0)])
state = init_scenario(config)
run_sim(state, 260)
print("before intervention:", sorted(state.nodes), "command:", state.high_command)

apply_intervention(state, {"kind": "PlaceFlake", "x": 52, "y": 15,
                           "color": "Green", "mass": 500.0})
run_sim(state, 300)
print("after placing a fresh flake:", sorted(state.nodes))

# -- light makes the plasmodium flee ------------------------------------------
apply_intervention(state, {"kind": "PlaceLight", "x0": 0, "y0": 0,
                           "x1": 59, "y1": 30, "intensity": 0.9})
sim_step(state)
print("under full light the command becomes:", state.high_command)
apply_intervention(state, {"kind": "RemoveLight"})
sim_step(state)
print("light removed:", state.high_command)

# -- halting -------------------------------------------------------------------
def consume_everything(light):
    cfg = SimConfig(width=30, height=15, seed=2, start=(5, 7), params=params,
                    flakes=[(20, 7, "Uncolored", 3.0)], light=light)
    s = init_scenario(cfg)
    run_sim(s, 2000)
    return s

dark = consume_everything([])
print("\nall nutrients spent in darkness ->", dark.status,
      f"(command {dark.high_command}, tick {dark.tick})")
lit = consume_everything([(0, 0, 29, 14, 0.9)])
print("all nutrients spent under light ->", lit.status,
      f"(command {lit.high_command}, tick {lit.tick})")
