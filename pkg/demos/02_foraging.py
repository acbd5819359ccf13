"""Foraging simulation: tips, veins, emergent graph events, rendered views.

Run:  python demos/02_foraging.py      (writes foraging.ppm / foraging.svg)
"""

from pathlib import Path

from physarum_machine.sim import (SimConfig, SimParams, degree_stats,
                                  extract_graph, format_event, init_scenario,
                                  render_ppm, render_svg, run_sim,
                                  state_snapshot)

# Six nutrient flakes around a central inoculation point.  The plasmodium
# spreads, occupies them, and leaves a vein network behind.
config = SimConfig(
    width=72, height=72, seed=11, start=(36, 36),
    params=SimParams(decay=2e-4),
    flakes=[(12, 12, "Uncolored", 800.0), (60, 12, "Green", 800.0),
            (12, 60, "Yellow", 800.0), (60, 60, "Blue", 800.0),
            (36, 8, "Red", 800.0), (8, 36, "Uncolored", 800.0)],
)

state = init_scenario(config)
run_sim(state, 900)

print(f"after {state.tick} ticks: {state.status}, command {state.high_command}")
print("\nemergent events (each with its graph operations):")
for ev in state.events:
    print(" ", format_event(ev))

graph, meta = extract_graph(state)
print("\nextracted storage graph:")
print("  nodes:", {v: graph.nodes[v] for v in sorted(graph.nodes)})
print("  edges:", sorted(graph.edges))
print("  stats:", degree_stats(graph))

for vein in state.veins.values():
    print(f"  vein {vein.id}: {vein.a}-{vein.b}  flow {vein.flow_speed:.2f} mm/s,"
          f" reverses every {vein.reversal_period:.0f} s")

snap = state_snapshot(state)
Path("foraging.ppm").write_bytes(render_ppm(snap))
Path("foraging.svg").write_text(render_svg(snap))
print("\nwrote foraging.ppm and foraging.svg")
