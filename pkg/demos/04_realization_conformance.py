"""From an abstract data graph to a living realization, and back.

A storage graph compiles into a spatial scenario (nodes become colored
flakes, the organism starts on the active node).  The emergent events map
back to primitive graph operations, and the conformance checker aligns them
with an expected abstract trace, tolerating the incidental junctions the
organism creates along the way.

Run:  python demos/04_realization_conformance.py
"""

from physarum_machine.kum import PrimOp, StorageGraph
from physarum_machine.realize import (compile_scenario, conformance_check,
                                      map_events, smooth_junctions)
from physarum_machine.sim import extract_graph, init_scenario, run_sim

# the data graph: three labeled nodes in a chain, control at node 1.
# Layout is part of the experiment design: placing the chain collinearly
# makes the organism acquire B on the way to C, loading the chain as a
# chain (a circle layout would invite a direct A-C vein instead).
data = StorageGraph({1: "A", 2: "B", 3: "C"}, {(1, 2), (2, 3)}, active=1)
scenario = compile_scenario(data, seed=4,
                            layout={1: (10, 32), 2: (32, 32), 3: (54, 32)})
print("flakes:", scenario.config.flakes)
print("label map:", dict(scenario.label_map.mapping))

state = init_scenario(scenario.config)
run_sim(state, 1200)
ops = map_events(state.events, scenario.label_map)
print("\nemergent trace mapped to abstract operations:")
for op in ops:
    print(f"  {op.kind} {op.format_args()}")

# the expected loading trace: acquire B from A, then C from B
E = lambda kind, *args: PrimOp(kind, args)
expected = [
    E("ADD_NODE", 2, "B"), E("ADD_EDGE", 1, 2), E("MOVE_ACTIVE", 2),
    E("ADD_NODE", 3, "C"), E("ADD_EDGE", 2, 3), E("MOVE_ACTIVE", 3),
]
report = conformance_check(expected, ops, window=4,
                           expected_initial=StorageGraph({1: "A"}, set(), 1))
print("\n" + report.summary())

final, _ = extract_graph(state, scenario.label_map.labeler())
print("\nextracted final graph:", final.nodes, sorted(final.edges))
skeleton = smooth_junctions(final)
print("junctions smoothed:", skeleton.nodes, sorted(skeleton.edges),
      "active:", skeleton.active)
