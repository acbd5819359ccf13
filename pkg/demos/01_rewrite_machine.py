"""Walk through the pointer machine: storage graphs, rules, execution.

Run:  python demos/01_rewrite_machine.py
"""

from physarum_machine.kum import (MachineState, StorageGraph, decode_input,
                                  encode_input, format_trace, node_address,
                                  run, validate_graph)
from physarum_machine.kum.programs import build_successor_program
from physarum_machine.lang import lint_program, parse_program, print_program

# ---------------------------------------------------------------------------
# The storage is a labeled undirected graph with one active node.  Neighbors
# of any node carry distinct labels, so every node is reachable from the
# active one by a unique word of labels.

g = StorageGraph({1: "A", 2: "B", 3: "C"}, {(1, 2), (2, 3)}, active=1)
print("valid:", validate_graph(g, degree_bound=3))
print("address of node 3 from the active node:", node_address(g, 3))

# ---------------------------------------------------------------------------
# Programs are ordered rewrite rules over the active zone.  This one grows a
# new node between two existing ones and rewires the edge through it.

source = """machine demo labels {A, B, C} degree 3 radius 1
rule grow: active a:A, node b:B, edge(a,b) => new c:C, link(b,c), cut(a,b), move c;
"""
program = parse_program(source).program
print("\nprogram:")
print(print_program(program))
print("lint findings:", lint_program(program) or "none")

state = MachineState(StorageGraph({1: "A", 2: "B"}, {(1, 2)}, active=1))
result = run(state, program, max_steps=10)
print("trace:")
print(format_trace(result.trace))
print("final graph:", result.state.graph.nodes, sorted(result.state.graph.edges),
      "active:", result.state.graph.active)

# ---------------------------------------------------------------------------
# A complete computation: the unary successor.  Input words encode as chains
# with position tags; the machine walks to the end and appends one mark.

succ = build_successor_program("m")
for n in (0, 3, 6):
    word = ["m"] * n
    res = run(MachineState(encode_input(word)), succ, max_steps=1000)
    print(f"successor of {n} marks -> {len(decode_input(res.state.graph))} marks"
          f" ({res.state.status.value}, {res.state.step_count} steps)")
