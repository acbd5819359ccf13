import random

import pytest

from physarum_machine.kum import (EdgeAtom, Halt, InvariantBreach, Link,
                                  MachineState, Move, New, NodeAtom, Output,
                                  Pattern, Program, RewriteRule, apply_rule,
                                  match_pattern)
from physarum_machine.kum.programs import build_append_program, build_successor_program
from physarum_machine.lang import (has_errors, lint_program, parse_graph,
                                   parse_program, print_graph, print_program)

FIG_SRC = """machine fig6 labels {A, B, C} degree 3 radius 1
rule grow: active a:A, node b:B, edge(a,b) => new c:C, link(b,c), cut(a,b), move c;
"""


class TestParseProgram:
    def test_grow_rule(self):
        res = parse_program(FIG_SRC, "fig6.kum")
        assert res.ok and not res.diagnostics
        prog = res.program
        assert prog.name == "fig6" and prog.alphabet == ("A", "B", "C")
        assert len(prog.rules) == 1
        assert len(prog.rules[0].actions) == 4

    def test_empty_file_warns(self):
        res = parse_program("machine m labels {A} degree 3 radius 1\n")
        assert res.ok and len(res.program.rules) == 0
        assert any(d.severity == "warning" and "no rules" in d.message
                   for d in res.diagnostics)

    def test_unbound_variable(self):
        res = parse_program(
            "machine m labels {A} degree 3 radius 1\n"
            "rule r: active a:A => link(a,b);\n", "m.kum")
        assert not res.ok
        diag = next(d for d in res.diagnostics if "unbound variable 'b'" in d.message)
        assert diag.span.line == 2

    def test_label_outside_alphabet(self):
        res = parse_program(
            "machine m labels {A} degree 3 radius 1\n"
            "rule r: active a:A => new b:Z;\n")
        assert not res.ok
        assert any("'Z'" in d.message for d in res.diagnostics)

    def test_move_must_be_last(self):
        res = parse_program(
            "machine m labels {A, B} degree 3 radius 1\n"
            "rule r: active a:A => move a, new b:B;\n")
        assert not res.ok

    def test_duplicate_rule_name(self):
        res = parse_program(
            "machine m labels {A} degree 3 radius 1\n"
            "rule r: active a:A => halt;\n"
            "rule r: active a:A => halt;\n")
        assert not res.ok

    def test_recovery_reports_multiple_errors(self):
        res = parse_program(
            "machine m labels {A} degree 3 radius 1\n"
            "rule r1: active a:A => link(a,x);\n"
            "rule r2: active a:A => cut(a,y);\n")
        msgs = [d.message for d in res.diagnostics]
        assert any("'x'" in m for m in msgs) and any("'y'" in m for m in msgs)

    def test_spans_inside_input(self):
        text = "machine m labels {A} degree 3 radius 1\nrule ???\n"
        res = parse_program(text)
        lines = text.splitlines()
        for d in res.diagnostics:
            assert 1 <= d.span.line <= len(lines)
            assert d.span.column >= 1

    @pytest.mark.parametrize("bad", ["", "rule", "machine", '"', "machine m labels {",
                                     "machine m labels {A} degree x radius 1"])
    def test_never_raises(self, bad):
        res = parse_program(bad)
        assert res.program is None or res.ok


class TestParseGraph:
    def test_two_node_graph(self):
        res = parse_graph("graph g active 1\nnode 1 A\nnode 2 B\nedge 1 2\n")
        assert res.ok
        assert res.graph.nodes == {1: "A", 2: "B"}
        assert res.graph.edges == {(1, 2)}

    def test_duplicate_node_id(self):
        res = parse_graph("graph g active 1\nnode 1 A\nnode 1 B\n")
        assert not res.ok
        assert any("duplicate node id 1" in d.message and "line 2" in d.message
                   for d in res.diagnostics)

    def test_addressing_violation_is_warning(self):
        res = parse_graph(
            "graph g active 1\nnode 1 A\nnode 2 B\nnode 3 B\nedge 1 2\nedge 1 3\n")
        assert res.ok  # warnings only
        assert any(d.severity == "warning" and "addressing" in d.message
                   for d in res.diagnostics)

    def test_comments_and_blank_lines(self):
        res = parse_graph("# header\n\ngraph g active 1\nnode 1 A # trailing\n")
        assert res.ok and res.graph.nodes == {1: "A"}

    def test_unknown_edge_endpoint(self):
        res = parse_graph("graph g active 1\nnode 1 A\nedge 1 9\n")
        assert not res.ok


class TestPrinting:
    def test_fig_round_trip_stable(self):
        first = parse_program(FIG_SRC).program
        text = print_program(first)
        second = parse_program(text).program
        assert second == first
        assert print_program(second) == text

    def test_graph_round_trip(self):
        res = parse_graph("graph g active 2\nnode 2 B\nnode 1 A\nedge 2 1\n")
        text = print_graph(res.graph)
        assert parse_graph(text).graph == res.graph

    def test_empty_program_prints_header_only(self):
        prog = Program("m", ("A",), 3, 1, ())
        assert print_program(prog).strip().startswith("machine m labels {A}")
        assert "rule" not in print_program(prog)

    @pytest.mark.parametrize("prog", [build_successor_program(), build_append_program()],
                             ids=["successor", "append"])
    def test_generated_programs_round_trip(self, prog):
        res = parse_program(print_program(prog))
        assert res.ok and res.program == prog


def random_program(rng: random.Random) -> Program:
    labels = tuple(f"L{i}" for i in range(rng.randint(1, 4)))
    rules = []
    for r in range(rng.randint(0, 5)):
        pat_vars = ["a"]
        atoms = []
        for i in range(rng.randint(0, 2)):
            var = f"v{i}"
            atoms.append(NodeAtom(var, rng.choice(labels)))
            atoms.append(EdgeAtom(rng.choice(pat_vars), var))
            pat_vars.append(var)
        actions = []
        known = list(pat_vars)
        for i in range(rng.randint(1, 3)):
            kind = rng.randrange(4)
            if kind == 0:
                var = f"n{i}"
                actions.append(New(var, rng.choice(labels)))
                known.append(var)
            elif kind == 1 and len(known) >= 2:
                actions.append(Link(*rng.sample(known, 2)))
            elif kind == 2:
                actions.append(Output(rng.choice(["", "x", "two words", 'q"t'])))
            else:
                actions.append(Halt())
        if rng.random() < 0.3:
            actions.append(Move(rng.choice(known)))
        rules.append(RewriteRule(f"r{r}", Pattern("a", rng.choice(labels), tuple(atoms)),
                                 tuple(actions)))
    return Program(f"gen{rng.randrange(1000)}", labels, rng.randint(1, 6),
                   rng.randint(1, 3), tuple(rules))


def test_random_programs_round_trip_sample():
    rng = random.Random(7)
    for _ in range(100):
        prog = random_program(rng)
        res = parse_program(print_program(prog))
        assert res.ok, [str(d) for d in res.diagnostics]
        assert res.program == prog


def test_megabyte_inputs_terminate():
    blob = ("rule r: active a:A => halt;\n" * 40000)[:1_000_000]
    parse_program("machine m labels {A} degree 3 radius 1\n" + blob)
    parse_program("x" * 1_000_000)
    parse_graph("node 1 A\n" * 50000)


def test_fuzz_smoke_no_crash():
    rng = random.Random(99)
    corpus = FIG_SRC
    for _ in range(2000):
        mode = rng.randrange(3)
        if mode == 0:
            text = "".join(chr(rng.randrange(32, 127)) for _ in range(rng.randrange(80)))
        elif mode == 1:
            chars = list(corpus)
            for _ in range(rng.randrange(1, 6)):
                chars[rng.randrange(len(chars))] = chr(rng.randrange(1, 127))
            text = "".join(chars)
        else:
            text = bytes(rng.randrange(256) for _ in range(rng.randrange(60))).decode(
                "utf-8", errors="replace")
        parse_program(text)
        parse_graph(text)


class TestLint:
    def lint_src(self, body, labels="A, B, C", degree=3, radius=1):
        src = f"machine m labels {{{labels}}} degree {degree} radius {radius}\n{body}\n"
        res = parse_program(src)
        assert res.ok, [str(d) for d in res.diagnostics]
        return lint_program(res.program), res.program

    def test_shared_neighbor_label_finding(self):
        findings, _ = self.lint_src(
            "rule r: active a:A, node b:B, edge(a,b), node c:B, edge(a,c) => halt;")
        assert any(f.kind == "address" for f in findings)

    def test_degree_unsafe_rule_flagged_with_witness(self):
        findings, prog = self.lint_src(
            "rule r: active a:A, node b:B, edge(a,b) => link(a,b2), new b2:C;"
            .replace("link(a,b2), new b2:C", "new c:C, link(b,c)"))
        degree = [f for f in findings if f.kind == "degree"]
        assert degree and degree[0].witness
        # the witness must be a valid graph on which the rule breaches D
        parsed = parse_graph(degree[0].witness, degree_bound=prog.degree_bound)
        assert parsed.ok and not has_errors(parsed.diagnostics)
        rule = prog.rules[0]
        binding = match_pattern(parsed.graph, rule.pattern)
        assert binding is not None
        with pytest.raises(InvariantBreach, match="degree"):
            apply_rule(MachineState(parsed.graph), rule, binding, prog.degree_bound)

    def test_grow_rule_is_clean(self):
        res = parse_program(FIG_SRC)
        assert lint_program(res.program) == []

    def test_new_label_duplicate_finding(self):
        findings, _ = self.lint_src(
            "rule r: active a:A, node b:B, edge(a,b) => new c:B;")
        assert any(f.kind == "new-label" for f in findings)

    def test_new_after_cut_is_clean(self):
        findings, _ = self.lint_src(
            "rule r: active a:A, node b:B, edge(a,b) => new c:C, cut(a,b), new d:B, link(b,d);")
        assert not any(f.kind == "new-label" for f in findings)

    def test_shadowed_rule(self):
        findings, _ = self.lint_src(
            "rule one: active a:A, node b:B, edge(a,b) => halt;\n"
            "rule two: active x:A, node y:B, edge(x,y) => out \"hi\";")
        assert any(f.kind == "shadowed" and f.rule == "two" for f in findings)

    def test_radius_finding(self):
        findings, _ = self.lint_src(
            "rule r: active a:A, node b:B, edge(a,b), node c:C, edge(b,c) => halt;",
            radius=1)
        assert any(f.kind == "radius" for f in findings)

    @pytest.mark.parametrize("prog", [build_successor_program(), build_append_program()],
                             ids=["successor", "append"])
    def test_generated_programs_lint_only_degree_findings(self, prog):
        # the chain-walking rules are flagged degree-unsafe, which is sound:
        # nothing in their patterns forbids a fully-saturated matched node
        findings = lint_program(prog)
        assert findings and all(f.kind == "degree" for f in findings)
        for f in findings:
            assert f.witness
            parsed = parse_graph(f.witness, degree_bound=prog.degree_bound)
            assert parsed.ok
            rule = next(r for r in prog.rules if r.name == f.rule)
            binding = match_pattern(parsed.graph, rule.pattern)
            assert binding is not None
            with pytest.raises(InvariantBreach, match="degree"):
                apply_rule(MachineState(parsed.graph), rule, binding,
                           prog.degree_bound)
