import json

import pytest

from physarum_machine.cli import main

FIG_PROGRAM = """machine fig6 labels {A, B, C} degree 3 radius 1
rule grow: active a:A, node b:B, edge(a,b) => new c:C, link(b,c), cut(a,b), move c;
"""
FIG_GRAPH = "graph fig6 active 1\nnode 1 A\nnode 2 B\nedge 1 2\n"


@pytest.fixture
def fig_files(tmp_path):
    prog = tmp_path / "fig6.kum"
    prog.write_text(FIG_PROGRAM)
    graph = tmp_path / "fig6.kg"
    graph.write_text(FIG_GRAPH)
    return prog, graph


@pytest.fixture
def scenario_file(tmp_path):
    cfg = {
        "arena": {"width": 40, "height": 21},
        "seed": 7,
        "start": {"x": 5, "y": 10},
        "params": {"noise_weight": 0.0, "spawn_burst": 1, "decay": 2e-4},
        "flakes": [{"x": 30, "y": 10, "color": "Uncolored", "mass": 50.0}],
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(cfg))
    return path


class TestRun:
    def test_grow_program_trace(self, fig_files, capsys):
        prog, graph = fig_files
        assert main(["run", str(prog), str(graph)]) == 0
        out = capsys.readouterr().out.splitlines()
        kinds = [line.split("op=")[1].split(" ")[0] for line in out]
        assert kinds == ["ADD_NODE", "ADD_EDGE", "ADD_EDGE", "REMOVE_EDGE",
                         "MOVE_ACTIVE"]

    def test_zero_steps_empty_trace(self, fig_files, capsys):
        prog, graph = fig_files
        assert main(["run", "--max-steps", "0", str(prog), str(graph)]) == 0
        assert capsys.readouterr().out == ""

    def test_parse_error_exit_2(self, tmp_path, fig_files):
        _, graph = fig_files
        bad = tmp_path / "bad.kum"
        bad.write_text("rule ???")
        assert main(["run", str(bad), str(graph)]) == 2

    def test_missing_file_exit_2(self, fig_files):
        prog, _ = fig_files
        assert main(["run", str(prog), "/nonexistent.kg"]) == 2


class TestSim:
    def test_deterministic_stdout(self, scenario_file, capsys):
        assert main(["sim", str(scenario_file), "--ticks", "250"]) == 0
        first = capsys.readouterr().out
        assert main(["sim", str(scenario_file), "--ticks", "250"]) == 0
        assert capsys.readouterr().out == first
        assert "src=OCCUPY" in first

    def test_snapshot_and_render(self, scenario_file, tmp_path, capsys):
        snap = tmp_path / "snap.json"
        assert main(["sim", str(scenario_file), "--ticks", "200",
                     "--snapshot", str(snap)]) == 0
        capsys.readouterr()
        svg = tmp_path / "view.svg"
        assert main(["render", str(snap), "-o", str(svg)]) == 0
        assert svg.read_text().startswith("<svg")
        ppm = tmp_path / "view.ppm"
        assert main(["render", str(snap), "-o", str(ppm)]) == 0
        assert ppm.read_bytes().startswith(b"P6\n")
        pgm = tmp_path / "view.pgm"
        assert main(["render", str(snap), "-o", str(pgm)]) == 0
        assert pgm.read_bytes().startswith(b"P5\n")
        assert main(["render", str(snap), "-o", str(tmp_path / "x.bmp")]) == 2


class TestRealizeReplay:
    def test_realize_twice_byte_identical(self, fig_files, tmp_path, capsys):
        _, graph = fig_files
        out1 = tmp_path / "a.log"
        out2 = tmp_path / "b.log"
        assert main(["realize", str(graph), "--seed", "7", "--ticks", "600",
                     "--out", str(out1)]) == 0
        assert main(["realize", str(graph), "--seed", "7", "--ticks", "600",
                     "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_replay_of_sim_log(self, scenario_file, tmp_path, capsys):
        log = tmp_path / "run.log"
        assert main(["sim", str(scenario_file), "--ticks", "250",
                     "--out", str(log)]) == 0
        capsys.readouterr()
        assert main(["replay", str(log)]) == 0

    def test_replay_detects_tampering(self, scenario_file, tmp_path, capsys):
        log = tmp_path / "run.log"
        main(["sim", str(scenario_file), "--ticks", "250", "--out", str(log)])
        capsys.readouterr()
        text = log.read_text()
        assert "tick=" in text
        log.write_text(text.replace("tick=", "tick=9", 1))
        assert main(["replay", str(log)]) == 1

    def test_realize_conformance_pass_and_fail(self, fig_files, tmp_path, capsys):
        _, graph = fig_files
        good = tmp_path / "expected.trace"
        good.write_text(
            "step=1 rule=load op=ADD_NODE args=2:B hash=\n"
            "step=1 rule=load op=ADD_EDGE args=1,2 hash=\n"
            "step=1 rule=load op=MOVE_ACTIVE args=2 hash=\n")
        assert main(["realize", str(graph), "--seed", "7", "--ticks", "600",
                     "--expected", str(good)]) == 0
        err = capsys.readouterr().err
        assert "PASS" in err
        assert main(["realize", str(graph), "--seed", "7", "--ticks", "600",
                     "--expected", str(good), "--format", "records"]) == 0
        out = capsys.readouterr().out
        assert "verdict=PASS" in out and "match expected=0" in out
        bad = tmp_path / "bad.trace"
        bad.write_text("step=1 rule=load op=ADD_NODE args=2:C hash=\n")
        assert main(["realize", str(graph), "--seed", "7", "--ticks", "600",
                     "--expected", str(bad)]) == 1
        assert "FAIL" in capsys.readouterr().err


class TestStats:
    def test_kg_stats(self, fig_files, capsys):
        _, graph = fig_files
        assert main(["stats", str(graph)]) == 0
        out = capsys.readouterr().out
        assert "nodes=2" in out and "avg_degree=1" in out

    def test_eventlog_stats(self, scenario_file, tmp_path, capsys):
        log = tmp_path / "run.log"
        main(["sim", str(scenario_file), "--ticks", "250", "--out", str(log)])
        capsys.readouterr()
        assert main(["stats", str(log)]) == 0
        assert "nodes=" in capsys.readouterr().out
