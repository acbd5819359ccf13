import pytest
from hypothesis import given, strategies as st

from physarum_machine.kum import (AlphabetError, StorageGraph, decode_input,
                                  encode_input, node_address, resolve_address,
                                  validate_graph)


def chain(labels, active=1):
    nodes = {i + 1: lab for i, lab in enumerate(labels)}
    edges = {(i, i + 1) for i in range(1, len(labels))}
    return StorageGraph(nodes, edges, active)


class TestValidate:
    def test_single_node_ok(self):
        assert validate_graph(StorageGraph({1: "A"}, set(), 1), 3).ok

    def test_disconnected(self):
        g = StorageGraph({1: "A", 2: "B"}, set(), 1)
        report = validate_graph(g, 3)
        assert not report.ok
        assert any(v.kind == "disconnected" for v in report.violations)

    def test_addressing_violation_names_node(self):
        g = StorageGraph({1: "A", 2: "B", 3: "B"}, {(1, 2), (1, 3)}, 1)
        report = validate_graph(g, 3)
        bad = [v for v in report.violations if v.kind == "addressing"]
        assert bad and bad[0].nodes[0] == 1

    def test_degree_bound(self):
        g = StorageGraph({1: "A", 2: "B", 3: "C", 4: "D", 5: "E"},
                         {(1, 2), (1, 3), (1, 4), (1, 5)}, 1)
        assert validate_graph(g, 4).ok
        report = validate_graph(g, 3)
        assert any(v.kind == "degree" and v.nodes == (1,) for v in report.violations)

    def test_active_membership(self):
        g = StorageGraph({1: "A"}, set(), 9)
        assert any(v.kind == "active" for v in validate_graph(g, 3).violations)

    def test_zone_radius(self):
        g = chain(["A", "B", "C", "D"])
        assert g.zone(1) == {1, 2}
        assert g.zone(2) == {1, 2, 3}


class TestAddress:
    def test_identity(self):
        g = chain(["A"])
        assert node_address(g, 1) == []

    def test_chain_word(self):
        g = chain(["A", "B", "C"])
        assert node_address(g, 3) == ["B", "C"]

    def test_star_addresses_distinct(self):
        g = StorageGraph({1: "A", 2: "B", 3: "C", 4: "D"},
                         {(1, 2), (1, 3), (1, 4)}, 1)
        words = [tuple(node_address(g, t)) for t in (2, 3, 4)]
        assert len(set(words)) == 3

    def test_round_trip_exhaustive_small(self):
        # every node of assorted valid graphs up to 7 nodes resolves back
        graphs = [
            chain(["A"]),
            chain(["A", "B", "C", "A", "B", "C", "A"]),
            StorageGraph({1: "A", 2: "B", 3: "C", 4: "D"}, {(1, 2), (1, 3), (1, 4)}, 1),
            # a 5-cycle needs 5 labels: both neighbors of each node sit at
            # distance two from each other around the ring
            StorageGraph({1: "A", 2: "B", 3: "C", 4: "D", 5: "E"},
                         {(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)}, 2),
        ]
        for g in graphs:
            assert validate_graph(g, 3).ok
            for t in g.nodes:
                assert resolve_address(g, node_address(g, t)) == t


class TestEncode:
    def test_empty_word(self):
        g = encode_input([])
        assert len(g.nodes) == 1 and not g.edges
        assert decode_input(g) == []

    def test_two_symbols(self):
        g = encode_input(["a", "b"])
        assert len(g.nodes) == 3 and len(g.edges) == 2
        assert decode_input(g) == ["a", "b"]

    def test_unknown_symbol(self):
        with pytest.raises(AlphabetError):
            encode_input(["a"], alphabet=["b"])

    def test_reserved_tag_digit(self):
        with pytest.raises(AlphabetError):
            encode_input(["a1"])

    @given(st.lists(st.sampled_from(["a", "b"]), max_size=8))
    def test_round_trip_and_validity(self, word):
        g = encode_input(word)
        assert decode_input(g) == word
        assert validate_graph(g, 3).ok
