import itertools

import pytest

from physarum_machine.kum import SizeLimit, StorageGraph, canonical_form, canonical_hash


def brute_canon(g: StorageGraph) -> tuple:
    """Minimum encoding over all node permutations; the independent oracle."""
    ids = sorted(g.nodes)
    best = None
    for perm in itertools.permutations(range(len(ids))):
        pos = dict(zip(ids, perm))
        labs = tuple(lab for _, lab in sorted((pos[v], g.nodes[v]) for v in ids))
        edges = tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b]))
                             for a, b in g.edges))
        enc = (labs, pos[g.active], edges)
        if best is None or enc < best:
            best = enc
    return best


def permuted(g: StorageGraph, shift: int) -> StorageGraph:
    ids = sorted(g.nodes)
    remap = {v: ids[(i + shift) % len(ids)] * 7 + 100 for i, v in enumerate(ids)}
    return StorageGraph({remap[v]: lab for v, lab in g.nodes.items()},
                        {(min(remap[a], remap[b]), max(remap[a], remap[b]))
                         for a, b in g.edges},
                        remap[g.active])


def test_invariant_under_renaming():
    g = StorageGraph({1: "A", 2: "B", 3: "C"}, {(1, 2), (2, 3)}, 1)
    for shift in range(3):
        assert canonical_hash(permuted(g, shift)) == canonical_hash(g)


def test_label_sensitivity():
    g1 = StorageGraph({1: "A", 2: "B", 3: "C"}, {(1, 2), (2, 3)}, 1)
    g2 = StorageGraph({1: "A", 2: "C", 3: "B"}, {(1, 2), (2, 3)}, 1)
    assert canonical_hash(g1) != canonical_hash(g2)


def test_active_sensitivity():
    g1 = StorageGraph({1: "A", 2: "A"}, {(1, 2)}, 1)
    g2 = StorageGraph({1: "A", 2: "A"}, {(1, 2)}, 2)
    assert canonical_hash(g1) == canonical_hash(g2)  # symmetric ends
    g3 = StorageGraph({1: "A", 2: "B", 3: "A"}, {(1, 2), (2, 3)}, 1)
    g4 = StorageGraph({1: "A", 2: "B", 3: "A"}, {(1, 2), (2, 3)}, 2)
    assert canonical_hash(g3) != canonical_hash(g4)


def test_size_limit():
    nodes = {i: "A" for i in range(1, 70)}
    edges = {(i, i + 1) for i in range(1, 69)}
    with pytest.raises(SizeLimit):
        canonical_hash(StorageGraph(nodes, edges, 1), size_limit=64)


def test_agrees_with_permutation_oracle_on_all_4_node_graphs():
    """Exhaustive cross-check on every 2-labeled rooted 4-node graph."""
    ids = [1, 2, 3, 4]
    pairs = list(itertools.combinations(ids, 2))
    by_hash: dict[str, tuple] = {}
    for bits in range(2 ** len(pairs)):
        edges = {pairs[i] for i in range(len(pairs)) if bits >> i & 1}
        for labs in itertools.product("AB", repeat=4):
            for active in ids:
                g = StorageGraph(dict(zip(ids, labs)), set(edges), active)
                h = canonical_hash(g)
                oracle = brute_canon(g)
                if h in by_hash:
                    assert by_hash[h] == oracle, "hash collision across iso classes"
                else:
                    by_hash[h] = oracle
    # distinct canonical forms got distinct hashes
    assert len(set(by_hash.values())) == len(by_hash)


def test_disconnected_and_highly_symmetric_graphs():
    k4 = StorageGraph({i: "A" for i in range(1, 5)},
                      {(a, b) for a in range(1, 5) for b in range(a + 1, 5)}, 1)
    assert canonical_hash(permuted(k4, 2)) == canonical_hash(k4)
    scattered = StorageGraph({1: "A", 2: "A", 3: "A"}, set(), 2)
    assert canonical_hash(permuted(scattered, 1)) == canonical_hash(scattered)
    assert canonical_form(scattered)[0] == 3
