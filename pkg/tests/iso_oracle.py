"""Isomorphism oracles for verifying the canonical hash exhaustively.

Two independent routes:

* small n: every labeled rooted graph is reduced to a key by explicit
  minimization over all node permutations (vectorized), and the partition of
  graphs by that key must equal the partition by hash;
* n = 6, 7: the graph atlas supplies one representative per unlabeled
  isomorphism class; within a class, two (labeling, root) variants are
  isomorphic iff an automorphism maps one onto the other, and automorphism
  groups come from brute-force permutation filtering.
"""

from __future__ import annotations

import itertools

import numpy as np

from physarum_machine.kum import StorageGraph, canonical_hash


def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {pair: i for i, pair in enumerate(itertools.combinations(range(n), 2))}


def perm_tables(n: int):
    """For each permutation: edge-bit remap vector and label-bit remap vector."""
    pairs = list(itertools.combinations(range(n), 2))
    idx = pair_index(n)
    perms = list(itertools.permutations(range(n)))
    edge_maps = np.zeros((len(perms), len(pairs)), dtype=np.int64)
    node_maps = np.zeros((len(perms), n), dtype=np.int64)
    for pi, perm in enumerate(perms):
        for bit, (a, b) in enumerate(pairs):
            x, y = perm[a], perm[b]
            edge_maps[pi, bit] = idx[(min(x, y), max(x, y))]
        for v in range(n):
            node_maps[pi, v] = perm[v]
    return perms, edge_maps, node_maps


def min_perm_keys(n: int) -> np.ndarray:
    """Oracle key for every (edges, labels, active) on n nodes, 2 labels.

    Output array is indexed [edge_bits, label_bits, active] and holds the
    minimum over all permutations of the packed (edges, labels, active)
    integer, i.e. a canonical key obtained purely by permutation search.
    """
    m = n * (n - 1) // 2
    perms, edge_maps, node_maps = perm_tables(n)
    n_edges, n_labels = 1 << m, 1 << n
    edge_bits = (np.arange(n_edges)[:, None] >> np.arange(m)[None, :]) & 1
    label_bits = (np.arange(n_labels)[:, None] >> np.arange(n)[None, :]) & 1
    best = None
    for pi in range(len(perms)):
        e_perm = (edge_bits << edge_maps[pi][None, :]).sum(axis=1) if m else np.zeros(1, dtype=np.int64)
        l_perm = (label_bits << node_maps[pi][None, :]).sum(axis=1)
        a_perm = node_maps[pi]
        key = (e_perm[:, None, None].astype(np.int64) << (n + 4)) \
            + (l_perm[None, :, None] << 4) + a_perm[None, None, :]
        best = key if best is None else np.minimum(best, key)
    return best


def graph_from_bits(n: int, edge_bits: int, label_bits: int, active: int) -> StorageGraph:
    pairs = list(itertools.combinations(range(n), 2))
    edges = {(a + 1, b + 1) for i, (a, b) in enumerate(pairs) if edge_bits >> i & 1}
    labels = {v + 1: ("B" if label_bits >> v & 1 else "A") for v in range(n)}
    return StorageGraph(labels, edges, active + 1)


def automorphisms(n: int, adjacency: np.ndarray, perms_arr: np.ndarray) -> np.ndarray:
    """All permutations preserving the adjacency matrix, by brute force."""
    permuted = adjacency[perms_arr[:, :, None], perms_arr[:, None, :]]
    ok = (permuted == adjacency[None, :, :]).all(axis=(1, 2))
    return perms_arr[ok]


def orbit_key(labels_bits: int, active: int, auts: np.ndarray, n: int) -> tuple[int, int]:
    """Canonical (labeling, root) representative under the automorphisms."""
    best = None
    for aut in auts:
        lb = 0
        for v in range(n):
            if labels_bits >> v & 1:
                lb |= 1 << int(aut[v])
        cand = (lb, int(aut[active]))
        if best is None or cand < best:
            best = cand
    return best
