"""Exact canonical form and hash for small labeled rooted graphs.

Two storage graphs get the same hash iff they are isomorphic as labeled
graphs rooted at the active node.  The canonical form is computed by color
refinement with individualization on ties: refine node colors to a stable
partition, and where cells stay ambiguous, branch on every member and keep
the lexicographically smallest fully-discrete encoding.  Exact (not a WL
approximation), at exponential worst-case cost, hence the size cap.
"""

from __future__ import annotations

import hashlib
from typing import Optional

from .graph import StorageGraph

DEFAULT_SIZE_LIMIT = 64


class SizeLimit(ValueError):
    """Graph too large for exact canonicalization."""


def _refine(order: list[int], adj: dict[int, list[int]], colors: dict[int, int]) -> dict[int, int]:
    """Iterate (color, sorted neighbor colors) signatures to a fixed point."""
    n = len(order)
    while True:
        sigs = {
            v: (colors[v], tuple(sorted(colors[w] for w in adj[v])))
            for v in order
        }
        ranking = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {v: ranking[sigs[v]] for v in order}
        if new == colors:
            return new
        colors = new
        if len(set(colors.values())) == n:
            return colors


def _encode(order: list[int], adj: dict[int, list[int]], labels: dict[int, str],
            active: int, colors: dict[int, int]) -> tuple:
    """Encoding of a discretely-colored graph; comparable across branches."""
    pos = {v: colors[v] for v in order}
    nodes = sorted(order, key=lambda v: pos[v])
    lab_seq = tuple(labels[v] for v in nodes)
    edge_seq = tuple(sorted(
        (min(pos[u], pos[v]), max(pos[u], pos[v]))
        for u in order for v in adj[u] if u < v
    ))
    return (len(order), lab_seq, pos[active], edge_seq)


def _canonize(order: list[int], adj: dict[int, list[int]], labels: dict[int, str],
              active: int, colors: dict[int, int]) -> tuple:
    colors = _refine(order, adj, colors)
    cells: dict[int, list[int]] = {}
    for v in order:
        cells.setdefault(colors[v], []).append(v)
    split = [c for c, members in sorted(cells.items()) if len(members) > 1]
    if not split:
        return _encode(order, adj, labels, active, colors)
    # branch on the first ambiguous cell; minimum over branches is canonical
    target = cells[split[0]]
    best: Optional[tuple] = None
    for v in target:
        branched = dict(colors)
        # individualize v: shift colors >= its cell up by one, v keeps the slot
        for w in order:
            if branched[w] > colors[v] or (branched[w] == colors[v] and w != v):
                branched[w] += 1
        enc = _canonize(order, adj, labels, active, branched)
        if best is None or enc < best:
            best = enc
    assert best is not None
    return best


def canonical_form(g: StorageGraph, size_limit: int = DEFAULT_SIZE_LIMIT) -> tuple:
    """Canonical tuple (n, labels, active index, edges) of the graph."""
    n = len(g.nodes)
    if n > size_limit:
        raise SizeLimit(f"{n} nodes exceeds canonicalization bound {size_limit}")
    if n == 0:
        return (0, (), -1, ())
    order = sorted(g.nodes)
    adj: dict[int, list[int]] = {v: [] for v in order}
    for a, b in g.edges:
        adj[a].append(b)
        adj[b].append(a)
    classes = sorted({(g.nodes[v], v == g.active) for v in order})
    rank = {c: i for i, c in enumerate(classes)}
    colors = {v: rank[(g.nodes[v], v == g.active)] for v in order}
    return _canonize(order, adj, g.nodes, g.active, colors)


def canonical_hash(g: StorageGraph, size_limit: int = DEFAULT_SIZE_LIMIT) -> str:
    """Hex digest equal iff graphs are isomorphic as labeled rooted graphs."""
    form = canonical_form(g, size_limit)
    blob = repr(form).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
