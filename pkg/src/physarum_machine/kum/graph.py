"""Storage graph for the pointer machine.

The storage is a finite connected undirected labeled graph with one active
node.  Node degrees are bounded by a per-program constant D, and the
neighbors of any node must carry pairwise distinct labels, which makes every
node reachable from the active node by a unique word of labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence


class AlphabetError(ValueError):
    """Raised when a word contains a symbol outside the declared alphabet."""


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Normalized undirected edge (no self-loops allowed)."""
    if u == v:
        raise ValueError(f"self-loop at node {u}")
    return (u, v) if u < v else (v, u)


@dataclass
class StorageGraph:
    """Labeled undirected simple graph with a distinguished active node.

    Node ids are arbitrary ints; labels are identifier strings.  Mutating
    methods keep the edge set normalized but do not re-check the global
    invariants; call :func:`validate_graph` for that.
    """

    nodes: dict[int, str] = field(default_factory=dict)
    edges: set[tuple[int, int]] = field(default_factory=set)
    active: int = 0

    def copy(self) -> "StorageGraph":
        return StorageGraph(dict(self.nodes), set(self.edges), self.active)

    # -- structure ---------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and edge_key(u, v) in self.edges

    def neighbors(self, v: int) -> list[int]:
        """Neighbor ids in ascending order."""
        out = [b if a == v else a for a, b in self.edges if v in (a, b)]
        out.sort()
        return out

    def degree(self, v: int) -> int:
        return sum(1 for a, b in self.edges if v in (a, b))

    def label(self, v: int) -> str:
        return self.nodes[v]

    def fresh_id(self) -> int:
        return max(self.nodes, default=0) + 1

    # -- mutation ----------------------------------------------------------

    def add_node(self, v: int, label: str) -> None:
        if v in self.nodes:
            raise ValueError(f"node {v} already present")
        self.nodes[v] = label

    def remove_node(self, v: int) -> list[tuple[int, int]]:
        """Remove v and its incident edges; returns the removed edges."""
        incident = sorted(e for e in self.edges if v in e)
        for e in incident:
            self.edges.discard(e)
        del self.nodes[v]
        return incident

    def add_edge(self, u: int, v: int) -> None:
        if u not in self.nodes or v not in self.nodes:
            raise ValueError(f"edge ({u},{v}) references a missing node")
        k = edge_key(u, v)
        if k in self.edges:
            raise ValueError(f"edge ({u},{v}) already present")
        self.edges.add(k)

    def remove_edge(self, u: int, v: int) -> None:
        k = edge_key(u, v)
        if k not in self.edges:
            raise ValueError(f"edge ({u},{v}) not present")
        self.edges.discard(k)

    # -- traversal ---------------------------------------------------------

    def component(self, start: int) -> set[int]:
        """Node ids reachable from start."""
        seen = {start}
        frontier = [start]
        while frontier:
            nxt: list[int] = []
            for v in frontier:
                for w in self.neighbors(v):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen

    def is_connected(self) -> bool:
        if not self.nodes:
            return False
        start = next(iter(sorted(self.nodes)))
        return len(self.component(start)) == len(self.nodes)

    def zone(self, radius: int) -> set[int]:
        """Active zone: ids within graph distance <= radius of the active node."""
        seen = {self.active}
        frontier = [self.active]
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for w in self.neighbors(v):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen


@dataclass
class Violation:
    kind: str
    message: str
    nodes: tuple[int, ...] = ()

    def __str__(self) -> str:
        return self.message


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def validate_graph(g: StorageGraph, degree_bound: int) -> ValidationReport:
    """Check all storage invariants; violations are data, not exceptions."""
    out: list[Violation] = []
    if not g.nodes:
        out.append(Violation("empty", "graph has no nodes"))
        return ValidationReport(out)
    if g.active not in g.nodes:
        out.append(Violation("active", f"active node {g.active} is not in the graph", (g.active,)))
    for a, b in sorted(g.edges):
        if a == b:
            out.append(Violation("loop", f"self-loop at node {a}", (a,)))
        if a not in g.nodes or b not in g.nodes:
            out.append(Violation("dangling", f"edge ({a},{b}) references a missing node", (a, b)))
    if not g.is_connected():
        start = min(g.nodes)
        inside = g.component(start)
        outside = sorted(set(g.nodes) - inside)
        out.append(Violation("disconnected", f"disconnected: nodes {outside} unreachable from {start}", tuple(outside)))
    for v in sorted(g.nodes):
        deg = g.degree(v)
        if deg > degree_bound:
            out.append(Violation("degree", f"degree {deg} of node {v} exceeds bound {degree_bound}", (v,)))
        labels: dict[str, int] = {}
        for w in g.neighbors(v):
            lab = g.nodes.get(w)
            if lab is None:
                continue
            if lab in labels:
                out.append(Violation(
                    "addressing",
                    f"addressing property at {v}: neighbors {labels[lab]} and {w} share label {lab}",
                    (v, labels[lab], w),
                ))
            else:
                labels[lab] = w
    return ValidationReport(out)


# -- label-word addressing --------------------------------------------------

def node_address(g: StorageGraph, target: int) -> Optional[list[str]]:
    """Shortest label word leading from the active node to target.

    On a valid graph the word resolves uniquely (neighbor labels are
    distinct); among equal-length paths the lexicographically smallest word
    is returned.  None if target is unreachable (impossible on valid graphs).
    """
    if target not in g.nodes:
        raise KeyError(f"unknown node {target}")
    if target == g.active:
        return []
    words: dict[int, list[str]] = {g.active: []}
    frontier = [g.active]
    while frontier:
        nxt: list[int] = []
        # visit in word order so the first word assigned is the smallest
        for v in sorted(frontier, key=lambda n: words[n]):
            for w in sorted(g.neighbors(v), key=g.label):
                if w not in words:
                    words[w] = words[v] + [g.label(w)]
                    if w == target:
                        return words[w]
                    nxt.append(w)
        frontier = nxt
    return None


def resolve_address(g: StorageGraph, word: Sequence[str]) -> Optional[int]:
    """Follow a label word from the active node; None if a step is ambiguous
    or no neighbor carries the wanted label."""
    at = g.active
    for lab in word:
        hits = [w for w in g.neighbors(at) if g.label(w) == lab]
        if len(hits) != 1:
            return None
        at = hits[0]
    return at


# -- input encoding ----------------------------------------------------------

HEAD_LABEL = "H"

# Position tags cycle mod 3 so that the two chain neighbors of any node always
# differ in tag; a mod-2 alternation breaks on words like "aba".
_TAG_PERIOD = 3


def symbol_label(symbol: str, position: int) -> str:
    return f"{symbol}{position % _TAG_PERIOD}"


def encode_input(word: Sequence[str], alphabet: Optional[Iterable[str]] = None) -> StorageGraph:
    """Encode a word as a chain graph with the active node at the head.

    Each symbol occupies one node labeled ``<symbol><tag>`` where the tag is
    the 1-based position mod 3, keeping neighbor labels distinct for any word.
    """
    allowed = set(alphabet) if alphabet is not None else None
    for s in word:
        if not s or not all(c.isalnum() or c == "_" for c in s):
            raise AlphabetError(f"symbol {s!r} is not an identifier")
        if s.endswith(("0", "1", "2")):
            raise AlphabetError(f"symbol {s!r} ends with a reserved tag digit")
        if allowed is not None and s not in allowed:
            raise AlphabetError(f"symbol {s!r} is not in the alphabet")
    g = StorageGraph({1: HEAD_LABEL}, set(), active=1)
    prev = 1
    for i, s in enumerate(word, start=1):
        nid = i + 1
        g.add_node(nid, symbol_label(s, i))
        g.add_edge(prev, nid)
        prev = nid
    return g


def decode_input(g: StorageGraph) -> list[str]:
    """Inverse of encode_input: walk the chain from the head, strip tags."""
    heads = [v for v in sorted(g.nodes) if g.label(v) == HEAD_LABEL]
    if len(heads) != 1:
        raise ValueError(f"expected one head node, found {len(heads)}")
    word: list[str] = []
    prev, at = None, heads[0]
    while True:
        nxt = [w for w in g.neighbors(at) if w != prev]
        if not nxt:
            return word
        if len(nxt) > 1:
            raise ValueError(f"node {at} is not on a chain")
        prev, at = at, nxt[0]
        lab = g.label(at)
        if len(lab) < 2 or lab[-1] not in "012":
            raise ValueError(f"label {lab!r} carries no position tag")
        word.append(lab[:-1])
