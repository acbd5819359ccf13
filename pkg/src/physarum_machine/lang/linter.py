"""Static checks on parsed programs.

Four finding families: (address) patterns that cannot resolve by unique
label walks, (radius) patterns wider than the active zone, (degree) rules
that can push a node past the degree bound on some valid graph - these carry
an executable witness graph - and (shadowed) rules unreachable behind an
earlier rule with the same pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..kum.graph import StorageGraph, validate_graph
from ..kum.machine import InvariantBreach, apply_rule, MachineState
from ..kum.rules import (Cut, Delete, EdgeAtom, Link, Move, New, NoEdgeAtom,
                         NodeAtom, Pattern, Program, Relabel, RewriteRule)
from .printer import print_graph


@dataclass(frozen=True)
class Finding:
    kind: str  # address | radius | degree | new-label | shadowed
    rule: str
    message: str
    witness: Optional[str] = None  # .kg source of a graph exhibiting the problem

    def __str__(self) -> str:
        return f"{self.rule}: {self.kind}: {self.message}"


def _pattern_adjacency(p: Pattern) -> dict[str, list[str]]:
    adj: dict[str, list[str]] = {v: [] for v in p.node_vars()}
    for a, b in p.edges():
        if a in adj and b in adj and b not in adj[a]:
            adj[a].append(b)
            adj[b].append(a)
    return adj


def _walk_depths(p: Pattern) -> dict[str, int]:
    """BFS depth of every reachable pattern variable from the active one."""
    labels = p.node_vars()
    adj = _pattern_adjacency(p)
    depth = {p.active_var: 0}
    frontier = [p.active_var]
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(adj[v], key=lambda x: (labels[x], x)):
                if w not in depth:
                    depth[w] = depth[v] + 1
                    nxt.append(w)
        frontier = nxt
    return depth


def _address_findings(rule: RewriteRule) -> list[Finding]:
    out = []
    p = rule.pattern
    try:
        labels = p.node_vars()
    except Exception as exc:
        return [Finding("address", rule.name, str(exc))]
    adj = _pattern_adjacency(p)
    for v in sorted(labels):
        seen: dict[str, str] = {}
        for w in sorted(adj[v]):
            if labels[w] in seen:
                out.append(Finding(
                    "address", rule.name,
                    f"neighbors {seen[labels[w]]!r} and {w!r} of {v!r} share label"
                    f" {labels[w]!r}; the pattern can never match a valid graph"))
            seen[labels[w]] = w
    depth = _walk_depths(p)
    for v in sorted(set(labels) - set(depth)):
        out.append(Finding(
            "address", rule.name,
            f"variable {v!r} is not reachable from the active variable by"
            f" required edges, so it cannot be resolved"))
    return out


def _radius_findings(rule: RewriteRule, radius: int) -> list[Finding]:
    depth = _walk_depths(rule.pattern)
    out = []
    for v, d in sorted(depth.items()):
        if d > radius:
            out.append(Finding(
                "radius", rule.name,
                f"variable {v!r} sits at distance {d} from the active node,"
                f" outside the zone radius {radius}"))
    return out


def _pattern_witness(rule: RewriteRule, degree_bound: int) -> Optional[tuple[StorageGraph, dict[str, int]]]:
    """Embed the pattern in a graph where every variable already has full
    degree, padding with fresh-labeled leaves.  None if the pattern itself
    is malformed (covered by other findings)."""
    p = rule.pattern
    labels = p.node_vars()
    depth = _walk_depths(p)
    if set(depth) != set(labels):
        return None
    order = sorted(labels, key=lambda v: (depth[v], v))
    ids = {v: i + 1 for i, v in enumerate(order)}
    g = StorageGraph({ids[v]: labels[v] for v in order}, set(), active=ids[p.active_var])
    for a, b in p.edges():
        if not g.has_edge(ids[a], ids[b]):
            g.add_edge(ids[a], ids[b])
    pad = g.fresh_id()
    for v in order:
        taken = {g.label(w) for w in g.neighbors(ids[v])}
        k = 0
        while g.degree(ids[v]) < degree_bound:
            lab = f"X{k}"
            k += 1
            if lab in taken:
                continue
            taken.add(lab)
            g.add_node(pad, lab)
            g.add_edge(ids[v], pad)
            pad += 1
    if not validate_graph(g, degree_bound).ok:
        return None
    return g, dict(ids)


def _degree_findings(rule: RewriteRule, degree_bound: int) -> list[Finding]:
    built = _pattern_witness(rule, degree_bound)
    if built is None:
        return []
    witness, binding = built
    try:
        apply_rule(MachineState(witness.copy()), rule, binding, degree_bound)
        return []
    except InvariantBreach as exc:
        if "degree" not in exc.detail:
            return []
        return [Finding(
            "degree", rule.name,
            f"on a graph where matched nodes already have degree {degree_bound},"
            f" applying the rule breaches the bound: {exc.detail}",
            witness=print_graph(witness, name=f"{rule.name}_witness"))]


def _new_label_findings(rule: RewriteRule) -> list[Finding]:
    out = []
    p = rule.pattern
    labels = p.node_vars()
    # labels known to sit next to the attachment point (the active node)
    var_at: dict[str, str] = {}  # var -> current label, for pattern vars
    for v in labels:
        var_at[v] = labels[v]
    neighbor_vars = {b if a == p.active_var else a
                     for a, b in p.edges() if p.active_var in (a, b)}
    tracking = True
    for act in rule.actions:
        if not tracking:
            break
        if isinstance(act, New):
            clash = sorted(v for v in neighbor_vars if var_at.get(v) == act.label)
            if clash:
                out.append(Finding(
                    "new-label", rule.name,
                    f"new node {act.var!r} labeled {act.label!r} attaches to the"
                    f" active node, which already has a neighbor with that label"
                    f" ({clash[0]!r})"))
            var_at[act.var] = act.label
            neighbor_vars.add(act.var)
        elif isinstance(act, Link):
            if act.a == p.active_var:
                neighbor_vars.add(act.b)
            if act.b == p.active_var:
                neighbor_vars.add(act.a)
        elif isinstance(act, Cut):
            if act.a == p.active_var:
                neighbor_vars.discard(act.b)
            if act.b == p.active_var:
                neighbor_vars.discard(act.a)
        elif isinstance(act, Delete):
            neighbor_vars.discard(act.var)
            var_at.pop(act.var, None)
        elif isinstance(act, Relabel):
            var_at[act.var] = act.label
        elif isinstance(act, Move):
            tracking = False  # the attachment point changes; nothing more to say
    return out


def _canonical_pattern_key(p: Pattern) -> Optional[tuple]:
    labels = p.node_vars()
    depth = _walk_depths(p)
    if set(depth) != set(labels):
        return None
    adj = _pattern_adjacency(p)
    for v in labels:
        nbr_labels = [labels[w] for w in adj[v]]
        if len(nbr_labels) != len(set(nbr_labels)):
            return None
    rename: dict[str, str] = {}
    frontier = [p.active_var]
    rename[p.active_var] = "v0"
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(adj[v], key=lambda x: labels[x]):
                if w not in rename:
                    rename[w] = f"v{len(rename)}"
                    nxt.append(w)
        frontier = nxt
    nodes = tuple(sorted((rename[v], labels[v]) for v in labels))
    edges = tuple(sorted(tuple(sorted((rename[a], rename[b]))) for a, b in p.edges()))
    forb = tuple(sorted(tuple(sorted((rename[a], rename[b]))) for a, b in p.forbidden()))
    return (p.active_label, nodes, edges, forb)


def lint_program(program: Program) -> list[Finding]:
    findings: list[Finding] = []
    seen_patterns: dict[tuple, str] = {}
    for rule in program.rules:
        addr = _address_findings(rule)
        findings.extend(addr)
        findings.extend(_radius_findings(rule, program.radius))
        if not addr:
            findings.extend(_degree_findings(rule, program.degree_bound))
            findings.extend(_new_label_findings(rule))
            key = _canonical_pattern_key(rule.pattern)
            if key is not None:
                if key in seen_patterns:
                    findings.append(Finding(
                        "shadowed", rule.name,
                        f"pattern is identical to rule {seen_patterns[key]!r},"
                        f" which always matches first"))
                else:
                    seen_patterns[key] = rule.name
    return findings
