"""Canonical text for programs and graphs; parse(print(x)) == x."""

from __future__ import annotations

import json

from ..kum.graph import StorageGraph
from ..kum.rules import (Action, Cut, Delete, EdgeAtom, Halt, Link, Move, New,
                         NoEdgeAtom, NodeAtom, Output, Pattern, Program,
                         Relabel, RewriteRule)


def _format_atom(atom) -> str:
    if isinstance(atom, NodeAtom):
        return f"node {atom.var}:{atom.label}"
    if isinstance(atom, EdgeAtom):
        return f"edge({atom.a},{atom.b})"
    if isinstance(atom, NoEdgeAtom):
        return f"noedge({atom.a},{atom.b})"
    raise TypeError(f"not a pattern atom: {atom!r}")


def _format_action(act: Action) -> str:
    if isinstance(act, New):
        return f"new {act.var}:{act.label}"
    if isinstance(act, Delete):
        return f"del {act.var}"
    if isinstance(act, Link):
        return f"link({act.a},{act.b})"
    if isinstance(act, Cut):
        return f"cut({act.a},{act.b})"
    if isinstance(act, Relabel):
        return f"relabel {act.var}:{act.label}"
    if isinstance(act, Output):
        return f"out {json.dumps(act.text)}"
    if isinstance(act, Halt):
        return "halt"
    if isinstance(act, Move):
        return f"move {act.var}"
    raise TypeError(f"not an action: {act!r}")


def _format_pattern(p: Pattern) -> str:
    parts = [f"active {p.active_var}:{p.active_label}"]
    parts.extend(_format_atom(a) for a in p.atoms)
    return ", ".join(parts)


def format_rule(r: RewriteRule) -> str:
    body = ", ".join(_format_action(a) for a in r.actions)
    return f"rule {r.name}: {_format_pattern(r.pattern)} => {body};"


def print_program(p: Program) -> str:
    lines = [
        f"machine {p.name} labels {{{', '.join(p.alphabet)}}}"
        f" degree {p.degree_bound} radius {p.radius}"
    ]
    lines.extend(format_rule(r) for r in p.rules)
    return "\n".join(lines) + "\n"


def print_graph(g: StorageGraph, name: str = "g") -> str:
    lines = [f"graph {name} active {g.active}"]
    for v in sorted(g.nodes):
        lines.append(f"node {v} {g.nodes[v]}")
    for u, v in sorted(g.edges):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"
