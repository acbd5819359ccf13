"""Rewrite rules: patterns over the active zone and primitive actions.

A pattern names the active node plus nearby nodes by label; because neighbor
labels are distinct on a valid graph, every pattern variable resolves by a
unique label walk, so matching is deterministic and needs no search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


class AmbiguousPattern(ValueError):
    """Pattern is not address-deterministic (should be caught by lint)."""


# -- pattern atoms -----------------------------------------------------------

@dataclass(frozen=True)
class NodeAtom:
    var: str
    label: str


@dataclass(frozen=True)
class EdgeAtom:
    a: str
    b: str


@dataclass(frozen=True)
class NoEdgeAtom:
    a: str
    b: str


PatternAtom = Union[NodeAtom, EdgeAtom, NoEdgeAtom]


@dataclass(frozen=True)
class Pattern:
    active_var: str
    active_label: str
    atoms: tuple[PatternAtom, ...] = ()

    def node_vars(self) -> dict[str, str]:
        """All pattern variables with their required labels."""
        out = {self.active_var: self.active_label}
        for atom in self.atoms:
            if isinstance(atom, NodeAtom):
                if atom.var in out and out[atom.var] != atom.label:
                    raise AmbiguousPattern(
                        f"variable {atom.var} constrained to two labels")
                out[atom.var] = atom.label
        return out

    def edges(self) -> list[tuple[str, str]]:
        return [(a.a, a.b) for a in self.atoms if isinstance(a, EdgeAtom)]

    def forbidden(self) -> list[tuple[str, str]]:
        return [(a.a, a.b) for a in self.atoms if isinstance(a, NoEdgeAtom)]


# -- actions ----------------------------------------------------------------

@dataclass(frozen=True)
class New:
    var: str
    label: str


@dataclass(frozen=True)
class Delete:
    var: str


@dataclass(frozen=True)
class Link:
    a: str
    b: str


@dataclass(frozen=True)
class Cut:
    a: str
    b: str


@dataclass(frozen=True)
class Relabel:
    var: str
    label: str


@dataclass(frozen=True)
class Output:
    text: str


@dataclass(frozen=True)
class Halt:
    pass


@dataclass(frozen=True)
class Move:
    var: str


Action = Union[New, Delete, Link, Cut, Relabel, Output, Halt, Move]


@dataclass(frozen=True)
class RewriteRule:
    name: str
    pattern: Pattern
    actions: tuple[Action, ...]

    @property
    def move_to(self) -> Optional[str]:
        for act in self.actions:
            if isinstance(act, Move):
                return act.var
        return None


@dataclass(frozen=True)
class Program:
    """Ordered rule list; the first matching rule wins."""

    name: str
    alphabet: tuple[str, ...]
    degree_bound: int = 3
    radius: int = 1
    rules: tuple[RewriteRule, ...] = ()


def match_pattern(graph, pattern: Pattern) -> Optional[dict[str, int]]:
    """Bind pattern variables to node ids, or None if no match.

    Resolution walks outward from the active variable: any unbound variable
    that shares a required edge with a bound one is fixed to the unique
    neighbor carrying its label.  All edge / no-edge constraints are checked
    on the final binding, so the result is independent of resolution order.
    """
    labels = pattern.node_vars()
    if graph.label(graph.active) != pattern.active_label:
        return None
    binding: dict[str, int] = {pattern.active_var: graph.active}
    pending = [e for e in pattern.edges()]
    progress = True
    while progress:
        progress = False
        for a, b in pending:
            known, want = (a, b) if a in binding and b not in binding else (b, a)
            if known not in binding or want in binding:
                continue
            if want not in labels:
                raise AmbiguousPattern(f"variable {want} has no label constraint")
            hits = [w for w in graph.neighbors(binding[known])
                    if graph.label(w) == labels[want]]
            if len(hits) > 1:
                # impossible on a valid graph; defensive
                raise AmbiguousPattern(
                    f"two neighbors of {known} share label {labels[want]}")
            if not hits:
                return None
            binding[want] = hits[0]
            progress = True
    unresolved = set(labels) - set(binding)
    if unresolved:
        raise AmbiguousPattern(
            f"variables {sorted(unresolved)} unreachable from the active variable")
    # injectivity plus full constraint check
    if len(set(binding.values())) != len(binding):
        return None
    for var, lab in labels.items():
        if graph.label(binding[var]) != lab:
            return None
    for a, b in pattern.edges():
        if not graph.has_edge(binding[a], binding[b]):
            return None
    for a, b in pattern.forbidden():
        if graph.has_edge(binding[a], binding[b]):
            return None
    return binding
