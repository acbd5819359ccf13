"""Ready-made rule programs: unary successor and list append.

Both operate on chain encodings where a node's label carries its symbol plus
a position tag cycling mod 3 (see graph.encode_input).  The tag arithmetic
lets rules tell the two chain directions apart: the right neighbor of a node
tagged t is tagged (t+1) mod 3, the left one (t+2) mod 3.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

from .graph import HEAD_LABEL, StorageGraph, symbol_label
from .rules import (Delete, EdgeAtom, Halt, Link, Move, New, NodeAtom,
                    Pattern, Program, Relabel, RewriteRule)

TAGS = (0, 1, 2)


def build_successor_program(symbol: str = "m") -> Program:
    """Walk to the end of a unary chain and append one more mark.

    Walk rules move right while a right neighbor exists; once none matches,
    the positional append rule for the current tag fires and halts.
    """
    lab = lambda t: symbol_label(symbol, t)
    rules = [
        RewriteRule(
            "enter",
            Pattern("a", HEAD_LABEL, (NodeAtom("x", lab(1)), EdgeAtom("a", "x"))),
            (Move("x"),),
        )
    ]
    for t in TAGS:
        rules.append(RewriteRule(
            f"walk{t}",
            Pattern("a", lab(t), (NodeAtom("x", lab(t + 1)), EdgeAtom("a", "x"))),
            (Move("x"),),
        ))
    rules.append(RewriteRule(
        "grow_empty", Pattern("a", HEAD_LABEL), (New("c", lab(1)), Halt())))
    for t in TAGS:
        rules.append(RewriteRule(
            f"grow{t}", Pattern("a", lab(t)), (New("c", lab(t + 1)), Halt())))
    return Program(
        name="unary_successor",
        alphabet=(HEAD_LABEL,) + tuple(lab(t) for t in TAGS),
        degree_bound=3,
        radius=1,
        rules=tuple(rules),
    )


# -- list append --------------------------------------------------------------
#
# The input is a hub H with two chains: the base list (labels A_<sym>_<tag>)
# and the suffix list (labels B_<sym>_<tag>).  The machine repeatedly pops the
# suffix head, remembers its symbol in a cursor label, carries it to the end
# of the base chain, appends it there, walks back, and halts when the suffix
# side is gone.

def _a(sym: str, t: int) -> str:
    return f"A_{sym}_{t % 3}"


def _b(sym: str, t: int) -> str:
    return f"B_{sym}_{t % 3}"


def _cur(sym: str, t: int, carry: str) -> str:
    return f"C_{sym}_{t % 3}_{carry}"


def _back(sym: str, t: int) -> str:
    return f"R_{sym}_{t % 3}"


def build_append_program(symbols: Sequence[str] = ("a", "b")) -> Program:
    rules: list[RewriteRule] = []
    # pop the suffix head while the base list is nonempty; rules requiring a
    # second suffix element come first so the singleton case means "last one"
    for s, t, s2, s1 in product(symbols, TAGS, symbols, symbols):
        rules.append(RewriteRule(
            f"pop_{s}{t}{s2}_{s1}",
            Pattern("h", HEAD_LABEL, (
                NodeAtom("y", _b(s, t)), EdgeAtom("h", "y"),
                NodeAtom("z", _b(s2, t + 1)), EdgeAtom("y", "z"),
                NodeAtom("x", _a(s1, 1)), EdgeAtom("h", "x"),
            )),
            (Link("h", "z"), Delete("y"), Relabel("x", _cur(s1, 1, s)), Move("x")),
        ))
    for s, t, s1 in product(symbols, TAGS, symbols):
        rules.append(RewriteRule(
            f"pop_last_{s}{t}_{s1}",
            Pattern("h", HEAD_LABEL, (
                NodeAtom("y", _b(s, t)), EdgeAtom("h", "y"),
                NodeAtom("x", _a(s1, 1)), EdgeAtom("h", "x"),
            )),
            (Delete("y"), Relabel("x", _cur(s1, 1, s)), Move("x")),
        ))
    # base list empty: append right at the hub
    for s, t, s2 in product(symbols, TAGS, symbols):
        rules.append(RewriteRule(
            f"pop_empty_{s}{t}{s2}",
            Pattern("h", HEAD_LABEL, (
                NodeAtom("y", _b(s, t)), EdgeAtom("h", "y"),
                NodeAtom("z", _b(s2, t + 1)), EdgeAtom("y", "z"),
            )),
            (Link("h", "z"), Delete("y"), New("w", _a(s, 1))),
        ))
    for s, t in product(symbols, TAGS):
        rules.append(RewriteRule(
            f"pop_empty_last_{s}{t}",
            Pattern("h", HEAD_LABEL, (NodeAtom("y", _b(s, t)), EdgeAtom("h", "y"))),
            (Delete("y"), New("w", _a(s, 1))),
        ))
    # carry the cursor toward the chain end
    for s, t, c, s2 in product(symbols, TAGS, symbols, symbols):
        rules.append(RewriteRule(
            f"fwd_{s}{t}{c}_{s2}",
            Pattern("x", _cur(s, t, c), (
                NodeAtom("y", _a(s2, t + 1)), EdgeAtom("x", "y"),
            )),
            (Relabel("x", _a(s, t)), Relabel("y", _cur(s2, t + 1, c)), Move("y")),
        ))
    # no right neighbor: append the carried symbol, turn around
    for s, t, c in product(symbols, TAGS, symbols):
        rules.append(RewriteRule(
            f"put_{s}{t}{c}",
            Pattern("x", _cur(s, t, c)),
            (New("w", _a(c, t + 1)), Relabel("x", _back(s, t))),
        ))
    # walk back toward the hub
    for s, t, s2 in product(symbols, TAGS, symbols):
        rules.append(RewriteRule(
            f"back_{s}{t}_{s2}",
            Pattern("x", _back(s, t), (
                NodeAtom("l", _a(s2, t + 2)), EdgeAtom("x", "l"),
            )),
            (Relabel("x", _a(s, t)), Relabel("l", _back(s2, t + 2)), Move("l")),
        ))
    for s in symbols:
        rules.append(RewriteRule(
            f"arrive_{s}",
            Pattern("x", _back(s, 1), (NodeAtom("h", HEAD_LABEL), EdgeAtom("x", "h"))),
            (Relabel("x", _a(s, 1)), Move("h")),
        ))
    rules.append(RewriteRule("done", Pattern("h", HEAD_LABEL), (Halt(),)))

    alphabet = {HEAD_LABEL}
    for s, t in product(symbols, TAGS):
        alphabet.update({_a(s, t), _b(s, t), _back(s, t)})
        for c in symbols:
            alphabet.add(_cur(s, t, c))
    return Program(
        name="list_append",
        alphabet=tuple(sorted(alphabet)),
        degree_bound=3,
        radius=2,
        rules=tuple(rules),
    )


def encode_append_input(base: Sequence[str], suffix: Sequence[str]) -> StorageGraph:
    """Hub with the base chain on one side and the suffix chain on the other."""
    g = StorageGraph({1: HEAD_LABEL}, set(), active=1)
    nid = 1
    prev = 1
    for i, s in enumerate(base, start=1):
        nid += 1
        g.add_node(nid, _a(s, i))
        g.add_edge(prev, nid)
        prev = nid
    prev = 1
    for i, s in enumerate(suffix, start=1):
        nid += 1
        g.add_node(nid, _b(s, i))
        g.add_edge(prev, nid)
        prev = nid
    return g


def decode_append_output(g: StorageGraph) -> list[str]:
    """Read the base chain symbols off a finished append run."""
    hubs = [v for v in sorted(g.nodes) if g.label(v) == HEAD_LABEL]
    if len(hubs) != 1:
        raise ValueError(f"expected one hub node, found {len(hubs)}")
    out: list[str] = []
    prev, at = None, hubs[0]
    while True:
        nxt = [w for w in g.neighbors(at) if w != prev]
        if not nxt:
            return out
        if len(nxt) > 1:
            raise ValueError("suffix side not consumed")
        prev, at = at, nxt[0]
        parts = g.label(at).split("_")
        if len(parts) != 3 or parts[0] != "A":
            raise ValueError(f"unexpected label {g.label(at)!r} on the base chain")
        out.append(parts[1])
