"""Parsers for the rule language (.kum) and the graph format (.kg).

Parsing is total: any byte sequence yields either a result or diagnostics,
never an exception.  Rules re-synchronize at semicolons so several errors
can be reported in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..kum.graph import StorageGraph, validate_graph
from ..kum.rules import (Action, Cut, Delete, EdgeAtom, Halt, Link, Move, New,
                         NoEdgeAtom, NodeAtom, Output, Pattern, PatternAtom,
                         Program, Relabel, RewriteRule)
from .diagnostics import ParseDiagnostic, SourceSpan, has_errors

KEYWORDS = frozenset([
    "machine", "labels", "degree", "radius", "rule", "active", "node", "edge",
    "noedge", "new", "del", "link", "cut", "relabel", "out", "halt", "move",
])


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | string | punct | eof
    text: str
    span: SourceSpan
    value: object = None


def _lex(text: str, filename: str) -> tuple[list[Token], list[ParseDiagnostic]]:
    toks: list[Token] = []
    diags: list[ParseDiagnostic] = []
    line, col, i = 1, 1, 0
    n = len(text)

    def span(length: int = 1) -> SourceSpan:
        return SourceSpan(filename, line, col, length)

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "=" and i + 1 < n and text[i + 1] == ">":
            toks.append(Token("punct", "=>", span(2)))
            i += 2
            col += 2
            continue
        if c in ":;,(){}":
            toks.append(Token("punct", c, span()))
            i += 1
            col += 1
            continue
        if c == '"':
            j = i + 1
            out = []
            ok = False
            while j < n:
                if text[j] == "\\" and j + 1 < n:
                    esc = text[j + 1]
                    out.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc, esc))
                    j += 2
                    continue
                if text[j] == '"':
                    ok = True
                    break
                if text[j] == "\n":
                    break
                out.append(text[j])
                j += 1
            if not ok:
                diags.append(ParseDiagnostic("error", "unterminated string", span(j - i)))
                col += j - i
                i = j
                continue
            toks.append(Token("string", text[i:j + 1], span(j + 1 - i), "".join(out)))
            col += j + 1 - i
            i = j + 1
            continue
        if c in "0123456789":
            j = i
            while j < n and text[j] in "0123456789":
                j += 1
            toks.append(Token("int", text[i:j], span(j - i), int(text[i:j])))
            col += j - i
            i = j
            continue
        if ("a" <= c <= "z") or ("A" <= c <= "Z") or c == "_":
            j = i
            while j < n and (text[j].isascii() and (text[j].isalnum() or text[j] == "_")):
                j += 1
            toks.append(Token("ident", text[i:j], span(j - i)))
            col += j - i
            i = j
            continue
        diags.append(ParseDiagnostic("error", f"unexpected character {c!r}", span()))
        i += 1
        col += 1
    if col == 1 and line > 1:  # keep the EOF marker inside the text
        lines = text.split("\n")
        line, col = line - 1, len(lines[line - 2]) + 1
    toks.append(Token("eof", "", SourceSpan(filename, line, col, 0)))
    return toks, diags


@dataclass
class RuleSyntax:
    rule: RewriteRule
    span: SourceSpan
    atom_spans: tuple[SourceSpan, ...]
    action_spans: tuple[SourceSpan, ...]


@dataclass
class ProgramSyntax:
    program: Program
    header_span: SourceSpan
    rules: list[RuleSyntax] = field(default_factory=list)


@dataclass
class ParseResult:
    program: Optional[Program]
    syntax: Optional[ProgramSyntax]
    diagnostics: list[ParseDiagnostic]

    @property
    def ok(self) -> bool:
        return self.program is not None


class _Parser:
    def __init__(self, toks: list[Token], diags: list[ParseDiagnostic]):
        self.toks = toks
        self.pos = 0
        self.diags = diags

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def error(self, message: str, span: Optional[SourceSpan] = None) -> None:
        self.diags.append(ParseDiagnostic("error", message, span or self.cur.span))

    def warn(self, message: str, span: Optional[SourceSpan] = None) -> None:
        self.diags.append(ParseDiagnostic("warning", message, span or self.cur.span))

    def advance(self) -> Token:
        t = self.cur
        if t.kind != "eof":
            self.pos += 1
        return t

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        t = self.cur
        if t.kind == kind and (text is None or t.text == text):
            return self.advance()
        return None

    def expect_keyword(self, word: str) -> bool:
        if self.accept("ident", word):
            return True
        self.error(f"expected '{word}', found {self.cur.text!r}")
        return False

    def expect_punct(self, text: str) -> bool:
        if self.accept("punct", text):
            return True
        self.error(f"expected '{text}', found {self.cur.text!r}")
        return False

    def name(self, what: str, allow_keyword: bool = False) -> Optional[Token]:
        t = self.cur
        if t.kind == "ident":
            if not allow_keyword and t.text in KEYWORDS:
                self.error(f"keyword {t.text!r} cannot be used as {what}", t.span)
                self.advance()
                return None
            return self.advance()
        self.error(f"expected {what}, found {t.text!r}")
        return None

    def sync_to_semicolon(self) -> None:
        while self.cur.kind != "eof":
            if self.cur.kind == "punct" and self.cur.text == ";":
                self.advance()
                return
            if self.cur.kind == "ident" and self.cur.text == "rule":
                return
            self.advance()


def _parse_var_label(p: _Parser) -> Optional[tuple[str, str]]:
    var = p.name("a variable")
    if var is None:
        return None
    if not p.expect_punct(":"):
        return None
    lab = p.name("a label")
    if lab is None:
        return None
    return var.text, lab.text


def _parse_pair(p: _Parser) -> Optional[tuple[str, str]]:
    if not p.expect_punct("("):
        return None
    a = p.name("a variable")
    if a is None or not p.expect_punct(","):
        return None
    b = p.name("a variable")
    if b is None or not p.expect_punct(")"):
        return None
    return a.text, b.text


def _parse_pattern(p: _Parser) -> Optional[tuple[Pattern, list[SourceSpan]]]:
    spans = [p.cur.span]
    if not p.expect_keyword("active"):
        return None
    head = _parse_var_label(p)
    if head is None:
        return None
    atoms: list[PatternAtom] = []
    while p.accept("punct", ","):
        span = p.cur.span
        if p.accept("ident", "node"):
            vl = _parse_var_label(p)
            if vl is None:
                return None
            atoms.append(NodeAtom(*vl))
        elif p.accept("ident", "edge"):
            pr = _parse_pair(p)
            if pr is None:
                return None
            atoms.append(EdgeAtom(*pr))
        elif p.accept("ident", "noedge"):
            pr = _parse_pair(p)
            if pr is None:
                return None
            atoms.append(NoEdgeAtom(*pr))
        else:
            # the comma belonged to the action list start ("=>" follows later)
            p.pos -= 1
            break
        spans.append(span)
    return Pattern(head[0], head[1], tuple(atoms)), spans


def _parse_action(p: _Parser) -> Optional[tuple[Action, SourceSpan]]:
    span = p.cur.span
    if p.accept("ident", "new"):
        vl = _parse_var_label(p)
        return None if vl is None else (New(*vl), span)
    if p.accept("ident", "del"):
        v = p.name("a variable")
        return None if v is None else (Delete(v.text), span)
    if p.accept("ident", "link"):
        pr = _parse_pair(p)
        return None if pr is None else (Link(*pr), span)
    if p.accept("ident", "cut"):
        pr = _parse_pair(p)
        return None if pr is None else (Cut(*pr), span)
    if p.accept("ident", "relabel"):
        vl = _parse_var_label(p)
        return None if vl is None else (Relabel(*vl), span)
    if p.accept("ident", "out"):
        t = p.cur
        if t.kind != "string":
            p.error(f"expected a string after 'out', found {t.text!r}")
            return None
        p.advance()
        return Output(str(t.value)), span
    if p.accept("ident", "halt"):
        return Halt(), span
    if p.accept("ident", "move"):
        v = p.name("a variable")
        return None if v is None else (Move(v.text), span)
    p.error(f"expected an action, found {p.cur.text!r}")
    return None


def _check_rule(p: _Parser, rule: RewriteRule, span: SourceSpan,
                atom_spans: tuple[SourceSpan, ...], action_spans: tuple[SourceSpan, ...],
                alphabet: set[str]) -> bool:
    ok = True
    bound = {rule.pattern.active_var}
    labels_used = {(rule.pattern.active_label, span)}
    for atom, aspan in zip(rule.pattern.atoms, atom_spans[1:]):
        if isinstance(atom, NodeAtom):
            if atom.var in bound:
                p.error(f"duplicate variable {atom.var!r}", aspan)
                ok = False
            bound.add(atom.var)
            labels_used.add((atom.label, aspan))
        else:
            for v in (atom.a, atom.b):
                if v not in bound:
                    p.error(f"unbound variable {v!r}", aspan)
                    ok = False
    for i, (act, aspan) in enumerate(zip(rule.actions, action_spans)):
        if isinstance(act, New):
            if act.var in bound:
                p.error(f"duplicate variable {act.var!r}", aspan)
                ok = False
            bound.add(act.var)
            labels_used.add((act.label, aspan))
        elif isinstance(act, (Link, Cut)):
            for v in (act.a, act.b):
                if v not in bound:
                    p.error(f"unbound variable {v!r}", aspan)
                    ok = False
        elif isinstance(act, (Delete, Move)):
            if act.var not in bound:
                p.error(f"unbound variable {act.var!r}", aspan)
                ok = False
        if isinstance(act, Relabel):
            if act.var not in bound:
                p.error(f"unbound variable {act.var!r}", aspan)
                ok = False
            labels_used.add((act.label, aspan))
        if isinstance(act, Move) and i != len(rule.actions) - 1:
            p.error("'move' must be the last action", aspan)
            ok = False
    if sum(isinstance(a, Move) for a in rule.actions) > 1:
        p.error("at most one 'move' per rule", span)
        ok = False
    for lab, lspan in sorted(labels_used, key=lambda x: (x[0], x[1].line, x[1].column)):
        if lab not in alphabet:
            p.error(f"label {lab!r} is not in the declared alphabet", lspan)
            ok = False
    return ok


def parse_program(text: str, filename: str = "<program>") -> ParseResult:
    toks, diags = _lex(text, filename)
    p = _Parser(toks, diags)

    header_span = p.cur.span
    alphabet: list[str] = []
    name = "program"
    degree, radius = 3, 1
    if p.expect_keyword("machine"):
        t = p.name("a machine name")
        if t is not None:
            name = t.text
        if p.expect_keyword("labels") and p.expect_punct("{"):
            while True:
                lab = p.name("a label")
                if lab is None:
                    break
                if lab.text in alphabet:
                    p.error(f"duplicate label {lab.text!r}", lab.span)
                else:
                    alphabet.append(lab.text)
                if not p.accept("punct", ","):
                    break
            p.expect_punct("}")
        if p.expect_keyword("degree"):
            t = p.cur
            if p.accept("int"):
                degree = int(t.value)  # type: ignore[arg-type]
                if degree < 1:
                    p.error("degree bound must be >= 1", t.span)
            else:
                p.error(f"expected an integer degree, found {t.text!r}")
        if p.expect_keyword("radius"):
            t = p.cur
            if p.accept("int"):
                radius = int(t.value)  # type: ignore[arg-type]
                if radius < 1:
                    p.error("radius must be >= 1", t.span)
            else:
                p.error(f"expected an integer radius, found {t.text!r}")

    rules: list[RewriteRule] = []
    rule_syntax: list[RuleSyntax] = []
    seen_names: dict[str, SourceSpan] = {}
    alpha_set = set(alphabet)
    while p.cur.kind != "eof":
        rule_span = p.cur.span
        if not p.accept("ident", "rule"):
            p.error(f"expected 'rule', found {p.cur.text!r}")
            p.advance()
            p.sync_to_semicolon()
            continue
        t = p.name("a rule name")
        if t is None:
            p.sync_to_semicolon()
            continue
        rname = t.text
        if rname in seen_names:
            p.error(f"duplicate rule name {rname!r} (first at line {seen_names[rname].line})", t.span)
        seen_names.setdefault(rname, t.span)
        if not p.expect_punct(":"):
            p.sync_to_semicolon()
            continue
        pat = _parse_pattern(p)
        if pat is None or not p.expect_punct("=>"):
            p.sync_to_semicolon()
            continue
        pattern, atom_spans = pat
        actions: list[Action] = []
        action_spans: list[SourceSpan] = []
        bad = False
        while True:
            act = _parse_action(p)
            if act is None:
                bad = True
                break
            actions.append(act[0])
            action_spans.append(act[1])
            if not p.accept("punct", ","):
                break
        if bad:
            p.sync_to_semicolon()
            continue
        if not p.expect_punct(";"):
            p.sync_to_semicolon()
            continue
        rule = RewriteRule(rname, pattern, tuple(actions))
        if _check_rule(p, rule, rule_span, tuple(atom_spans), tuple(action_spans), alpha_set):
            rules.append(rule)
            rule_syntax.append(RuleSyntax(rule, rule_span, tuple(atom_spans), tuple(action_spans)))

    if not rules and not has_errors(p.diags):
        p.warn("no rules", header_span)
    if has_errors(p.diags):
        return ParseResult(None, None, p.diags)
    program = Program(name, tuple(alphabet), degree, radius, tuple(rules))
    return ParseResult(program, ProgramSyntax(program, header_span, rule_syntax), p.diags)


# -- graph format -------------------------------------------------------------

@dataclass
class GraphParseResult:
    graph: Optional[StorageGraph]
    diagnostics: list[ParseDiagnostic]

    @property
    def ok(self) -> bool:
        return self.graph is not None


def _ascii_int(token: str) -> Optional[int]:
    body = token[1:] if token.startswith("-") else token
    if body and all(c in "0123456789" for c in body):
        return int(token)
    return None


def parse_graph(text: str, filename: str = "<graph>", degree_bound: int = 3) -> GraphParseResult:
    diags: list[ParseDiagnostic] = []
    nodes: dict[int, str] = {}
    node_lines: dict[int, int] = {}
    edges: set[tuple[int, int]] = set()
    active: Optional[int] = None
    name_seen = False

    def err(line_no: int, col: int, msg: str) -> None:
        diags.append(ParseDiagnostic("error", msg, SourceSpan(filename, line_no, col)))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "graph":
            if name_seen:
                err(line_no, 1, "duplicate graph header")
                continue
            name_seen = True
            aid = _ascii_int(parts[3]) if len(parts) == 4 else None
            if len(parts) != 4 or parts[2] != "active" or aid is None:
                err(line_no, 1, "expected 'graph <name> active <id>'")
                continue
            active = aid
        elif parts[0] == "node":
            nid = _ascii_int(parts[1]) if len(parts) == 3 else None
            if nid is None:
                err(line_no, 1, "expected 'node <id> <label>'")
                continue
            if nid in nodes:
                err(line_no, 1, f"duplicate node id {nid} (first at line {node_lines[nid]})")
                continue
            nodes[nid] = parts[2]
            node_lines[nid] = line_no
        elif parts[0] == "edge":
            ids = [_ascii_int(x) for x in parts[1:]] if len(parts) == 3 else [None]
            if any(x is None for x in ids):
                err(line_no, 1, "expected 'edge <id> <id>'")
                continue
            u, v = ids
            if u == v:
                err(line_no, 1, f"self-loop at node {u}")
                continue
            key = (min(u, v), max(u, v))
            if key in edges:
                err(line_no, 1, f"duplicate edge ({u},{v})")
                continue
            edges.add(key)
        else:
            err(line_no, 1, f"unknown record {parts[0]!r}")

    last = text.count("\n") + 1
    if not name_seen:
        err(last, 1, "missing 'graph' header")
    if active is None:
        active = min(nodes) if nodes else 0
    for u, v in sorted(edges):
        for x in (u, v):
            if x not in nodes:
                err(last, 1, f"edge ({u},{v}) references unknown node {x}")
    if active not in nodes:
        err(last, 1, f"active node {active} is not defined")
    if has_errors(diags):
        return GraphParseResult(None, diags)
    g = StorageGraph(nodes, edges, active)
    report = validate_graph(g, degree_bound)
    for v in report.violations:
        diags.append(ParseDiagnostic("warning", str(v), SourceSpan(filename, 1, 1)))
    return GraphParseResult(g, diags)
