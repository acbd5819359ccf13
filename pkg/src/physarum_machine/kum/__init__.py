"""Kolmogorov-Uspensky machine core: storage graph, rules, execution."""

from .canon import SizeLimit, canonical_form, canonical_hash
from .graph import (AlphabetError, StorageGraph, ValidationReport, Violation,
                    decode_input, encode_input, node_address, resolve_address,
                    validate_graph)
from .machine import (InvariantBreach, MachineState, PrimOp, RunResult, Status,
                      TraceRecord, apply_rule, format_trace, parse_trace, run,
                      step)
from .rules import (AmbiguousPattern, Cut, Delete, EdgeAtom, Halt, Link, Move,
                    New, NoEdgeAtom, NodeAtom, Output, Pattern, Program,
                    Relabel, RewriteRule, match_pattern)

__all__ = [
    "AlphabetError", "AmbiguousPattern", "Cut", "Delete", "EdgeAtom", "Halt",
    "InvariantBreach", "Link", "MachineState", "Move", "New", "NoEdgeAtom",
    "NodeAtom", "Output", "Pattern", "PrimOp", "Program", "Relabel",
    "RewriteRule", "RunResult", "SizeLimit", "Status", "StorageGraph",
    "TraceRecord", "ValidationReport", "Violation", "apply_rule",
    "canonical_form", "canonical_hash", "decode_input", "encode_input",
    "format_trace", "match_pattern", "node_address", "parse_trace",
    "resolve_address", "run", "step", "validate_graph",
]
