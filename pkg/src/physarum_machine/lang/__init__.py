"""Textual language: parser, printer, and linter."""

from .diagnostics import ParseDiagnostic, SourceSpan, has_errors
from .linter import Finding, lint_program
from .parser import (GraphParseResult, ParseResult, ProgramSyntax, RuleSyntax,
                     parse_graph, parse_program)
from .printer import format_rule, print_graph, print_program

__all__ = [
    "Finding", "GraphParseResult", "ParseDiagnostic", "ParseResult",
    "ProgramSyntax", "RuleSyntax", "SourceSpan", "format_rule", "has_errors",
    "lint_program", "parse_graph", "parse_program", "print_graph",
    "print_program",
]
