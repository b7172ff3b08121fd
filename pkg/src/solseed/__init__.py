"""solseed: seed known vulnerability classes into Solidity contracts.

Pattern-based mutation operators inject six vulnerability types into
real-world contracts; a detection-diff layer scores how well a static
analyzer finds the injected flaws.
"""

from .nodes import AstNode, Diagnostic, NodeKind, ParseOutcome, ParseStatus, find_nodes
from .parser import parse, parse_text, scope_identifiers
from .rewrite import Edit, EditSet, OverlappingEditsError, apply_edits, fresh_name
from .source import SourceFile, Span

__version__ = "0.1.0"

__all__ = [
    "AstNode",
    "Diagnostic",
    "Edit",
    "EditSet",
    "NodeKind",
    "OverlappingEditsError",
    "ParseOutcome",
    "ParseStatus",
    "SourceFile",
    "Span",
    "apply_edits",
    "find_nodes",
    "fresh_name",
    "parse",
    "parse_text",
    "scope_identifiers",
]
