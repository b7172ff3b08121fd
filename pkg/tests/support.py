"""Shared helpers for the test suite."""

from __future__ import annotations

from pathlib import Path

from solseed import SourceFile, parse
from solseed.lexer import EOF, tokenize
from solseed.nodes import AstNode


def tokens_of(text: str) -> list[tuple[str, str]]:
    """(kind, text) pairs, whitespace and comments gone."""
    return [(t.kind, t.text) for t in tokenize(text) if t.kind != EOF]


def parse_fixture(path: Path):
    src = SourceFile.read(path)
    outcome = parse(src)
    assert outcome.ok, f"{path} failed to parse: {outcome.diagnostics}"
    return src, outcome.tree


def tree_shape(node: AstNode) -> tuple:
    """Structural fingerprint for determinism comparisons."""
    return (
        node.kind.value,
        node.span.start,
        node.span.end,
        tuple(sorted((k, repr(v)) for k, v in node.attrs.items())),
        tuple(tree_shape(c) for c in node.children),
    )
