"""Span-based source rewriting.

Edits address half-open spans taken from syntax nodes, so a semicolon in
a string literal can never truncate a rewrite: the span boundaries come
from the tree, not from delimiter scanning. Applying an edit set is a
pure text splice; multi-line replacements pick up the indentation of the
first replaced line so diffs stay readable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .source import SourceFile, Span


class OverlappingEditsError(Exception):
    """Two edits in one set claim overlapping source regions (operator bug)."""


@dataclass(frozen=True)
class Edit:
    span: Span
    replacement: str


@dataclass
class EditSet:
    edits: list[Edit] = field(default_factory=list)
    site_id: str = ""

    def add(self, span: Span, replacement: str) -> None:
        self.edits.append(Edit(span, replacement))

    def sorted(self) -> list[Edit]:
        return sorted(self.edits, key=lambda e: (e.span.start, e.span.end))


@dataclass(frozen=True)
class AppliedEdit:
    """One edit as it landed in the output text."""

    span: Span
    replacement: str
    new_start: int
    new_end: int


def apply_edits(file: SourceFile, edit_set: EditSet) -> str:
    """Replace each edit's span with its replacement, touching nothing else."""
    text, _ = apply_edits_mapped(file, edit_set)
    return text


def apply_edits_mapped(file: SourceFile, edit_set: EditSet) -> tuple[str, list[AppliedEdit]]:
    """Like :func:`apply_edits` but also reports where each edit landed."""
    text = file.text
    edits = edit_set.sorted()
    for edit in edits:
        if edit.span.end > len(text):
            raise ValueError(f"edit span {edit.span} exceeds file {file.path!r}")
    for prev, cur in zip(edits, edits[1:]):
        if prev.span.end > cur.span.start:
            raise OverlappingEditsError(
                f"edits {prev.span} and {cur.span} overlap in {file.path!r}"
            )
    pieces: list[str] = []
    applied: list[AppliedEdit] = []
    cursor = 0
    out_len = 0
    for edit in edits:
        pieces.append(text[cursor : edit.span.start])
        out_len += edit.span.start - cursor
        replacement = _reindent(edit.replacement, file.indent_at(edit.span.start))
        pieces.append(replacement)
        applied.append(
            AppliedEdit(edit.span, replacement, out_len, out_len + len(replacement))
        )
        out_len += len(replacement)
        cursor = edit.span.end
    pieces.append(text[cursor:])
    return "".join(pieces), applied


def _reindent(replacement: str, indent: str) -> str:
    if "\n" not in replacement or not indent:
        return replacement
    first, *rest = replacement.split("\n")
    return "\n".join([first] + [indent + line if line else line for line in rest])


def fresh_name(base: str, taken: set[str]) -> str:
    """``base`` if unused, else ``base`` + smallest positive integer suffix."""
    if base not in taken:
        return base
    suffix = 1
    while f"{base}{suffix}" in taken:
        suffix += 1
    return f"{base}{suffix}"
