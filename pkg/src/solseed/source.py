"""Source files, offsets and spans.

Every syntax node and every rewrite is addressed by a half-open
``[start, end)`` offset interval into the decoded source text, so slicing
a file's text by a node's span reproduces the node's source exactly.
Offsets index the decoded text (``str`` indices); files are read as UTF-8.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True, order=True)
class Span:
    """Half-open offset interval into a source file."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start <= self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def contains(self, other: Span) -> bool:
        return self.start <= other.start and other.end <= self.end

    def overlaps(self, other: Span) -> bool:
        # Touching endpoints do not overlap; zero-width spans never overlap.
        return self.start < other.end and other.start < self.end


@dataclass
class SourceFile:
    """A Solidity source file plus its line-start index."""

    path: str
    text: str
    line_index: list[int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        starts = [0]
        for i, ch in enumerate(self.text):
            if ch == "\n":
                starts.append(i + 1)
        self.line_index = starts

    @classmethod
    def read(cls, path: str | Path) -> SourceFile:
        text = Path(path).read_text(encoding="utf-8")
        return cls(path=str(path), text=text)

    def slice(self, span: Span) -> str:
        if span.end > len(self.text):
            raise ValueError(f"span {span} exceeds file length {len(self.text)}")
        return self.text[span.start : span.end]

    def byte_to_line(self, offset: int) -> int:
        """1-based line number containing ``offset`` (total on [0, len])."""
        if not (0 <= offset <= len(self.text)):
            raise ValueError(f"offset {offset} out of range")
        return bisect.bisect_right(self.line_index, offset)

    def line_start(self, line: int) -> int:
        """Offset of the first character of 1-based ``line``."""
        return self.line_index[line - 1]

    def indent_at(self, offset: int) -> str:
        """Leading whitespace of the line containing ``offset``."""
        start = self.line_start(self.byte_to_line(offset))
        i = start
        while i < len(self.text) and self.text[i] in " \t":
            i += 1
        return self.text[start:i]
