"""Tokenizer for the Solidity subset.

Comments and whitespace are skipped; every token keeps its exact source
span, which is what makes span-based rewriting safe: a semicolon inside a
string literal is part of a single STRING token and can never be mistaken
for a statement boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

IDENT = "ident"
NUMBER = "number"
STRING = "string"
PUNCT = "punct"
EOF = "eof"

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | set("0123456789")
_DIGITS = set("0123456789")
_HEX_DIGITS = set("0123456789abcdefABCDEF_")

# Longest first so e.g. ">>=" is not split into ">>" "=".
_PUNCTS = [
    ">>=", "<<=",
    "++", "--", "**", "==", "!=", "<=", ">=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<", ">>", "=>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^",
    "?", ":", ";", ",", ".", "(", ")", "{", "}", "[", "]",
]


class LexError(Exception):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(message)
        self.message = message
        self.offset = offset


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int

    def is_punct(self, text: str) -> bool:
        return self.kind == PUNCT and self.text == text

    def is_ident(self, text: str) -> bool:
        return self.kind == IDENT and self.text == text


def tokenize(text: str) -> list[Token]:
    """Tokenize ``text``, raising LexError on malformed input."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f\v":
            i += 1
            continue
        if ch == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                j = text.find("\n", i)
                i = n if j < 0 else j + 1
                continue
            if nxt == "*":
                j = text.find("*/", i + 2)
                if j < 0:
                    raise LexError("unterminated block comment", i)
                i = j + 2
                continue
        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            word = text[i:j]
            # hex"00ff" / unicode"..." are single literal tokens.
            if word in ("hex", "unicode") and j < n and text[j] in "\"'":
                j = _scan_string(text, j)
                tokens.append(Token(STRING, text[i:j], i, j))
            else:
                tokens.append(Token(IDENT, word, i, j))
            i = j
            continue
        if ch in _DIGITS:
            j = _scan_number(text, i)
            tokens.append(Token(NUMBER, text[i:j], i, j))
            i = j
            continue
        if ch in "\"'":
            j = _scan_string(text, i)
            tokens.append(Token(STRING, text[i:j], i, j))
            i = j
            continue
        for punct in _PUNCTS:
            if text.startswith(punct, i):
                tokens.append(Token(PUNCT, punct, i, i + len(punct)))
                i += len(punct)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", i)
    tokens.append(Token(EOF, "", n, n))
    return tokens


def _scan_string(text: str, i: int) -> int:
    quote = text[i]
    j = i + 1
    n = len(text)
    while j < n:
        ch = text[j]
        if ch == "\\":
            j += 2
            continue
        if ch == quote:
            return j + 1
        if ch == "\n":
            break
        j += 1
    raise LexError("unterminated string literal", i)


def _scan_number(text: str, i: int) -> int:
    n = len(text)
    if text.startswith(("0x", "0X"), i):
        j = i + 2
        while j < n and text[j] in _HEX_DIGITS:
            j += 1
        return j
    j = i
    while j < n and (text[j] in _DIGITS or text[j] == "_"):
        j += 1
    if j < n and text[j] == "." and j + 1 < n and text[j + 1] in _DIGITS:
        j += 1
        while j < n and (text[j] in _DIGITS or text[j] == "_"):
            j += 1
    if j < n and text[j] in "eE":
        k = j + 1
        if k < n and text[k] in "+-":
            k += 1
        if k < n and text[k] in _DIGITS:
            j = k
            while j < n and text[j] in _DIGITS:
                j += 1
    return j
