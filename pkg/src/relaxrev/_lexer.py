"""Tiny regex tokenizer and token cursor shared by the per-logic parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


class Lexer:
    """Compile ``(kind, regex)`` pairs once; ``tokenize`` skips whitespace."""

    def __init__(self, rules: list[tuple[str, str]]):
        self.pattern = re.compile("|".join(f"(?P<{k}>{r})" for k, r in rules))

    def tokenize(self, text: str, line: int = 1, column: int = 1) -> list[Token]:
        tokens = []
        pos = 0
        while pos < len(text):
            ch = text[pos]
            if ch in " \t\r":
                pos += 1
                continue
            m = self.pattern.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {ch!r}", line, column + pos)
            tokens.append(Token(m.lastgroup, m.group(), line, column + pos))
            pos = m.end()
        tokens.append(Token("EOF", "", line, column + len(text)))
        return tokens


class Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        t = self.accept(kind, text)
        if t is None:
            self.fail(f"expected {what or text or kind}")
        return t

    def fail(self, message: str):
        t = self.tok
        got = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(f"{message}, got {got}", t.line, t.column)

    def done(self) -> None:
        if not self.at("EOF"):
            self.fail("unexpected trailing input")
