"""Tokenizer for the model DSL (.afm files)."""

from __future__ import annotations

from dataclasses import dataclass

from ..diagnostics import SourceSpan

KEYWORDS = frozenset(
    {
        "model",
        "type",
        "component",
        "in",
        "out",
        "var",
        "automaton",
        "state",
        "initial",
        "when",
        "emit",
        "set",
        "sub",
        "channel",
        "function",
        "root",
    }
)

# Longest symbols first so max-munch works by simple prefix testing.
SYMBOLS = ("->", "..", "!=", "<=", "&&", "||", "{", "}", "(", ")", "[", "]", ":", ",", ".", "=", "<", "!", "+", "-", "*")

IDENT = "ident"
INT = "int"
KW = "kw"
PUNCT = "punct"
EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan

    def __str__(self) -> str:
        return "end of input" if self.kind == EOF else f"'{self.text}'"


class LexError(Exception):
    def __init__(self, span: SourceSpan, message: str):
        super().__init__(message)
        self.span = span
        self.message = message


def tokenize(text: str, file: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        span = SourceSpan(file, line, col)
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = KW if word in KEYWORDS else IDENT
            tokens.append(Token(kind, word, SourceSpan(file, line, col, j - i)))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token(INT, text[i:j], SourceSpan(file, line, col, j - i)))
            col += j - i
            i = j
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(PUNCT, sym, SourceSpan(file, line, col, len(sym))))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise LexError(span, f"unexpected character {ch!r}")
    tokens.append(Token(EOF, "", SourceSpan(file, line, col)))
    return tokens
