"""Tokenizer for GrALa scripts."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import EpgmError

IDENT, INT, FLOAT, STRING, SYMBOL, BINDING, OP, PUNCT, KEYWORD, EOF = (
    "ident", "int", "float", "string", "symbol", "binding", "op", "punct", "keyword", "eof")

KEYWORDS = {"new", "true", "false"}
# longest first so that "==" wins over "="
OPERATORS = ("=>", "==", "!=", "<=", ">=", "&&", "||", "<", ">", "=", "!", "+", "-", "*", "/", "%")
PUNCTUATION = "()[]{},.:;"
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}
# a ':' right after one of these is a map separator, never a symbol
_VALUE_END = {INT, FLOAT, STRING, IDENT, SYMBOL, BINDING}


class GralaError(EpgmError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class GralaSyntaxError(GralaError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    line: int
    column: int
    offset: int = field(default=0, compare=False)

    def is_(self, kind: str, value: object = None) -> bool:
        return self.kind == kind and (value is None or self.value == value)

    def __str__(self) -> str:
        if self.kind == EOF:
            return "end of input"
        if self.kind == STRING:
            return f'string "{self.value}"'
        if self.kind == SYMBOL:
            return f"symbol :{self.value}"
        if self.kind == BINDING:
            return f"binding ${self.value}"
        return f"'{self.value}'"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, line_start = 0, 1, 0
    n = len(source)

    def col(at: int) -> int:
        return at - line_start + 1

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line, line_start = line + 1, i
            continue
        if ch in " \t\r\f﻿":
            i += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        start = i
        if ch.isalpha() or ch == "_":
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            word = source[start:i]
            kind = KEYWORD if word in KEYWORDS else IDENT
            tokens.append(Token(kind, word, line, col(start), start))
            continue
        if ch.isdigit():
            while i < n and source[i].isdigit():
                i += 1
            is_float = i + 1 < n and source[i] == "." and source[i + 1].isdigit()
            if is_float:
                i += 1
                while i < n and source[i].isdigit():
                    i += 1
            if i < n and (source[i].isalpha() or source[i] == "_"):
                raise GralaSyntaxError(f"malformed number {source[start:i + 1]!r}", line, col(start))
            text = source[start:i]
            if is_float:
                tokens.append(Token(FLOAT, float(text), line, col(start), start))
            else:
                value = int(text)
                if value > 2**63 - 1:
                    raise GralaSyntaxError(f"integer {text} does not fit in 64 bits", line, col(start))
                tokens.append(Token(INT, value, line, col(start), start))
            continue
        if ch == '"':
            i += 1
            buf = []
            while True:
                if i >= n or source[i] == "\n":
                    raise GralaSyntaxError("unterminated string", line, col(start))
                c = source[i]
                if c == '"':
                    i += 1
                    break
                if c == "\\":
                    if i + 1 >= n or source[i + 1] not in _ESCAPES:
                        raise GralaSyntaxError("invalid escape in string", line, col(i))
                    buf.append(_ESCAPES[source[i + 1]])
                    i += 2
                    continue
                buf.append(c)
                i += 1
            tokens.append(Token(STRING, "".join(buf), line, col(start), start))
            continue
        if ch in ":$" and i + 1 < n and (source[i + 1].isalpha() or source[i + 1] == "_"):
            prev = tokens[-1] if tokens else None
            if ch == "$" or prev is None or prev.kind not in _VALUE_END and not (
                    prev.kind == PUNCT and prev.value in ")]}"):
                i += 1
                while i < n and (source[i].isalnum() or source[i] == "_"):
                    i += 1
                kind = SYMBOL if ch == ":" else BINDING
                tokens.append(Token(kind, source[start + 1:i], line, col(start), start))
                continue
        op = next((o for o in OPERATORS if source.startswith(o, i)), None)
        if op is not None:
            tokens.append(Token(OP, op, line, col(start), start))
            i += len(op)
            continue
        if ch in PUNCTUATION:
            tokens.append(Token(PUNCT, ch, line, col(start), start))
            i += 1
            continue
        raise GralaSyntaxError(f"illegal character {ch!r}", line, col(start))
    tokens.append(Token(EOF, None, line, col(i), i))
    return tokens
