"""Syntax tree of GrALa scripts. Positions are excluded from equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

PARAM_TYPES = ("Graph", "Vertex", "Edge", "Set", "Collection")


@dataclass(frozen=True)
class Pos:
    line: int
    column: int


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Literal:
    value: object
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Symbol:
    name: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Binding:
    name: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class CollectionLit:
    items: tuple
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class SetLit:
    items: tuple
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class MapLit:
    pairs: tuple  # ((key expr, value expr), ...)
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Param:
    type: str
    name: str


@dataclass(frozen=True)
class Lambda:
    """``style`` records the surface form: ``paren`` ``(T x => e)``,
    ``params`` ``(T x) => e`` or ``bare`` ``T x => e``."""

    params: tuple
    body: object
    style: str = "paren"
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class IndexAssign:
    target: object
    index: object
    value: object
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Attr:
    target: object
    name: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Call:
    target: object
    method: str
    args: tuple
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Index:
    target: object
    index: object
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class New:
    cls: str
    args: tuple
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Assign:
    name: str
    value: object
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class ExprStmt:
    expr: object
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Script:
    statements: tuple
    warnings: tuple = field(default=(), compare=False)


Expr = Union[Literal, Var, Symbol, Binding, CollectionLit, SetLit, MapLit, Lambda, Attr, Call,
             Index, New, BinOp, Unary]
Statement = Union[Assign, ExprStmt]
