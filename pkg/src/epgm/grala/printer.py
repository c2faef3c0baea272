"""Pretty-printer producing source that parses back to an equal tree."""

from __future__ import annotations

from . import ast as A

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 3, ">": 3, "<=": 3, ">=": 3,
         "+": 4, "-": 4, "*": 5, "/": 5, "%": 5}
_UNARY = 6
_POSTFIX = 7
_ATOM = 8


def _string(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
    return f'"{out}"'


def _literal(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return _string(value)
    if isinstance(value, float):
        text = repr(value)
        if "e" in text or "n" in text:
            raise ValueError(f"float {value!r} has no GrALa literal form")
        return text
    return str(value)


def _prec(node) -> int:
    if isinstance(node, A.BinOp):
        return _PREC[node.op]
    if isinstance(node, A.Unary):
        return _UNARY
    if isinstance(node, A.Literal) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool) and (node.value < 0 or str(node.value).startswith("-")):
        return _UNARY
    if isinstance(node, A.Lambda) and node.style != "paren":
        return 0
    if isinstance(node, (A.Attr, A.Call, A.Index)):
        return _POSTFIX
    return _ATOM


def _wrap(node, minimum: int) -> str:
    text = fmt(node)
    return f"({text})" if _prec(node) < minimum else text


def _params(params) -> str:
    return ", ".join(f"{p.type} {p.name}" for p in params)


def _body(body) -> str:
    if isinstance(body, A.IndexAssign):
        return f"{_wrap(body.target, _POSTFIX)}[{fmt(body.index)}] = {fmt(body.value)}"
    return fmt(body)


def _args(args) -> str:
    parts = []
    for a in args:
        if isinstance(a, A.Lambda) and a.style == "bare":
            parts.append(f"{_params(a.params)} => {_body(a.body)}")
        else:
            parts.append(fmt(a))
    return "(" + ", ".join(parts) + ")"


def fmt(node) -> str:
    """Source text of one expression."""
    if isinstance(node, A.Literal):
        return _literal(node.value)
    if isinstance(node, A.Var):
        return node.name
    if isinstance(node, A.Symbol):
        return f":{node.name}"
    if isinstance(node, A.Binding):
        return f"${node.name}"
    if isinstance(node, A.CollectionLit):
        # items are parsed without comparisons, so anything looser is wrapped
        return "<" + ", ".join(_wrap(x, 4) for x in node.items) + ">"
    if isinstance(node, A.SetLit):
        return "{" + ", ".join(fmt(x) for x in node.items) + "}"
    if isinstance(node, A.MapLit):
        return "{" + ", ".join(f"{fmt(k)}: {fmt(v)}" for k, v in node.pairs) + "}"
    if isinstance(node, A.Lambda):
        if node.style == "params":
            return f"({_params(node.params)}) => {_body(node.body)}"
        # bare lambdas outside argument lists are printed in the paren form
        return f"({_params(node.params)} => {_body(node.body)})"
    if isinstance(node, A.Attr):
        return f"{_wrap(node.target, _POSTFIX)}.{node.name}"
    if isinstance(node, A.Call):
        return f"{_wrap(node.target, _POSTFIX)}.{node.method}{_args(node.args)}"
    if isinstance(node, A.Index):
        return f"{_wrap(node.target, _POSTFIX)}[{fmt(node.index)}]"
    if isinstance(node, A.New):
        return f"new {node.cls}{_args(node.args)}"
    if isinstance(node, A.BinOp):
        p = _PREC[node.op]
        # left-associative: the right operand needs strictly tighter binding
        return f"{_wrap(node.left, p)} {node.op} {_wrap(node.right, p + 1)}"
    if isinstance(node, A.Unary):
        inner = _wrap(node.operand, _UNARY)
        if node.op == "-" and (inner.startswith("-") or isinstance(node.operand, A.Literal)):
            inner = f"({inner})"
        return f"{node.op}{inner}"
    raise TypeError(f"cannot print {type(node).__name__}")


def format_statement(stmt) -> str:
    if isinstance(stmt, A.Assign):
        return f"{stmt.name} = {fmt(stmt.value)}"
    if isinstance(stmt, A.ExprStmt):
        return fmt(stmt.expr)
    raise TypeError(f"cannot print {type(stmt).__name__}")


def format_script(script: A.Script) -> str:
    # statements are newline-insensitive; ';' keeps "a" + "<b>" from reading as "a < b>"
    return "".join(format_statement(s) + ";\n" for s in script.statements)
