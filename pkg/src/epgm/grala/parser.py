"""Recursive-descent parser for GrALa.

Precedence, loosest first: ``||``, ``&&``, comparisons, ``+ -``, ``* / %``,
unary ``! -``, then postfix member access, calls and indexing.

Statements need no separator; a statement ends where its expression can
no longer be extended (a ``;`` is accepted too). In expression position a
``<`` can only open a collection literal, since a comparison needs a left
operand; the items of such a literal are parsed without comparisons so the
closing ``>`` is unambiguous.
"""

from __future__ import annotations

from . import ast as A
from .lexer import (BINDING, EOF, FLOAT, IDENT, INT, KEYWORD, OP, PUNCT, STRING, SYMBOL,
                    GralaSyntaxError, Token, tokenize)

_COMPARISONS = ("==", "!=", "<", ">", "<=", ">=")
_NEW_CLASSES = ("Graph", "Vertex", "Edge")
MAX_RECOVERIES = 8


class _Error(GralaSyntaxError):
    def __init__(self, message: str, token: Token, index: int):
        super().__init__(message, token.line, token.column)
        self.token_index = index


class _Parser:
    def __init__(self, tokens: list[Token], start: int = 0):
        self.toks = tokens
        self.i = start
        self.lambda_depth = 0

    # -- helpers ----------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, kind: str, value=None, k: int = 0) -> bool:
        return self.peek(k).is_(kind, value)

    def advance(self) -> Token:
        t = self.tok
        if t.kind != EOF:
            self.i += 1
        return t

    def error(self, message: str, token_index: int | None = None) -> _Error:
        idx = self.i if token_index is None else token_index
        return _Error(message, self.toks[idx], idx)

    def expect(self, kind: str, value=None, what: str | None = None) -> Token:
        if not self.at(kind, value):
            wanted = what or (f"'{value}'" if value is not None else kind)
            raise self.error(f"expected {wanted}, found {self.tok}")
        return self.advance()

    @staticmethod
    def pos(t: Token) -> A.Pos:
        return A.Pos(t.line, t.column)

    # -- statements ---------------------------------------------------------
    def statement(self):
        t = self.tok
        if t.kind == IDENT and self.at(OP, "=", 1):
            self.i += 2
            stmt = A.Assign(t.value, self.expression(), self.pos(t))
        else:
            expr = self.expression()
            if self.at(OP, "="):
                raise self.error("index assignment is only allowed as the body of a lambda")
            stmt = A.ExprStmt(expr, self.pos(t))
        while self.at(PUNCT, ";"):
            self.advance()
        return stmt

    # -- expressions --------------------------------------------------------
    def expression(self):
        return self.or_expr()

    def or_expr(self):
        left = self.and_expr()
        while self.at(OP, "||"):
            t = self.advance()
            left = A.BinOp("||", left, self.and_expr(), self.pos(t))
        return left

    def and_expr(self):
        left = self.comparison()
        while self.at(OP, "&&"):
            t = self.advance()
            left = A.BinOp("&&", left, self.comparison(), self.pos(t))
        return left

    def comparison(self):
        left = self.additive()
        while self.tok.kind == OP and self.tok.value in _COMPARISONS:
            t = self.advance()
            left = A.BinOp(t.value, left, self.additive(), self.pos(t))
        return left

    def additive(self):
        left = self.multiplicative()
        while self.tok.kind == OP and self.tok.value in ("+", "-"):
            t = self.advance()
            left = A.BinOp(t.value, left, self.multiplicative(), self.pos(t))
        return left

    def multiplicative(self):
        left = self.unary()
        while self.tok.kind == OP and self.tok.value in ("*", "/", "%"):
            t = self.advance()
            left = A.BinOp(t.value, left, self.unary(), self.pos(t))
        return left

    def unary(self):
        if self.tok.kind == OP and self.tok.value in ("!", "-"):
            t = self.advance()
            operand = self.unary()
            if t.value == "-" and isinstance(operand, A.Literal) and type(operand.value) in (int, float) \
                    and not _is_negative(operand.value):
                return A.Literal(-operand.value, self.pos(t))
            return A.Unary(t.value, operand, self.pos(t))
        return self.postfix(self.primary())

    def postfix(self, node):
        while True:
            if self.at(PUNCT, "."):
                self.advance()
                name = self.expect(IDENT, what="a member name after '.'")
                if self.at(PUNCT, "("):
                    node = A.Call(node, name.value, self.arguments(), self.pos(name))
                else:
                    node = A.Attr(node, name.value, self.pos(name))
            elif self.at(PUNCT, "["):
                t = self.advance()
                index = self.expression()
                self.expect(PUNCT, "]")
                node = A.Index(node, index, self.pos(t))
            else:
                return node

    def arguments(self) -> tuple:
        self.expect(PUNCT, "(")
        args = []
        if not self.at(PUNCT, ")"):
            while True:
                args.append(self.argument())
                if not self.at(PUNCT, ","):
                    break
                self.advance()
        self.expect(PUNCT, ")", what="',' or ')' in argument list")
        return tuple(args)

    def argument(self):
        n = self._typed_params_length(self.i)
        if n and self.at(OP, "=>", n):
            return self.lambda_rest(self.tok, self.typed_params(), "bare")
        return self.expression()

    def _typed_params_length(self, at: int) -> int:
        """Token count of ``T x (, T x)*`` starting at ``at``; 0 if there is none."""
        k = 0
        while True:
            if not (self.toks[at + k].kind == IDENT and self.toks[min(at + k + 1, len(self.toks) - 1)].kind == IDENT):
                return 0
            k += 2
            if self.toks[at + k].is_(PUNCT, ","):
                k += 1
                continue
            return k

    def typed_params(self) -> tuple:
        params = []
        names = set()
        while True:
            type_tok = self.expect(IDENT)
            if type_tok.value not in A.PARAM_TYPES:
                raise self.error(f"unknown parameter type {type_tok.value!r}; expected one of "
                                 f"{', '.join(A.PARAM_TYPES)}", self.i - 1)
            name = self.expect(IDENT)
            if name.value in names:
                raise self.error(f"duplicate parameter {name.value!r}", self.i - 1)
            names.add(name.value)
            params.append(A.Param(type_tok.value, name.value))
            if not self.at(PUNCT, ","):
                return tuple(params)
            self.advance()

    def lambda_rest(self, start: Token, params: tuple, style: str):
        self.expect(OP, "=>")
        self.lambda_depth += 1
        try:
            body = self.expression()
            if self.at(OP, "="):
                if not isinstance(body, A.Index):
                    raise self.error("only an indexed element can be assigned, as in x[\"k\"] = e")
                t = self.advance()
                body = A.IndexAssign(body.target, body.index, self.expression(), self.pos(t))
        finally:
            self.lambda_depth -= 1
        return A.Lambda(params, body, style, self.pos(start))

    def primary(self):
        t = self.tok
        if t.kind in (INT, FLOAT, STRING):
            self.advance()
            return A.Literal(t.value, self.pos(t))
        if t.kind == KEYWORD and t.value in ("true", "false"):
            self.advance()
            return A.Literal(t.value == "true", self.pos(t))
        if t.kind == SYMBOL:
            self.advance()
            return A.Symbol(t.value, self.pos(t))
        if t.kind == BINDING:
            if self.lambda_depth == 0:
                raise self.error(f"${t.value} can only be used inside a match predicate lambda")
            self.advance()
            return A.Binding(t.value, self.pos(t))
        if t.kind == IDENT:
            self.advance()
            return A.Var(t.value, self.pos(t))
        if t.is_(KEYWORD, "new"):
            self.advance()
            cls = self.expect(IDENT, what="a class name after 'new'")
            if cls.value not in _NEW_CLASSES:
                raise self.error(f"cannot construct {cls.value!r}; expected Graph, Vertex or Edge",
                                 self.i - 1)
            return A.New(cls.value, self.arguments(), self.pos(t))
        if t.is_(OP, "<"):
            return self.collection_literal()
        if t.is_(PUNCT, "{"):
            return self.brace_literal()
        if t.is_(PUNCT, "("):
            n = self._typed_params_length(self.i + 1)
            if n and self.at(OP, "=>", n + 1):
                self.advance()
                lam = self.lambda_rest(t, self.typed_params(), "paren")
                self.expect(PUNCT, ")", what="')' closing the lambda")
                return lam
            if n and self.at(PUNCT, ")", n + 1) and self.at(OP, "=>", n + 2):
                self.advance()
                params = self.typed_params()
                self.expect(PUNCT, ")")
                return self.lambda_rest(t, params, "params")
            self.advance()
            inner = self.expression()
            self.expect(PUNCT, ")")
            return inner
        raise self.error(f"expected an expression, found {t}")

    def collection_literal(self):
        start = self.advance()
        items = []
        if not self.at(OP, ">"):
            while True:
                items.append(self.additive())
                if not self.at(PUNCT, ","):
                    break
                self.advance()
        self.expect(OP, ">", what="',' or '>' closing the collection")
        return A.CollectionLit(tuple(items), self.pos(start))

    def brace_literal(self):
        start = self.advance()
        if self.at(PUNCT, "}"):
            self.advance()
            return A.MapLit((), self.pos(start))
        first = self.expression()
        if self.at(PUNCT, ":"):
            self.advance()
            pairs = [(first, self.expression())]
            while self.at(PUNCT, ","):
                self.advance()
                key = self.expression()
                self.expect(PUNCT, ":", what="':' in map literal")
                pairs.append((key, self.expression()))
            self.expect(PUNCT, "}", what="',' or '}' closing the map")
            return A.MapLit(tuple(pairs), self.pos(start))
        items = [first]
        while self.at(PUNCT, ","):
            self.advance()
            items.append(self.expression())
        self.expect(PUNCT, "}", what="',' or '}' closing the set")
        return A.SetLit(tuple(items), self.pos(start))


def _is_negative(x) -> bool:
    return x < 0 or (isinstance(x, float) and str(x).startswith("-"))


def _parse_statement(tokens: list[Token], start: int):
    p = _Parser(tokens, start)
    stmt = p.statement()
    return stmt, p.i


def parse_tokens(tokens: list[Token], strict: bool = False) -> A.Script:
    """Parse a token list into a script.

    Unless ``strict``, unbalanced parentheses that make an otherwise valid
    script fail are repaired and reported in ``Script.warnings``: a stray
    ``)`` is dropped, and ``)`` missing at the end of a statement is supplied.
    Several published listings carry one or the other.
    """
    toks = list(tokens)
    statements: list = []
    starts: list[int] = []
    warnings: list[str] = []
    i = 0
    while toks[i].kind != EOF:
        try:
            stmt, end = _parse_statement(toks, i)
        except _Error as err:
            if strict or len(warnings) >= MAX_RECOVERIES:
                raise GralaSyntaxError(err.message, err.line, err.column) from None
            fixed = _recover(toks, i, starts, err) or _close(toks, i, err)
            if fixed is None:
                raise GralaSyntaxError(err.message, err.line, err.column) from None
            toks, restart, stmt, end, note = fixed
            if restart != i:
                statements.pop()
                starts.pop()
            warnings.append(note)
            i = restart
        statements.append(stmt)
        starts.append(i)
        i = end
    return A.Script(tuple(statements), tuple(warnings))


def _recover(toks: list[Token], i: int, starts: list[int], err: _Error):
    lo = starts[-1] if starts else i
    err_i = err.token_index
    candidates = [j for j in range(min(err_i, len(toks) - 2), lo - 1, -1)
                  if toks[j].is_(PUNCT, ")")][:3]
    for j in candidates:
        new = toks[:j] + toks[j + 1:]
        restart = i if j >= i else lo
        try:
            stmt, end = _parse_statement(new, restart)
        except _Error:
            continue
        # the repaired statement must get past the point where parsing failed
        if j < err_i and end <= err_i - 1:
            continue
        dropped = toks[j]
        return new, restart, stmt, end, f"line {dropped.line}, column {dropped.column}: ignored unmatched ')'"
    return None


def _close(toks: list[Token], i: int, err: _Error):
    # only when the statement ran into the end of input or into the next line
    err_i = err.token_index
    if err_i <= i:
        return None
    prev, here = toks[err_i - 1], toks[err_i]
    if here.kind != EOF and here.line == prev.line:
        return None
    # a statement cut off after '(' or ',' or an operator is truncated, not unbalanced
    if not (prev.kind in (IDENT, INT, FLOAT, STRING, SYMBOL, BINDING)
            or prev.kind == KEYWORD and prev.value in ("true", "false")
            or prev.kind == PUNCT and prev.value in ")]}"):
        return None
    for k in range(1, 4):
        fill = [Token(PUNCT, ")", prev.line, prev.column + len(str(prev.value)), prev.offset)] * k
        new = toks[:err_i] + fill + toks[err_i:]
        try:
            stmt, end = _parse_statement(new, i)
        except _Error:
            continue
        if end != err_i + k:
            continue
        where = f"line {prev.line}, column {fill[0].column}"
        what = "a missing ')'" if k == 1 else f"{k} missing ')'"
        return new, i, stmt, end, f"{where}: supplied {what}"
    return None


def parse(source: str, strict: bool = False) -> A.Script:
    return parse_tokens(tokenize(source), strict)


def parse_expression(source: str):
    toks = tokenize(source)
    p = _Parser(toks)
    p.lambda_depth = 1  # allow $bindings in isolated predicate snippets
    expr = p.expression()
    if not p.at(EOF):
        raise p.error(f"unexpected {p.tok} after expression")
    return expr
