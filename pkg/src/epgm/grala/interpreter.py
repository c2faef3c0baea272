"""Tree-walking evaluator for GrALa scripts.

Method calls dispatch on the runtime type of the receiver to the operator,
pattern and algorithm modules. Runtime values are plain library objects
(graphs, collections, vertices, edges, scalars) plus a few wrappers defined
here for element sets, value lists, symbols, key sets and closures.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .. import operators as ops
from ..algorithms import AlgorithmRegistry
from ..model import (ABSENT, Edge, EpgmDatabase, EpgmError, GraphCollection, LogicalGraph, Vertex,
                     check_property_value)
from ..pattern import Embedding, PatternGraph, PatternSyntaxError, match_pattern, parse_pattern
from . import ast as A
from .lexer import GralaError
from .parser import parse
from .printer import format_statement


class GralaRuntimeError(GralaError):
    pass


class GralaTypeError(GralaRuntimeError):
    pass


# -- runtime values -----------------------------------------------------------

@dataclass(frozen=True)
class Symbol:
    name: str

    def __repr__(self) -> str:
        return f":{self.name}"


class ElementSet:
    """Vertices or edges of a graph, as produced by ``g.V`` and ``g.E``."""

    __slots__ = ("kind", "items")

    def __init__(self, kind: str, items: dict):
        self.kind = kind
        self.items = items

    def __iter__(self):
        return iter(self.items.values())

    def __len__(self) -> int:
        return len(self.items)

    def __repr__(self) -> str:
        return f"ElementSet({self.kind}, {list(self.items)})"


class ValueList(list):
    """Property values extracted by ``values(key)``."""


class KeySet(tuple):
    """A ``{a, b}`` literal; order of first appearance is kept."""


@dataclass
class Closure:
    node: A.Lambda
    scope: "Scope"

    @property
    def params(self) -> tuple:
        return self.node.params

    def __repr__(self) -> str:
        return f"<lambda ({', '.join(f'{p.type} {p.name}' for p in self.params)})>"


class DatabaseRef:
    """The ``db`` binding: ``db.G`` is the collection of logical graphs; every graph
    method applies to the database graph."""

    def __init__(self, db: EpgmDatabase):
        self.db = db

    @property
    def graph(self) -> LogicalGraph:
        return self.db.database_graph()

    def __repr__(self) -> str:
        return f"db{self.db!r}"


class Scope:
    __slots__ = ("vars", "parent")

    def __init__(self, vars: dict | None = None, parent: Scope | None = None):
        self.vars = vars or {}
        self.parent = parent

    def lookup(self, name: str):
        s = self
        while s is not None:
            if name in s.vars:
                return s.vars[name]
            s = s.parent
        raise KeyError(name)


TYPE_NAMES = {
    LogicalGraph: "Graph", GraphCollection: "Collection", Vertex: "Vertex", Edge: "Edge",
    ElementSet: "Set", ValueList: "Set", KeySet: "Set", Closure: "Lambda", Symbol: "Symbol",
    DatabaseRef: "Database", PatternGraph: "Pattern", dict: "Map", bool: "Boolean",
    int: "Integer", float: "Float", str: "String",
}


def type_name(value) -> str:
    if value is ABSENT:
        return "absent"
    return TYPE_NAMES.get(type(value), type(value).__name__)


def _param_ok(ptype: str, value) -> bool:
    if ptype == "Graph":
        return isinstance(value, LogicalGraph)
    if ptype == "Vertex":
        return isinstance(value, Vertex)
    if ptype == "Edge":
        return isinstance(value, Edge)
    if ptype == "Set":
        return isinstance(value, (ElementSet, ValueList, KeySet))
    if ptype == "Collection":
        return isinstance(value, GraphCollection)
    return False


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


@dataclass
class StatementTiming:
    index: int
    line: int | None
    text: str
    seconds: float


@dataclass
class RunResult:
    bindings: dict[str, Any]
    value: Any
    timings: list[StatementTiming] = field(default_factory=list)
    warnings: tuple[str, ...] = ()


# -- interpreter ----------------------------------------------------------------

_BINARY_GRAPH_OPS = {"combine": ops.combine, "overlap": ops.overlap, "exclude": ops.exclude}


class Interpreter:
    def __init__(self, db: EpgmDatabase, bindings: dict[str, Any] | None = None,
                 registry: AlgorithmRegistry | None = None):
        self.db = db
        self.registry = registry
        self.globals = Scope({"db": DatabaseRef(db)})
        for k, v in (bindings or {}).items():
            self.globals.vars[k] = v
        self._embeddings: list[Embedding] = []
        self._writable: set[int] = set()

    # -- entry points ---------------------------------------------------------
    def run(self, script: A.Script, on_statement: Callable[[StatementTiming], None] | None = None) -> RunResult:
        value = None
        timings = []
        for i, stmt in enumerate(script.statements):
            t0 = time.perf_counter()
            value = self.execute(stmt)
            elapsed = time.perf_counter() - t0
            try:
                text = format_statement(stmt)
            except (TypeError, ValueError):
                text = type(stmt).__name__
            timing = StatementTiming(i + 1, stmt.pos.line if stmt.pos else None, text, elapsed)
            timings.append(timing)
            if on_statement is not None:
                on_statement(timing)
        bindings = {k: v for k, v in self.globals.vars.items() if k != "db"}
        return RunResult(bindings, value, timings, script.warnings)

    def execute(self, stmt):
        if isinstance(stmt, A.Assign):
            if stmt.name == "db":
                raise self.error("'db' cannot be reassigned", stmt)
            value = self.eval(stmt.value, self.globals)
            self.globals.vars[stmt.name] = value
            return value
        return self.eval(stmt.expr, self.globals)

    # -- helpers --------------------------------------------------------------
    @staticmethod
    def error(message: str, node, cls=GralaRuntimeError) -> GralaRuntimeError:
        pos = getattr(node, "pos", None)
        if pos is None:
            return cls(message)
        return cls(message, pos.line, pos.column)

    def type_error(self, message: str, node) -> GralaTypeError:
        return self.error(message, node, GralaTypeError)

    def call(self, closure, args: list, node):
        if not isinstance(closure, Closure):
            raise self.type_error(f"expected a lambda, got {type_name(closure)}", node)
        params = closure.params
        if len(args) != len(params):
            raise self.error(f"lambda takes {len(params)} argument(s), got {len(args)}", closure.node)
        scope = Scope({}, closure.scope)
        for p, a in zip(params, args):
            if not _param_ok(p.type, a):
                raise self.type_error(f"parameter {p.name!r} expects {p.type}, got {type_name(a)}",
                                      closure.node)
            scope.vars[p.name] = a
        body = closure.node.body
        if isinstance(body, A.IndexAssign):
            return self.index_assign(body, scope)
        return self.eval(body, scope)

    def predicate(self, closure, node) -> Callable:
        def pred(*args):
            result = self.call(closure, list(args), node)
            if not isinstance(result, bool):
                raise self.type_error(f"predicate returned {type_name(result)}, expected Boolean",
                                      closure.node)
            return result
        return pred

    def _guard(self, fn, node, *args):
        """Run a library call, turning library errors into positioned runtime errors."""
        try:
            return fn(*args)
        except GralaError:
            raise
        except EpgmError as exc:
            cause = exc.__cause__
            while cause is not None and not isinstance(cause, GralaError):
                cause = cause.__cause__
            if cause is not None:
                raise cause from None
            raise self.error(str(exc), node) from None

    # -- expressions ------------------------------------------------------------
    def eval(self, node, scope: Scope):
        method = getattr(self, "_eval_" + type(node).__name__, None)
        if method is None:
            raise self.error(f"cannot evaluate {type(node).__name__}", node)
        return method(node, scope)

    def _eval_Literal(self, node, scope):
        return node.value

    def _eval_Var(self, node, scope):
        try:
            return scope.lookup(node.name)
        except KeyError:
            raise self.error(f"undefined variable {node.name!r}", node) from None

    def _eval_Symbol(self, node, scope):
        return Symbol(node.name)

    def _eval_Binding(self, node, scope):
        raise self.error(f"${node.name} can only index g.V or g.E", node)

    def _eval_CollectionLit(self, node, scope):
        items = []
        for item in node.items:
            v = self.eval(item, scope)
            if not isinstance(v, LogicalGraph):
                raise self.type_error(f"collection items must be graphs, got {type_name(v)}", item)
            items.append(v)
        return GraphCollection(items)

    def _eval_SetLit(self, node, scope):
        out = []
        for item in node.items:
            v = self.eval(item, scope)
            if v not in out:
                out.append(v)
        return KeySet(out)

    def _eval_MapLit(self, node, scope):
        out = {}
        for k, v in node.pairs:
            key = self.eval(k, scope)
            if not isinstance(key, str):
                raise self.type_error(f"map keys must be strings, got {type_name(key)}", k)
            out[key] = self.eval(v, scope)
        return out

    def _eval_Lambda(self, node, scope):
        return Closure(node, scope)

    def _eval_Unary(self, node, scope):
        v = self.eval(node.operand, scope)
        if node.op == "!":
            if not isinstance(v, bool):
                raise self.type_error(f"'!' needs a Boolean, got {type_name(v)}", node)
            return not v
        if not _is_number(v):
            raise self.type_error(f"unary '-' needs a number, got {type_name(v)}", node)
        return -v

    def _eval_BinOp(self, node, scope):
        op = node.op
        if op in ("&&", "||"):
            left = self.eval(node.left, scope)
            if not isinstance(left, bool):
                raise self.type_error(f"'{op}' needs Boolean operands, got {type_name(left)}", node)
            if (op == "&&" and not left) or (op == "||" and left):
                return left
            right = self.eval(node.right, scope)
            if not isinstance(right, bool):
                raise self.type_error(f"'{op}' needs Boolean operands, got {type_name(right)}", node)
            return right
        left = self.eval(node.left, scope)
        right = self.eval(node.right, scope)
        if op == "==":
            return _equal(left, right)
        if op == "!=":
            return not _equal(left, right)
        if op in ("<", ">", "<=", ">="):
            return self.compare(op, left, right, node)
        return self.arith(op, left, right, node)

    def compare(self, op, left, right, node) -> bool:
        if left is ABSENT or right is ABSENT:
            return False
        if _is_number(left) and _is_number(right):
            pass
        elif isinstance(left, str) and isinstance(right, str):
            pass
        else:
            raise self.type_error(f"cannot compare {type_name(left)} with {type_name(right)}", node)
        if op == "<":
            return left < right
        if op == ">":
            return left > right
        if op == "<=":
            return left <= right
        return left >= right

    def arith(self, op, left, right, node):
        if op == "+" and isinstance(left, str) and isinstance(right, str):
            return left + right
        if not (_is_number(left) and _is_number(right)):
            raise self.type_error(f"'{op}' needs numbers, got {type_name(left)} and {type_name(right)}",
                                  node)
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0:
                raise self.error("division by zero", node)
            return left / right
        if isinstance(left, float) or isinstance(right, float):
            raise self.type_error("'%' needs integers", node)
        if right == 0:
            raise self.error("modulo by zero", node)
        return left % right

    def _eval_Attr(self, node, scope):
        target = self.eval(node.target, scope)
        if isinstance(target, DatabaseRef):
            if node.name == "G":
                return target.db.collection
            target = target.graph
        if isinstance(target, LogicalGraph):
            if node.name == "V":
                return ElementSet("vertex", target.vertices)
            if node.name == "E":
                return ElementSet("edge", target.edges)
        raise self.error(f"{type_name(target)} has no attribute {node.name!r}", node)

    def _eval_Index(self, node, scope):
        target = self.eval(node.target, scope)
        if isinstance(node.index, A.Binding):
            return self.binding(target, node.index)
        index = self.eval(node.index, scope)
        if isinstance(target, (Vertex, Edge, LogicalGraph)):
            if isinstance(index, Symbol):
                if index.name != "type":
                    raise self.error(f"unknown element symbol :{index.name}; only :type exists", node)
                return target.label
            if not isinstance(index, str):
                raise self.type_error(f"property keys are strings, got {type_name(index)}", node.index)
            return target.properties.get(index, ABSENT)
        if isinstance(target, GraphCollection):
            if not isinstance(index, int) or isinstance(index, bool):
                raise self.type_error(f"collections are indexed by integers, got {type_name(index)}",
                                      node.index)
            if not 0 <= index < len(target):
                raise self.error(f"index {index} out of range for a collection of {len(target)}", node)
            return target[index]
        if isinstance(target, dict):
            return target.get(index, ABSENT)
        raise self.type_error(f"{type_name(target)} cannot be indexed", node)

    def binding(self, target, node: A.Binding):
        if not self._embeddings:
            raise self.error(f"${node.name} is only bound inside a match predicate", node)
        emb = self._embeddings[-1]
        if not isinstance(target, ElementSet):
            raise self.type_error(f"${node.name} indexes g.V or g.E, not {type_name(target)}", node)
        table = emb.vertices if target.kind == "vertex" else emb.edges
        if node.name not in table:
            other = emb.edges if target.kind == "vertex" else emb.vertices
            if node.name in other:
                kind = "an edge" if target.kind == "vertex" else "a vertex"
                raise self.error(f"${node.name} is {kind} variable", node)
            raise self.error(f"pattern has no variable ${node.name}", node)
        eid = table[node.name]
        if eid not in target.items:
            raise self.error(f"${node.name} is not bound to an element of this set", node)
        return target.items[eid]

    def index_assign(self, node: A.IndexAssign, scope):
        target = self.eval(node.target, scope)
        key = self.eval(node.index, scope)
        value = self.eval(node.value, scope)
        if not isinstance(target, (Vertex, Edge)):
            raise self.type_error(f"cannot assign into {type_name(target)}", node)
        if id(target) not in self._writable:
            raise self.error("only summary elements inside summarize callbacks can be modified", node)
        if not isinstance(key, str):
            raise self.type_error(f"property keys are strings, got {type_name(key)}", node)
        if value is ABSENT:
            target.properties.pop(key, None)
            return value
        try:
            target.properties[key] = check_property_value(value)
        except EpgmError:
            raise self.type_error(f"{type_name(value)} cannot be stored as a property", node) from None
        return value

    def _eval_New(self, node, scope):
        args = [self.eval(a, scope) for a in node.args]
        if node.cls == "Graph":
            if len(args) != 1 or not isinstance(args[0], str):
                raise self.type_error("new Graph expects one pattern string", node)
            try:
                return parse_pattern(args[0])
            except PatternSyntaxError as exc:
                raise self.error(f"bad pattern: {exc}", node) from None
        if not 1 <= len(args) <= 2:
            raise self.error(f"new {node.cls} expects a label and an optional property map", node)
        label = args[0]
        if not isinstance(label, str):
            raise self.type_error(f"{node.cls} label must be a String, got {type_name(label)}", node)
        props = args[1] if len(args) == 2 else {}
        if not isinstance(props, dict):
            raise self.type_error(f"{node.cls} properties must be a map, got {type_name(props)}", node)
        clean = {}
        for k, v in props.items():
            if v is ABSENT:
                continue
            try:
                clean[k] = check_property_value(v)
            except EpgmError:
                raise self.type_error(f"property {k!r} cannot hold {type_name(v)}", node) from None
        if node.cls == "Vertex":
            return Vertex(None, label, clean)
        return Edge(None, None, None, label, clean)

    # -- method calls -------------------------------------------------------------
    def _eval_Call(self, node, scope):
        target = self.eval(node.target, scope)
        if isinstance(target, DatabaseRef):
            target = target.graph
        table = _METHODS.get(type(target))
        if table is None:
            if isinstance(target, list):
                table = _METHODS[ValueList]
            else:
                raise self.error(f"{type_name(target)} has no method {node.method!r}", node)
        entry = table.get(node.method)
        if entry is None:
            raise self.error(f"{type_name(target)} has no method {node.method!r}", node)
        lo, hi, handler = entry
        if not lo <= len(node.args) <= hi:
            want = str(lo) if lo == hi else f"{lo} to {hi}"
            raise self.error(f"{node.method} takes {want} argument(s), got {len(node.args)}", node)
        if node.method == "reduce" and len(node.args) == 1:
            fast = _fold_operator(node.args[0])
            if fast is not None:
                return self._guard(ops.reduce, node, target, fast)
        args = [self.eval(a, scope) for a in node.args]
        return handler(self, node, target, args)

    def expect(self, value, cls, what: str, node):
        if not isinstance(value, cls) or (cls is int and isinstance(value, bool)):
            raise self.type_error(f"{what} must be {_describe(cls)}, got {type_name(value)}", node)
        return value


def _describe(cls) -> str:
    if isinstance(cls, tuple):
        return " or ".join(_describe(c) for c in cls)
    return {LogicalGraph: "a Graph", GraphCollection: "a Collection", str: "a String",
            int: "an Integer", dict: "a Map", Closure: "a lambda", Symbol: "a symbol",
            PatternGraph: "a pattern", KeySet: "a key set"}.get(cls, cls.__name__)


def _equal(a, b) -> bool:
    if a is ABSENT or b is ABSENT:
        return a is b
    if _is_number(a) and _is_number(b):
        return a == b
    if type(a) is not type(b):
        return False
    if isinstance(a, (Vertex, Edge, LogicalGraph)):
        return a is b or (a.id is not None and a.id == b.id)
    if isinstance(a, float) and math.isnan(a):
        return False
    return a == b


def _fold_operator(arg):
    """``(Graph g, Graph f => g.combine(f))`` and friends map straight to the library operator."""
    if not isinstance(arg, A.Lambda) or len(arg.params) != 2:
        return None
    if any(p.type != "Graph" for p in arg.params):
        return None
    body = arg.body
    a, b = arg.params
    if (isinstance(body, A.Call) and body.method in _BINARY_GRAPH_OPS and len(body.args) == 1
            and body.target == A.Var(a.name) and body.args[0] == A.Var(b.name)):
        return _BINARY_GRAPH_OPS[body.method]
    return None


# -- method tables ----------------------------------------------------------------

def _keys(it: Interpreter, value, node) -> list:
    if isinstance(value, dict) and not value:
        return []
    if not isinstance(value, KeySet):
        raise it.type_error(f"grouping keys must be a set like {{:type, \"city\"}}, got {type_name(value)}",
                            node)
    out = []
    for k in value:
        if isinstance(k, Symbol):
            if k.name != "type":
                raise it.error(f"unknown grouping symbol :{k.name}; only :type exists", node)
            out.append(ops.TYPE)
        elif isinstance(k, str):
            out.append(k)
        else:
            raise it.type_error(f"grouping keys are strings or :type, got {type_name(k)}", node)
    return out


def _params(it: Interpreter, value, node) -> dict[str, str]:
    if not isinstance(value, dict):
        raise it.type_error(f"algorithm parameters must be a map, got {type_name(value)}", node)
    out = {}
    for k, v in value.items():
        if isinstance(v, Symbol):
            v = v.name
        elif isinstance(v, KeySet):
            v = ",".join(x.name if isinstance(x, Symbol) else str(x) for x in v)
        elif not isinstance(v, (str, int, float, bool)):
            raise it.type_error(f"parameter {k!r} cannot be {type_name(v)}", node)
        out[k] = v
    return out


def _algorithm(it: Interpreter, value, node) -> str:
    if isinstance(value, Symbol):
        return value.name
    if isinstance(value, str):
        return value
    raise it.type_error(f"algorithm must be a symbol like :LabelPropagation, got {type_name(value)}", node)


def _call_graph(it, node, target, args):
    algo = _algorithm(it, args[0], node)
    params = _params(it, args[1], node) if len(args) > 1 else {}
    return it._guard(ops.call_for_graph, node, target, algo, params, it.registry)


def _call_collection(it, node, target, args):
    algo = _algorithm(it, args[0], node)
    params = _params(it, args[1], node) if len(args) > 1 else {}
    return it._guard(ops.call_for_collection, node, target, algo, params, it.registry)


def _g_binary(name):
    def handler(it, node, g, args):
        other = it.expect(args[0], LogicalGraph, f"argument of {name}", node)
        return it._guard(_BINARY_GRAPH_OPS[name], node, g, other)
    return handler


def _g_match(it, node, g, args):
    pattern = args[0]
    if isinstance(pattern, str):
        try:
            pattern = parse_pattern(pattern)
        except PatternSyntaxError as exc:
            raise it.error(f"bad pattern: {exc}", node) from None
    it.expect(pattern, PatternGraph, "first argument of match", node)
    pred = None
    if len(args) > 1:
        closure = it.expect(args[1], Closure, "match predicate", node)
        if len(closure.params) != 1:
            raise it.error("a match predicate takes one Graph parameter", closure.node)
        check = it.predicate(closure, node)

        def pred(sub, emb):
            it._embeddings.append(emb)
            try:
                return check(sub)
            finally:
                it._embeddings.pop()
    return it._guard(match_pattern, node, g, pattern, pred)


def _g_aggregate(it, node, g, args):
    key = it.expect(args[0], str, "aggregate key", node)
    closure = it.expect(args[1], Closure, "aggregate function", node)

    def func(graph):
        value = it.call(closure, [graph], node)
        if not (isinstance(value, (int, float, bool, str))):
            raise it.type_error(f"aggregate function returned {type_name(value)}", closure.node)
        return value
    return it._guard(ops.aggregate, node, g, key, func)


def _g_project(it, node, g, args):
    vf = it.expect(args[0], Closure, "vertex function", node)
    ef = it.expect(args[1], Closure, "edge function", node)
    return it._guard(ops.project, node, g, lambda v: it.call(vf, [v], node),
                     lambda e: it.call(ef, [e], node))


def _aggregator(it, closure, kind, node):
    if closure is None:
        return None
    it.expect(closure, Closure, "aggregation function", node)

    def agg(summary, members):
        it._writable.add(id(summary))
        try:
            it.call(closure, [summary, ElementSet(kind, {m.id: m for m in members})], node)
        finally:
            it._writable.discard(id(summary))
    return agg


def _g_summarize(it, node, g, args):
    if len(args) == 2:
        vkeys, ekeys = args
        vagg = eagg = None
    else:
        vkeys, vagg, ekeys, eagg = args
    spec = ops.SummarizationSpec(_keys(it, vkeys, node), _keys(it, ekeys, node),
                                 _aggregator(it, vagg, "vertex", node),
                                 _aggregator(it, eagg, "edge", node))
    return it._guard(ops.summarize, node, g, spec)


def _c_select(it, node, coll, args):
    closure = it.expect(args[0], Closure, "select predicate", node)
    return it._guard(ops.select, node, coll, it.predicate(closure, node))


def _c_sort(it, node, coll, args):
    key = it.expect(args[0], str, "sort key", node)
    order = "asc"
    if len(args) > 1:
        sym = it.expect(args[1], Symbol, "sort order", node)
        if sym.name not in ("asc", "desc"):
            raise it.error(f"sort order must be :asc or :desc, got :{sym.name}", node)
        order = sym.name
    return it._guard(ops.sort_by, node, coll, key, order)


def _c_top(it, node, coll, args):
    n = it.expect(args[0], int, "top count", node)
    if n < 0:
        raise it.error("top count must not be negative", node)
    return ops.top(coll, n)


def _c_setop(fn, name):
    def handler(it, node, coll, args):
        other = it.expect(args[0], GraphCollection, f"argument of {name}", node)
        return fn(coll, other)
    return handler


def _c_apply(it, node, coll, args):
    closure = it.expect(args[0], Closure, "apply operand", node)
    return it._guard(ops.apply, node, coll, lambda g: it.call(closure, [g], node))


def _c_reduce(it, node, coll, args):
    closure = it.expect(args[0], Closure, "reduce operand", node)

    def op(a, b):
        res = it.call(closure, [a, b], node)
        if not isinstance(res, LogicalGraph):
            raise it.type_error(f"reduce operand returned {type_name(res)}", closure.node)
        return res
    return it._guard(ops.reduce, node, coll, op)


def _s_select(it, node, es, args):
    closure = it.expect(args[0], Closure, "select predicate", node)
    check = it.predicate(closure, node)
    return ElementSet(es.kind, {k: v for k, v in es.items.items() if check(v)})


def _s_values(it, node, es, args):
    key = it.expect(args[0], str, "property key", node)
    return ValueList(ops.values(es, key))


def _s_sum(it, node, es, args):
    key = it.expect(args[0], str, "property key", node)
    return it._guard(ops.sum_of, node, es, key)


def _s_average(it, node, es, args):
    key = it.expect(args[0], str, "property key", node)
    return it._guard(ops.average_of, node, es, key)


def _count(it, node, target, args):
    return len(target)


def _v_sum(it, node, vals, args):
    return it._guard(ops.sum_values, node, vals)


def _v_average(it, node, vals, args):
    return it._guard(ops.average_values, node, vals)


_GRAPH_METHODS = {
    "combine": (1, 1, _g_binary("combine")),
    "overlap": (1, 1, _g_binary("overlap")),
    "exclude": (1, 1, _g_binary("exclude")),
    "match": (1, 2, _g_match),
    "aggregate": (2, 2, _g_aggregate),
    "project": (2, 2, _g_project),
    "summarize": (2, 4, _g_summarize),
    "callForGraph": (1, 2, _call_graph),
    "callForCollection": (1, 2, _call_collection),
}
_COLLECTION_METHODS = {
    "select": (1, 1, _c_select),
    "distinct": (0, 0, lambda it, node, c, a: ops.distinct(c)),
    "sortBy": (1, 2, _c_sort),
    "top": (1, 1, _c_top),
    "union": (1, 1, _c_setop(ops.union_coll, "union")),
    "intersect": (1, 1, _c_setop(ops.intersect_coll, "intersect")),
    "difference": (1, 1, _c_setop(ops.difference_coll, "difference")),
    "apply": (1, 1, _c_apply),
    "reduce": (1, 1, _c_reduce),
    "count": (0, 0, _count),
    "callForGraph": (1, 2, _call_graph),
    "callForCollection": (1, 2, _call_collection),
}
_SET_METHODS = {
    "select": (1, 1, _s_select),
    "count": (0, 0, _count),
    "values": (1, 1, _s_values),
    "sum": (1, 1, _s_sum),
    "average": (1, 1, _s_average),
}
_VALUE_METHODS = {
    "count": (0, 0, _count),
    "sum": (0, 0, _v_sum),
    "average": (0, 0, _v_average),
}
_METHODS = {
    LogicalGraph: _GRAPH_METHODS,
    GraphCollection: _COLLECTION_METHODS,
    ElementSet: _SET_METHODS,
    ValueList: _VALUE_METHODS,
    KeySet: {"count": (0, 0, _count)},
}


def run(source: str | A.Script, db: EpgmDatabase, bindings: dict[str, Any] | None = None, *,
        strict: bool = False, registry: AlgorithmRegistry | None = None,
        on_statement: Callable[[StatementTiming], None] | None = None) -> RunResult:
    """Parse and execute a script against ``db``; returns final bindings and timings."""
    script = parse(source, strict=strict) if isinstance(source, str) else source
    return Interpreter(db, bindings, registry).run(script, on_statement)

