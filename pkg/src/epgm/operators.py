"""EPGM operator algebra over logical graphs and graph collections.

All operators are pure: inputs are never mutated and outputs are temporary
graphs with fresh ids drawn from the source database's counters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .model import (ABSENT, Edge, EpgmDatabase, EpgmError, GraphCollection, LogicalGraph,
                    PropertyValue, Vertex, check_property_value)

GraphPredicate = Callable[[LogicalGraph], bool]
AggregateFunction = Callable[[LogicalGraph], PropertyValue]
UnaryGraphOperator = Callable[[LogicalGraph], LogicalGraph]
BinaryGraphOperator = Callable[[LogicalGraph, LogicalGraph], LogicalGraph]


class OperatorError(EpgmError):
    pass


class _TypeLabel:
    def __repr__(self) -> str:
        return ":type"


# Grouping-key marker for the type label; never equal to a property key.
TYPE = _TypeLabel()


class _Null:
    def __repr__(self) -> str:
        return "NULL"


# Grouping value used when an element lacks a grouping key.
NULL = _Null()


_temp_ids = itertools.count(-1, -1)


def _fresh_graph_id(*graphs: LogicalGraph) -> int:
    for g in graphs:
        if g.db is not None:
            return g.db.fresh_graph_id()
    # graphs without a database get negative ids so they never clash with stored ones
    return next(_temp_ids)


def _db_of(g1: LogicalGraph, g2: LogicalGraph) -> EpgmDatabase | None:
    if g1.db is not None and g2.db is not None and g1.db is not g2.db:
        raise OperatorError(f"graphs {g1.id} and {g2.id} belong to different databases")
    return g1.db if g1.db is not None else g2.db


# -- collection operators ---------------------------------------------------

def select(coll: Iterable[LogicalGraph], pred: GraphPredicate) -> GraphCollection:
    out = []
    for g in coll:
        try:
            keep = pred(g)
        except EpgmError as exc:
            raise OperatorError(f"predicate failed on graph {g.id}: {exc}") from exc
        if keep is not True and keep is not False:
            raise OperatorError(f"predicate returned {keep!r} for graph {g.id}, expected a boolean")
        if keep:
            out.append(g)
    return GraphCollection(out)


def distinct(coll: Iterable[LogicalGraph]) -> GraphCollection:
    seen = set()
    out = []
    for g in coll:
        if g.id not in seen:
            seen.add(g.id)
            out.append(g)
    return GraphCollection(out)


def _sort_class(value: Any) -> str:
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    raise OperatorError(f"cannot sort by value {value!r}")


def sort_by(coll: Iterable[LogicalGraph], key: str, order: str = "asc") -> GraphCollection:
    """Stable sort on a graph property.

    Graphs lacking ``key`` go last in input order regardless of ``order``.
    Integers and floats compare with each other; any other mix of types is
    an error naming two offending graphs.
    """
    if order not in ("asc", "desc"):
        raise OperatorError(f"unknown sort order {order!r}")
    graphs = list(coll)
    present = [g for g in graphs if key in g.properties]
    missing = [g for g in graphs if key not in g.properties]
    kinds: dict[str, LogicalGraph] = {}
    for g in present:
        kinds.setdefault(_sort_class(g.properties[key]), g)
    if len(kinds) > 1:
        a, b = list(kinds.values())[:2]
        raise OperatorError(
            f"graphs {a.id} and {b.id} hold incomparable values for {key!r}: "
            f"{a.properties[key]!r} vs {b.properties[key]!r}")
    for g in present:
        v = g.properties[key]
        if isinstance(v, float) and math.isnan(v):
            raise OperatorError(f"graph {g.id} holds NaN for {key!r}")
    # sorted() is stable for reverse=True as well
    present.sort(key=lambda g: g.properties[key], reverse=(order == "desc"))
    return GraphCollection(present + missing)


def top(coll: Sequence[LogicalGraph], n: int) -> GraphCollection:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise OperatorError(f"top expects a non-negative integer, got {n!r}")
    return GraphCollection(list(coll)[:n])


def union_coll(coll: Iterable[LogicalGraph], other: Iterable[LogicalGraph]) -> GraphCollection:
    return distinct(itertools.chain(coll, other))


def intersect_coll(coll: Iterable[LogicalGraph], other: Iterable[LogicalGraph]) -> GraphCollection:
    keep = {g.id for g in other}
    return distinct(g for g in coll if g.id in keep)


def difference_coll(coll: Iterable[LogicalGraph], other: Iterable[LogicalGraph]) -> GraphCollection:
    drop = {g.id for g in other}
    return distinct(g for g in coll if g.id not in drop)


# -- binary graph operators -------------------------------------------------

def combine(g1: LogicalGraph, g2: LogicalGraph) -> LogicalGraph:
    db = _db_of(g1, g2)
    vertices = dict(g1.vertices)
    for vid, v in g2.vertices.items():
        vertices.setdefault(vid, v)
    edges = dict(g1.edges)
    for eid, e in g2.edges.items():
        edges.setdefault(eid, e)
    return LogicalGraph(_fresh_graph_id(g1, g2), "", {}, vertices, edges, db)


def overlap(g1: LogicalGraph, g2: LogicalGraph) -> LogicalGraph:
    db = _db_of(g1, g2)
    vertices = {vid: v for vid, v in g1.vertices.items() if vid in g2.vertices}
    edges = {eid: e for eid, e in g1.edges.items() if eid in g2.edges}
    return LogicalGraph(_fresh_graph_id(g1, g2), "", {}, vertices, edges, db)


def exclude(g1: LogicalGraph, g2: LogicalGraph) -> LogicalGraph:
    db = _db_of(g1, g2)
    vertices = {vid: v for vid, v in g1.vertices.items() if vid not in g2.vertices}
    edges = {eid: e for eid, e in g1.edges.items()
             if e.source in vertices and e.target in vertices}
    return LogicalGraph(_fresh_graph_id(g1, g2), "", {}, vertices, edges, db)


# -- aggregation ------------------------------------------------------------

def aggregate(g: LogicalGraph, key: str, func: AggregateFunction) -> LogicalGraph:
    value = check_property_value(func(g))
    props = dict(g.properties)
    props[key] = value
    return g.with_properties(props)


def count(elements: Iterable[Any]) -> int:
    return sum(1 for _ in elements)


def values(elements: Iterable[Any], key: str) -> list[PropertyValue]:
    """Values of ``key`` over the elements that have it, in element order."""
    out = []
    for el in elements:
        v = el.properties.get(key, ABSENT)
        if v is not ABSENT:
            out.append(v)
    return out


def _numeric(vals: Iterable[Any], key: str | None) -> list[int | float]:
    out = []
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            where = f" under key {key!r}" if key else ""
            raise OperatorError(f"non-numeric value {v!r}{where}")
        out.append(v)
    return out


def sum_values(vals: Iterable[Any], key: str | None = None) -> int | float:
    nums = _numeric(vals, key)
    if any(isinstance(v, float) for v in nums):
        return _fsum(nums)
    return sum(nums)


def average_values(vals: Iterable[Any], key: str | None = None) -> float:
    nums = _numeric(vals, key)
    if not nums:
        where = f" for key {key!r}" if key else ""
        raise OperatorError(f"average over zero values{where}")
    n = len(nums)
    total = _fsum(nums)
    if math.isinf(total) and all(math.isfinite(v) for v in nums):
        # the sum left the float range while the mean need not
        return _fsum([v / n for v in nums])
    return total / n


def _fsum(nums: list) -> float:
    try:
        return math.fsum(nums)
    except OverflowError:
        return float(sum(nums))
    except ValueError:  # inf and -inf together
        return math.nan


def sum_of(elements: Iterable[Any], key: str) -> int | float:
    return sum_values(values(elements, key), key)


def average_of(elements: Iterable[Any], key: str) -> float:
    return average_values(values(elements, key), key)


def vertex_count(g: LogicalGraph) -> int:
    return len(g.vertices)


def edge_count(g: LogicalGraph) -> int:
    return len(g.edges)


# -- projection -------------------------------------------------------------

def project(g: LogicalGraph, vertex_func: Callable[[Vertex], Vertex],
            edge_func: Callable[[Edge], Edge]) -> LogicalGraph:
    """Rewrite labels and properties while keeping ids and adjacency.

    A function may return an element with unset id/endpoints (a template);
    they are filled from the input element. Returning a different id or
    different endpoints is an error.
    """
    vertices = {}
    for vid, v in g.vertices.items():
        out = vertex_func(v)
        if not isinstance(out, Vertex):
            raise OperatorError(f"vertex function returned {out!r} for vertex {vid}")
        if out.id is not None and out.id != vid:
            raise OperatorError(f"vertex function changed id {vid} to {out.id}")
        vertices[vid] = Vertex(vid, out.label, dict(out.properties), set(v.graph_ids))
    edges = {}
    for eid, e in g.edges.items():
        out = edge_func(e)
        if not isinstance(out, Edge):
            raise OperatorError(f"edge function returned {out!r} for edge {eid}")
        if out.id is not None and out.id != eid:
            raise OperatorError(f"edge function changed id {eid} to {out.id}")
        if ((out.source is not None and out.source != e.source)
                or (out.target is not None and out.target != e.target)):
            raise OperatorError(f"edge function changed the endpoints of edge {eid}")
        edges[eid] = Edge(eid, e.source, e.target, out.label, dict(out.properties),
                          e.index, set(e.graph_ids))
    return LogicalGraph(_fresh_graph_id(g), g.label, dict(g.properties), vertices, edges, g.db)


# -- summarization ----------------------------------------------------------

@dataclass
class SummarizationSpec:
    vertex_keys: Sequence[Any] = ()
    edge_keys: Sequence[Any] = ()
    vertex_agg: Callable[[Vertex, list[Vertex]], Any] | None = None
    edge_agg: Callable[[Edge, list[Edge]], Any] | None = None


def _group_key(el: Vertex | Edge, keys: Sequence[Any]) -> tuple:
    return tuple(el.label if k is TYPE else el.properties.get(k, NULL) for k in keys)


def _hashable(value: Any) -> Any:
    # keep 1, 1.0 and True in separate groups
    return (type(value).__name__, value)


def _stamp(el: Vertex | Edge, keys: Sequence[Any], group: tuple) -> None:
    for k, v in zip(keys, group):
        if k is not TYPE and v is not NULL:
            el.properties[k] = v


def summarize(g: LogicalGraph, spec: SummarizationSpec | None = None, *,
              vertex_keys: Sequence[Any] = (), edge_keys: Sequence[Any] = (),
              vertex_agg=None, edge_agg=None) -> LogicalGraph:
    """Group vertices by key tuples and collapse edges between groups.

    One summary vertex per distinct vertex grouping tuple (elements lacking a
    key group under NULL); one summary edge per (source group, target group,
    edge grouping tuple). Grouping values are copied onto summary elements,
    then the aggregation callbacks receive (summary element, members).
    """
    if spec is None:
        spec = SummarizationSpec(vertex_keys, edge_keys, vertex_agg, edge_agg)
    vkeys = list(dict.fromkeys(spec.vertex_keys))
    ekeys = list(dict.fromkeys(spec.edge_keys))

    fresh_vertex, fresh_edge = _id_allocators(g)

    groups: dict[tuple, list[Vertex]] = {}
    group_values: dict[tuple, tuple] = {}
    group_of: dict[int, tuple] = {}
    for vid, v in g.vertices.items():
        raw = _group_key(v, vkeys)
        hk = tuple(_hashable(x) for x in raw)
        groups.setdefault(hk, []).append(v)
        group_values.setdefault(hk, raw)
        group_of[vid] = hk

    summary_vertex: dict[tuple, Vertex] = {}
    for hk, members in groups.items():
        raw = group_values[hk]
        label = raw[vkeys.index(TYPE)] if TYPE in vkeys else ""
        sv = Vertex(fresh_vertex(), label, {})
        _stamp(sv, vkeys, raw)
        if spec.vertex_agg is not None:
            spec.vertex_agg(sv, members)
        summary_vertex[hk] = sv

    edge_groups: dict[tuple, list[Edge]] = {}
    edge_values: dict[tuple, tuple] = {}
    for e in g.edges.values():
        raw = _group_key(e, ekeys)
        hk = (group_of[e.source], group_of[e.target], tuple(_hashable(x) for x in raw))
        edge_groups.setdefault(hk, []).append(e)
        edge_values.setdefault(hk, raw)

    edges = {}
    per_source: dict[int, int] = {}
    for hk, members in edge_groups.items():
        src = summary_vertex[hk[0]].id
        tgt = summary_vertex[hk[1]].id
        raw = edge_values[hk]
        label = raw[ekeys.index(TYPE)] if TYPE in ekeys else ""
        idx = per_source.get(src, 0)
        per_source[src] = idx + 1
        se = Edge(fresh_edge(), src, tgt, label, {}, idx)
        _stamp(se, ekeys, raw)
        if spec.edge_agg is not None:
            spec.edge_agg(se, members)
        edges[se.id] = se

    vertices = {sv.id: sv for sv in summary_vertex.values()}
    return LogicalGraph(_fresh_graph_id(g), "", {}, vertices, edges, g.db)


def _id_allocators(g: LogicalGraph):
    if g.db is not None:
        return g.db.fresh_vertex_id, g.db.fresh_edge_id
    vc = itertools.count(max(g.vertices, default=-1) + 1)
    ec = itertools.count(max(g.edges, default=-1) + 1)
    return vc.__next__, ec.__next__


def count_aggregator(key: str = "count"):
    """Aggregation callback writing the group size under ``key``."""
    def agg(summary, members):
        summary[key] = len(members)
    return agg


# -- auxiliary operators ----------------------------------------------------

def apply(coll: Iterable[LogicalGraph], op: UnaryGraphOperator) -> GraphCollection:
    out = []
    for i, g in enumerate(coll):
        try:
            res = op(g)
        except EpgmError as exc:
            raise OperatorError(f"apply failed at index {i} (graph {g.id}): {exc}") from exc
        if not isinstance(res, LogicalGraph):
            raise OperatorError(f"apply operand returned {type(res).__name__} at index {i}")
        out.append(res)
    return GraphCollection(out)


def reduce(coll: Iterable[LogicalGraph], op: BinaryGraphOperator) -> LogicalGraph:
    """Strict left fold ``op(...op(op(g1, g2), g3)..., gn)``.

    Folding with :func:`combine` accumulates in place instead of copying the
    growing intermediate at every step; the result is identical.
    """
    graphs = list(coll)
    if not graphs:
        raise OperatorError("reduce on an empty collection")
    if len(graphs) == 1:
        return graphs[0]
    if op is combine:
        return _combine_all(graphs)
    acc = graphs[0]
    for g in graphs[1:]:
        acc = op(acc, g)
        if not isinstance(acc, LogicalGraph):
            raise OperatorError(f"reduce operand returned {type(acc).__name__}")
    return acc


def _combine_all(graphs: list[LogicalGraph]) -> LogicalGraph:
    db = graphs[0].db
    vertices: dict[int, Vertex] = {}
    edges: dict[int, Edge] = {}
    for g in graphs:
        if g.db is not None:
            if db is None:
                db = g.db
            elif g.db is not db:
                raise OperatorError(f"graph {g.id} belongs to a different database")
        for vid, v in g.vertices.items():
            vertices.setdefault(vid, v)
        for eid, e in g.edges.items():
            edges.setdefault(eid, e)
    gid = db.fresh_graph_id() if db is not None else next(_temp_ids)
    return LogicalGraph(gid, "", {}, vertices, edges, db)


def call_for_graph(inp: LogicalGraph | GraphCollection, algorithm: str,
                   params: dict | None = None, registry=None) -> LogicalGraph:
    from .algorithms import default_registry
    reg = registry if registry is not None else default_registry
    res = reg.invoke(algorithm, inp, params or {}, expect="graph")
    return res


def call_for_collection(inp: LogicalGraph | GraphCollection, algorithm: str,
                        params: dict | None = None, registry=None) -> GraphCollection:
    from .algorithms import default_registry
    reg = registry if registry is not None else default_registry
    return reg.invoke(algorithm, inp, params or {}, expect="collection")
