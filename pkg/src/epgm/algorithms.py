"""Pluggable graph algorithms reachable through the call operators."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .model import EpgmError, GraphCollection, LogicalGraph, check_property_value

DEFAULT_TRANSACTIONAL = ("SalesQuotation", "SalesOrder", "SalesInvoice", "PurchOrder", "DeliveryNote")
DEFAULT_MASTER = ("Customer", "Vendor", "Employee", "Product")


class AlgorithmError(EpgmError):
    pass


def _symbol(name: str) -> str:
    return name[1:] if name.startswith(":") else name


@dataclass(frozen=True)
class RegisteredAlgorithm:
    func: Callable[..., Any]
    arity: str  # "graph" or "collection"


class AlgorithmRegistry:
    def __init__(self):
        self._algorithms: dict[str, RegisteredAlgorithm] = {}

    def register(self, symbol: str, func: Callable[..., Any], arity: str) -> None:
        if arity not in ("graph", "collection"):
            raise AlgorithmError(f"arity must be 'graph' or 'collection', got {arity!r}")
        name = _symbol(symbol)
        if name in self._algorithms:
            raise AlgorithmError(f"algorithm :{name} is already registered")
        self._algorithms[name] = RegisteredAlgorithm(func, arity)

    def lookup(self, symbol: str) -> RegisteredAlgorithm:
        name = _symbol(symbol)
        try:
            return self._algorithms[name]
        except KeyError:
            raise AlgorithmError(f"unknown algorithm :{name}") from None

    def __contains__(self, symbol: str) -> bool:
        return _symbol(symbol) in self._algorithms

    def symbols(self) -> list[str]:
        return sorted(self._algorithms)

    def invoke(self, symbol: str, inp, params: dict, expect: str):
        algo = self.lookup(symbol)
        if algo.arity != expect:
            raise AlgorithmError(
                f"algorithm :{_symbol(symbol)} returns a {algo.arity}, "
                f"use callFor{algo.arity.capitalize()}")
        str_params = {str(k): v if isinstance(v, str) else _param_text(v) for k, v in params.items()}
        result = algo.func(inp, str_params)
        if expect == "graph" and not isinstance(result, LogicalGraph):
            raise AlgorithmError(f"algorithm :{_symbol(symbol)} did not return a graph")
        if expect == "collection" and not isinstance(result, GraphCollection):
            raise AlgorithmError(f"algorithm :{_symbol(symbol)} did not return a collection")
        return result


def _param_text(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (set, frozenset, list, tuple)):
        return ",".join(_param_text(x) for x in v)
    return str(v)


def _single_graph(inp) -> LogicalGraph:
    if isinstance(inp, LogicalGraph):
        return inp
    if isinstance(inp, GraphCollection):
        from .operators import reduce, combine
        return reduce(inp, combine)
    raise AlgorithmError(f"expected a graph or collection, got {type(inp).__name__}")


def _int_param(params: dict, name: str, default: int) -> int:
    raw = params.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise AlgorithmError(f"parameter {name!r} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise AlgorithmError(f"parameter {name!r} must be positive, got {value}")
    return value


def _label_set(params: dict, name: str, default: tuple[str, ...]) -> frozenset[str]:
    raw = params.get(name)
    if raw is None:
        return frozenset(default)
    return frozenset(s.strip() for s in raw.split(",") if s.strip())


# -- label propagation ------------------------------------------------------

def propagate_labels(g: LogicalGraph, max_iterations: int = 20) -> dict[int, int]:
    """Synchronous label propagation on the undirected view of ``g``.

    Every vertex starts with its own id. Each round all vertices adopt the
    most frequent label among their neighbours at once, ties going to the
    smallest label; vertices without neighbours keep theirs. Stops at a
    fixpoint or after ``max_iterations`` rounds.
    """
    neighbours: dict[int, list[int]] = {vid: [] for vid in g.vertices}
    for e in g.edges.values():
        if e.source == e.target:
            continue
        neighbours[e.source].append(e.target)
        neighbours[e.target].append(e.source)
    labels = {vid: vid for vid in g.vertices}
    for _ in range(max_iterations):
        new = {}
        for vid, nbrs in neighbours.items():
            if not nbrs:
                new[vid] = labels[vid]
                continue
            counts = Counter(labels[n] for n in nbrs)
            best = max(counts.values())
            new[vid] = min(lbl for lbl, c in counts.items() if c == best)
        if new == labels:
            break
        labels = new
    return labels


def label_propagation(g: LogicalGraph, property_key: str = "community",
                      max_iterations: int = 20) -> LogicalGraph:
    if not property_key:
        raise AlgorithmError("property key must be non-empty")
    labels = propagate_labels(g, max_iterations)
    vertices = {}
    for vid, v in g.vertices.items():
        nv = v.copy()
        nv.properties[property_key] = labels[vid]
        vertices[vid] = nv
    gid = g.db.fresh_graph_id() if g.db is not None else g.id
    return LogicalGraph(gid, g.label, dict(g.properties), vertices, dict(g.edges), g.db)


def community_split(g: LogicalGraph, property_key: str = "community",
                    graph_property_key: str = "community") -> GraphCollection:
    """One graph per distinct value of ``property_key`` with its internal edges."""
    groups: dict[Any, list[int]] = {}
    for vid, v in g.vertices.items():
        if property_key not in v.properties:
            raise AlgorithmError(f"vertex {vid} has no {property_key!r} property")
        val = v.properties[property_key]
        groups.setdefault((type(val).__name__, val), []).append(vid)
    member_of = {vid: key for key, vids in groups.items() for vid in vids}
    internal: dict[Any, dict] = {key: {} for key in groups}
    for eid, e in g.edges.items():
        if member_of[e.source] == member_of[e.target]:
            internal[member_of[e.source]][eid] = e
    out = []
    for key, vids in groups.items():
        gid = g.db.fresh_graph_id() if g.db is not None else None
        out.append(LogicalGraph(gid, "Community", {graph_property_key: check_property_value(key[1])},
                                {vid: g.vertices[vid] for vid in vids}, internal[key], g.db))
    return GraphCollection(out)


def _run_label_propagation(inp, params: dict) -> LogicalGraph:
    key = params.get("propertyKey", "community")
    return label_propagation(_single_graph(inp), key, _int_param(params, "maxIterations", 20))


def _run_community_detection(inp, params: dict) -> GraphCollection:
    key = params.get("propertyKey", "community")
    gkey = params.get("graphPropertyKey", "community")
    labeled = label_propagation(_single_graph(inp), key, _int_param(params, "maxIterations", 20))
    return community_split(labeled, key, gkey)


# -- business transaction graphs --------------------------------------------

class _DisjointSet:
    def __init__(self, items: Iterable[int]):
        self.parent = {i: i for i in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def btg_extract(g: LogicalGraph, transactional: Iterable[str] = DEFAULT_TRANSACTIONAL,
                master: Iterable[str] = DEFAULT_MASTER) -> GraphCollection:
    """Business transaction graphs: components of transactional vertices plus adjacent master data.

    Components are computed over edges joining two transactional vertices,
    ignoring direction. Each component gains the master vertices directly
    linked to it and the edges doing the linking.
    """
    transactional = frozenset(transactional)
    master = frozenset(master)
    if transactional & master:
        raise AlgorithmError(f"labels classified both ways: {sorted(transactional & master)}")
    for vid, v in g.vertices.items():
        if v.label not in transactional and v.label not in master:
            raise AlgorithmError(f"vertex {vid} has unclassified label {v.label!r}")
    tx = [vid for vid, v in g.vertices.items() if v.label in transactional]
    ds = _DisjointSet(tx)
    txset = set(tx)
    for e in g.edges.values():
        if e.source in txset and e.target in txset:
            ds.union(e.source, e.target)
    components: dict[int, list[int]] = {}
    for vid in tx:
        components.setdefault(ds.find(vid), []).append(vid)
    comp_edges: dict[int, list[int]] = {root: [] for root in components}
    comp_masters: dict[int, dict[int, None]] = {root: {} for root in components}
    for eid, e in g.edges.items():
        s_tx, t_tx = e.source in txset, e.target in txset
        if s_tx and t_tx:
            comp_edges[ds.find(e.source)].append(eid)
        elif s_tx or t_tx:
            root = ds.find(e.source if s_tx else e.target)
            other = e.target if s_tx else e.source
            comp_edges[root].append(eid)
            comp_masters[root][other] = None
    out = []
    for root in sorted(components):
        vids = sorted(components[root]) + sorted(comp_masters[root])
        gid = g.db.fresh_graph_id() if g.db is not None else None
        out.append(LogicalGraph(gid, "BusinessTransactionGraph", {},
                                {vid: g.vertices[vid] for vid in vids},
                                {eid: g.edges[eid] for eid in sorted(comp_edges[root])}, g.db))
    return GraphCollection(out)


def _run_btg(inp, params: dict) -> GraphCollection:
    return btg_extract(_single_graph(inp),
                       _label_set(params, "transactionalLabels", DEFAULT_TRANSACTIONAL),
                       _label_set(params, "masterLabels", DEFAULT_MASTER))


def _builtin_registry() -> AlgorithmRegistry:
    reg = AlgorithmRegistry()
    reg.register(":LabelPropagation", _run_label_propagation, "graph")
    reg.register(":CommunityDetection", _run_community_detection, "collection")
    reg.register(":BusinessTransactionGraphs", _run_btg, "collection")
    return reg


default_registry = _builtin_registry()


def register_algorithm(symbol: str, func: Callable[..., Any], arity: str,
                       registry: AlgorithmRegistry | None = None) -> None:
    (registry or default_registry).register(symbol, func, arity)


def lookup(symbol: str, registry: AlgorithmRegistry | None = None) -> RegisteredAlgorithm:
    return (registry or default_registry).lookup(symbol)
