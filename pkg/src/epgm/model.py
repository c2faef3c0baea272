"""In-memory EPGM database: shared vertex and edge spaces plus logical graphs.

Every element (vertex, edge, logical graph) carries a type label and a
schema-free property map. Logical graphs reference subsets of the shared
spaces and may overlap freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Sequence, Union

PropertyValue = Union[int, float, bool, str]

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class EpgmError(Exception):
    """Base class for all errors raised by this package."""


class UnknownVertexError(EpgmError, KeyError):
    def __init__(self, vertex_id: int):
        super().__init__(f"unknown vertex {vertex_id}")
        self.vertex_id = vertex_id

    def __str__(self) -> str:
        return self.args[0]


class ClosureError(EpgmError):
    """An edge of a logical graph has an endpoint outside its vertex set."""

    def __init__(self, edge_id: int, message: str | None = None):
        super().__init__(message or f"edge {edge_id} has an endpoint outside the graph's vertex set")
        self.edge_id = edge_id


class _Absent:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ABSENT"

    def __bool__(self) -> bool:
        return False


# Returned by property reads for missing keys; distinct from any stored value.
ABSENT = _Absent()


def check_property_value(value: Any) -> PropertyValue:
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        if not INT64_MIN <= value <= INT64_MAX:
            raise EpgmError(f"integer {value} does not fit in 64 bits")
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return value
    raise EpgmError(f"unsupported property value type {type(value).__name__}: {value!r}")


class Element:
    """Shared behaviour of vertices, edges and graph heads."""

    __slots__ = ()
    id: int | None
    label: str
    properties: dict[str, PropertyValue]

    def __getitem__(self, key: str) -> PropertyValue | _Absent:
        return self.properties.get(key, ABSENT)

    def __setitem__(self, key: str, value: PropertyValue) -> None:
        self.properties[key] = check_property_value(value)

    def get(self, key: str, default: Any = ABSENT) -> Any:
        return self.properties.get(key, default)


@dataclass(eq=False, slots=True)
class Vertex(Element):
    id: int | None
    label: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)
    graph_ids: set[int] = field(default_factory=set)

    def copy(self) -> Vertex:
        return Vertex(self.id, self.label, dict(self.properties), set(self.graph_ids))

    def same_content(self, other: Vertex) -> bool:
        return (self.id, self.label, self.properties) == (other.id, other.label, other.properties)

    def __repr__(self) -> str:
        return f"Vertex({self.id}, {self.label!r}, {self.properties!r})"


@dataclass(eq=False, slots=True)
class Edge(Element):
    id: int | None
    source: int | None
    target: int | None
    label: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)
    index: int = 0
    graph_ids: set[int] = field(default_factory=set)

    def copy(self) -> Edge:
        return Edge(self.id, self.source, self.target, self.label, dict(self.properties),
                    self.index, set(self.graph_ids))

    def same_content(self, other: Edge) -> bool:
        return ((self.id, self.source, self.target, self.index, self.label, self.properties)
                == (other.id, other.source, other.target, other.index, other.label, other.properties))

    def __repr__(self) -> str:
        return (f"Edge({self.id}, {self.source}->{self.target}#{self.index}, "
                f"{self.label!r}, {self.properties!r})")


class LogicalGraph(Element):
    """A labeled, attributed subgraph of a database.

    ``vertices`` and ``edges`` map ids to element objects in insertion order.
    Elements are shared with the database unless an operator (projection,
    summarization) produced new ones. Graph values are treated as immutable
    by every operator; mutate only graphs you created yourself.
    """

    __slots__ = ("id", "label", "properties", "vertices", "edges", "db")

    def __init__(self, id: int | None, label: str = "", properties: dict | None = None,
                 vertices: Iterable[Vertex] | dict[int, Vertex] = (),
                 edges: Iterable[Edge] | dict[int, Edge] = (),
                 db: EpgmDatabase | None = None):
        self.id = id
        self.label = label
        self.properties = dict(properties or {})
        self.vertices: dict[int, Vertex] = (
            vertices if isinstance(vertices, dict) else {v.id: v for v in vertices})
        self.edges: dict[int, Edge] = edges if isinstance(edges, dict) else {e.id: e for e in edges}
        self.db = db

    @property
    def vertex_ids(self) -> set[int]:
        return set(self.vertices)

    @property
    def edge_ids(self) -> set[int]:
        return set(self.edges)

    def with_properties(self, properties: dict[str, PropertyValue]) -> LogicalGraph:
        return LogicalGraph(self.id, self.label, properties, self.vertices, self.edges, self.db)

    def closure_violations(self) -> list[int]:
        return [e.id for e in self.edges.values()
                if e.source not in self.vertices or e.target not in self.vertices]

    def out_edges(self) -> dict[int, list[Edge]]:
        adj: dict[int, list[Edge]] = {vid: [] for vid in self.vertices}
        for e in self.edges.values():
            adj[e.source].append(e)
        return adj

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return (f"LogicalGraph(id={self.id}, label={self.label!r}, |V|={len(self.vertices)}, "
                f"|E|={len(self.edges)}, properties={self.properties!r})")


class GraphCollection(Sequence[LogicalGraph]):
    """Ordered sequence of logical graphs; duplicates allowed until ``distinct``."""

    __slots__ = ("_graphs",)

    def __init__(self, graphs: Iterable[LogicalGraph] = ()):
        self._graphs = tuple(graphs)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return GraphCollection(self._graphs[i])
        return self._graphs[i]

    def __len__(self) -> int:
        return len(self._graphs)

    def __iter__(self) -> Iterator[LogicalGraph]:
        return iter(self._graphs)

    @property
    def ids(self) -> list[int]:
        return [g.id for g in self._graphs]

    def __repr__(self) -> str:
        return f"GraphCollection({self.ids})"


class EpgmDatabase:
    """Vertex space, edge space and the set of logical graphs.

    Ids are dense per-space counters starting at 0. Temporary graphs and
    elements produced by operators draw from the same counters so they can
    never collide with stored elements.
    """

    def __init__(self):
        self.vertices: dict[int, Vertex] = {}
        self.edges: dict[int, Edge] = {}
        self.graphs: dict[int, LogicalGraph] = {}
        self.next_vertex_id = 0
        self.next_edge_id = 0
        self.next_graph_id = 0
        # next free per-source edge index, the ``idx`` column of the vertex table
        self.edge_index: dict[int, int] = {}
        self._edge_keys: set[tuple[int, int]] = set()
        # free-form dataset facts: label seed order, generator parameters, ground truth
        self.metadata: dict[str, Any] = {}

    # -- id allocation --------------------------------------------------
    def fresh_vertex_id(self) -> int:
        vid = self.next_vertex_id
        self.next_vertex_id += 1
        return vid

    def fresh_edge_id(self) -> int:
        eid = self.next_edge_id
        self.next_edge_id += 1
        return eid

    def fresh_graph_id(self) -> int:
        gid = self.next_graph_id
        self.next_graph_id += 1
        return gid

    # -- CRUD -----------------------------------------------------------
    def add_vertex(self, label: str, properties: dict | None = None, id: int | None = None) -> int:
        if id is None:
            id = self.fresh_vertex_id()
        elif id in self.vertices:
            raise EpgmError(f"duplicate vertex id {id}")
        else:
            self.next_vertex_id = max(self.next_vertex_id, id + 1)
        props = {k: check_property_value(v) for k, v in (properties or {}).items()}
        self.vertices[id] = Vertex(id, label, props)
        return id

    def add_edge(self, source: int, target: int, label: str, properties: dict | None = None,
                 id: int | None = None, index: int | None = None) -> int:
        if source not in self.vertices:
            raise UnknownVertexError(source)
        if target not in self.vertices:
            raise UnknownVertexError(target)
        if id is None:
            id = self.fresh_edge_id()
        elif id in self.edges:
            raise EpgmError(f"duplicate edge id {id}")
        else:
            self.next_edge_id = max(self.next_edge_id, id + 1)
        counter = self.edge_index.get(source, 0)
        if index is None:
            index = counter
        elif (source, index) in self._edge_keys:
            raise EpgmError(f"vertex {source} already has an out-edge with index {index}")
        self.edge_index[source] = max(counter, index + 1)
        self._edge_keys.add((source, index))
        props = {k: check_property_value(v) for k, v in (properties or {}).items()}
        self.edges[id] = Edge(id, source, target, label, props, index)
        return id

    def create_logical_graph(self, label: str, properties: dict | None = None,
                             vertex_ids: Iterable[int] = (), edge_ids: Iterable[int] = (),
                             id: int | None = None) -> int:
        vids = list(dict.fromkeys(vertex_ids))
        eids = list(dict.fromkeys(edge_ids))
        for vid in vids:
            if vid not in self.vertices:
                raise UnknownVertexError(vid)
        members = set(vids)
        for eid in eids:
            if eid not in self.edges:
                raise EpgmError(f"unknown edge {eid}")
            e = self.edges[eid]
            if e.source not in members or e.target not in members:
                raise ClosureError(eid)
        if id is None:
            id = self.fresh_graph_id()
        elif id in self.graphs:
            raise EpgmError(f"duplicate graph id {id}")
        else:
            self.next_graph_id = max(self.next_graph_id, id + 1)
        props = {k: check_property_value(v) for k, v in (properties or {}).items()}
        graph = LogicalGraph(id, label, props,
                             {vid: self.vertices[vid] for vid in vids},
                             {eid: self.edges[eid] for eid in eids}, db=self)
        for v in graph.vertices.values():
            v.graph_ids.add(id)
        for e in graph.edges.values():
            e.graph_ids.add(id)
        self.graphs[id] = graph
        return id

    def persist(self, graph: LogicalGraph, label: str | None = None) -> int:
        """Register a temporary operator result as a logical graph of this database.

        Only membership is persisted; elements must already exist in the spaces.
        """
        return self.create_logical_graph(
            graph.label if label is None else label, graph.properties,
            graph.vertices, graph.edges)

    def database_graph(self) -> LogicalGraph:
        return LogicalGraph(None, "", {}, self.vertices, self.edges, db=self)

    @property
    def collection(self) -> GraphCollection:
        """All logical graphs in id order (``db.G``)."""
        return GraphCollection(self.graphs[g] for g in sorted(self.graphs))

    def get_property(self, element: Element, key: str):
        return element.properties.get(key, ABSENT)

    def set_property(self, element: Element, key: str, value: PropertyValue) -> None:
        element[key] = value

    def check_invariants(self) -> list[str]:
        """Return human-readable violations of closure, membership and edge identity."""
        problems = []
        seen = set()
        for e in self.edges.values():
            if e.source not in self.vertices or e.target not in self.vertices:
                problems.append(f"edge {e.id} is dangling")
            if (e.source, e.index) in seen:
                problems.append(f"edge {e.id} repeats (source, index) = {(e.source, e.index)}")
            seen.add((e.source, e.index))
        for g in self.graphs.values():
            for eid in g.closure_violations():
                problems.append(f"graph {g.id} violates closure at edge {eid}")
            for v in g.vertices.values():
                if g.id not in v.graph_ids:
                    problems.append(f"vertex {v.id} does not list graph {g.id}")
            for e in g.edges.values():
                if g.id not in e.graph_ids:
                    problems.append(f"edge {e.id} does not list graph {g.id}")
        for v in self.vertices.values():
            for gid in v.graph_ids:
                if gid not in self.graphs or v.id not in self.graphs[gid].vertices:
                    problems.append(f"vertex {v.id} lists graph {gid} without membership")
        for e in self.edges.values():
            for gid in e.graph_ids:
                if gid not in self.graphs or e.id not in self.graphs[gid].edges:
                    problems.append(f"edge {e.id} lists graph {gid} without membership")
        return problems

    def __repr__(self) -> str:
        return (f"EpgmDatabase(|V|={len(self.vertices)}, |E|={len(self.edges)}, "
                f"|G|={len(self.graphs)})")


def create_database() -> EpgmDatabase:
    return EpgmDatabase()


def values_equal(a: PropertyValue, b: PropertyValue) -> bool:
    """Type-aware equality: ``True`` never equals ``1`` and NaN equals NaN."""
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    if isinstance(a, float) and isinstance(b, float) and math.isnan(a) and math.isnan(b):
        return True
    return a == b
