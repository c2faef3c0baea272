"""ASCII pattern graphs and predicate-filtered subgraph matching.

Grammar (whitespace insignificant)::

    pattern := vertex (edge vertex)*
    vertex  := "(" ident ")"
    edge    := "-" ident "->" | "<-" ident "-"
    ident   := [a-zA-Z][a-zA-Z0-9]*

Matching enumerates vertex- and edge-injective, non-induced embeddings,
keeps those accepted by the predicate and projects each onto the subgraph
of bound elements. Embeddings that map onto the same subgraph collapse
into one result.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .model import EpgmError, GraphCollection, LogicalGraph


class PatternSyntaxError(EpgmError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class PatternEdge:
    name: str
    source: str
    target: str


@dataclass
class PatternGraph:
    vertices: list[str] = field(default_factory=list)
    edges: list[PatternEdge] = field(default_factory=list)
    text: str = ""

    def edge(self, name: str) -> PatternEdge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)


@dataclass(frozen=True)
class Embedding:
    vertices: dict[str, int]
    edges: dict[str, int]

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(sorted(set(self.vertices.values()))), tuple(sorted(set(self.edges.values())))


BindingPredicate = Callable[[LogicalGraph, Embedding], bool]

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<sym>->|<-|[()\-]))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PatternSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = "ident" if m.group("ident") else "sym"
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_pattern(text: str) -> PatternGraph:
    toks = _tokens(text)
    i = 0

    def expect(value: str | None = None, kind: str = "sym") -> str:
        nonlocal i
        k, v, p = toks[i]
        if k != kind or (value is not None and v != value):
            want = repr(value) if value is not None else kind
            got = "end of pattern" if k == "end" else repr(v)
            raise PatternSyntaxError(f"expected {want}, found {got}", p)
        i += 1
        return v

    pattern = PatternGraph(text=text)

    def vertex() -> str:
        expect("(")
        name = expect(kind="ident")
        expect(")")
        if name not in pattern.vertices:
            pattern.vertices.append(name)
        return name

    left = vertex()
    while toks[i][0] != "end":
        k, v, p = toks[i]
        if v == "-":
            i += 1
            p = toks[i][2]
            name = expect(kind="ident")
            expect("->")
            right = vertex()
            src, tgt = left, right
        elif v == "<-":
            i += 1
            p = toks[i][2]
            name = expect(kind="ident")
            expect("-")
            right = vertex()
            src, tgt = right, left
        else:
            raise PatternSyntaxError(f"expected an edge, found {v!r}", p)
        if any(e.name == name for e in pattern.edges):
            raise PatternSyntaxError(f"duplicate edge variable {name!r}", p)
        pattern.edges.append(PatternEdge(name, src, tgt))
        left = right
    return pattern


class _Index:
    """Adjacency of a graph keyed by (source, target)."""

    def __init__(self, g: LogicalGraph):
        self.between: dict[tuple[int, int], list[int]] = {}
        self.out_deg: dict[int, int] = {vid: 0 for vid in g.vertices}
        self.in_deg: dict[int, int] = {vid: 0 for vid in g.vertices}
        self.loops: dict[int, int] = {vid: 0 for vid in g.vertices}
        self.succ: dict[int, set[int]] = {vid: set() for vid in g.vertices}
        self.pred: dict[int, set[int]] = {vid: set() for vid in g.vertices}
        for eid, e in g.edges.items():
            self.between.setdefault((e.source, e.target), []).append(eid)
            self.out_deg[e.source] += 1
            self.in_deg[e.target] += 1
            self.succ[e.source].add(e.target)
            self.pred[e.target].add(e.source)
            if e.source == e.target:
                self.loops[e.source] += 1
        for ids in self.between.values():
            ids.sort()


def _variable_order(p: PatternGraph, domains: dict[str, list[int]]) -> list[str]:
    neighbours: dict[str, set[str]] = {v: set() for v in p.vertices}
    for e in p.edges:
        neighbours[e.source].add(e.target)
        neighbours[e.target].add(e.source)
    order: list[str] = []
    remaining = set(p.vertices)
    while remaining:
        frontier = [v for v in remaining if neighbours[v] & set(order)] or list(remaining)
        nxt = min(frontier, key=lambda v: (len(domains[v]), p.vertices.index(v)))
        order.append(nxt)
        remaining.remove(nxt)
    return order


def embeddings(g: LogicalGraph, p: PatternGraph) -> Iterator[Embedding]:
    """Every injective embedding of ``p`` in ``g`` (backtracking search)."""
    if not p.vertices:
        return
    idx = _Index(g)
    need_out = {v: 0 for v in p.vertices}
    need_in = {v: 0 for v in p.vertices}
    need_loop = {v: 0 for v in p.vertices}
    for e in p.edges:
        need_out[e.source] += 1
        need_in[e.target] += 1
        if e.source == e.target:
            need_loop[e.source] += 1
    domains = {
        v: [vid for vid in g.vertices
            if idx.out_deg[vid] >= need_out[v] and idx.in_deg[vid] >= need_in[v]
            and idx.loops[vid] >= need_loop[v]]
        for v in p.vertices
    }
    domain_sets = {v: set(d) for v, d in domains.items()}
    order = _variable_order(p, domains)
    # pattern edges become checkable once both endpoints are bound
    ready: dict[str, list[PatternEdge]] = {v: [] for v in order}
    for e in p.edges:
        last = max(order.index(e.source), order.index(e.target))
        ready[order[last]].append(e)

    vbind: dict[str, int] = {}
    used_v: set[int] = set()
    ebind: dict[str, int] = {}
    used_e: set[int] = set()

    def candidates(var: str) -> list[int]:
        # restrict by already-bound neighbours when possible
        best = None
        for e in p.edges:
            if e.source == var and e.target in vbind and e.target != var:
                cand = idx.pred[vbind[e.target]]
            elif e.target == var and e.source in vbind and e.source != var:
                cand = idx.succ[vbind[e.source]]
            else:
                continue
            best = cand if best is None or len(cand) < len(best) else best
        if best is None:
            return domains[var]
        dom = domain_sets[var]
        return sorted(c for c in best if c in dom)

    def bind_edges(edges: list[PatternEdge], k: int) -> Iterator[None]:
        if k == len(edges):
            yield None
            return
        pe = edges[k]
        for eid in idx.between.get((vbind[pe.source], vbind[pe.target]), ()):
            if eid in used_e:
                continue
            ebind[pe.name] = eid
            used_e.add(eid)
            yield from bind_edges(edges, k + 1)
            used_e.discard(eid)
            del ebind[pe.name]

    def search(depth: int) -> Iterator[Embedding]:
        if depth == len(order):
            yield Embedding(dict(vbind), dict(ebind))
            return
        var = order[depth]
        for vid in candidates(var):
            if vid in used_v:
                continue
            vbind[var] = vid
            used_v.add(vid)
            pending = ready[var]
            if all((vbind[e.source], vbind[e.target]) in idx.between for e in pending):
                for _ in bind_edges(pending, 0):
                    yield from search(depth + 1)
            used_v.discard(vid)
            del vbind[var]

    yield from search(0)


def subgraph_of(g: LogicalGraph, emb: Embedding, gid: int | None = None) -> LogicalGraph:
    vids = sorted(set(emb.vertices.values()))
    eids = sorted(set(emb.edges.values()))
    return LogicalGraph(gid, "", {}, {v: g.vertices[v] for v in vids},
                        {e: g.edges[e] for e in eids}, g.db)


def match_pattern(g: LogicalGraph, p: PatternGraph | str,
                  predicate: BindingPredicate | None = None) -> GraphCollection:
    """Subgraphs of ``g`` isomorphic to ``p`` for which ``predicate`` holds.

    The predicate receives the candidate subgraph and the embedding. A
    subgraph is kept if any of its embeddings satisfies it. Results are
    sorted by (vertex ids, edge ids).
    """
    if isinstance(p, str):
        p = parse_pattern(p)
    found: dict[tuple, Embedding] = {}
    for emb in embeddings(g, p):
        key = emb.key()
        if key in found:
            continue
        if predicate is not None:
            sub = subgraph_of(g, emb)
            try:
                ok = predicate(sub, emb)
            except EpgmError as exc:
                raise EpgmError(f"match predicate failed on {key}: {exc}") from exc
            if not ok:
                continue
        found[key] = emb
    out = []
    for key in sorted(found):
        gid = g.db.fresh_graph_id() if g.db is not None else None
        out.append(subgraph_of(g, found[key], gid))
    return GraphCollection(out)
