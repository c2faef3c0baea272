"""Vertex and graph tables over the versioned cell table.

Vertex rows (key ``partition|vertex``) hold four families: ``meta`` (type,
graphs, idx), ``properties`` (one typed cell per key), ``out-edges`` and
``in-edges`` (one column per edge, cell = edge property list). Every
out-edge is mirrored into the target's in-edges under the same qualifier
with the opposite vertex swapped. A fifth family maps out-edge qualifiers
to EPGM edge ids.

Graph rows (key ``graph``) hold ``meta`` (type, vertices), ``properties``
and ``edges`` (one column per member vertex listing its out-edges that
belong to the graph).
"""

from __future__ import annotations

import json
import logging
import os
import threading
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from ..model import Edge, EpgmDatabase, EpgmError, LogicalGraph, Vertex
from . import codec
from .codec import (EDGE_IDS, GRAPH_EDGES, GRAPH_META, GRAPH_PROPERTIES, GRAPHS_COL, IDX_COL,
                    IN_EDGES, META, OUT_EDGES, PROPERTIES, TYPE_COL, VERTICES_COL, EdgeQualifier)
from .kv import CellTable
from .partition import Partitioner, equal_width_boundaries

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
VERTEX_ROW_FAMILIES = (META, PROPERTIES, OUT_EDGES, IN_EDGES, EDGE_IDS)
GRAPH_ROW_FAMILIES = (GRAPH_META, GRAPH_PROPERTIES, GRAPH_EDGES)


class StoreError(EpgmError):
    pass


class ConfigMismatchError(StoreError):
    pass


class DanglingReferenceError(StoreError):
    pass


@dataclass(frozen=True)
class StoreConfig:
    """Store settings; ``None`` fields take the stored value or a default."""

    path: str | os.PathLike
    partition_count: int | None = None
    partitioner: str | None = None
    boundaries: tuple[int, ...] | None = None
    max_versions: int | None = None
    sync: str = "always"


class LabelDictionary:
    """Bidirectional label <-> u16 mapping, ids assigned in first-use order."""

    def __init__(self, labels: Iterable[str] = (), on_change=None):
        self._labels: list[str] = []
        self._ids: dict[str, int] = {}
        self._on_change = on_change
        for label in labels:
            self._add(label)

    def _add(self, label: str) -> int:
        if len(self._labels) >= 2**16:
            raise StoreError("label dictionary is full")
        self._ids[label] = len(self._labels)
        self._labels.append(label)
        return self._ids[label]

    def id_for(self, label: str) -> int:
        lid = self._ids.get(label)
        if lid is None:
            lid = self._add(label)
            if self._on_change is not None:
                self._on_change()
        return lid

    def seed(self, labels: Iterable[str]) -> None:
        changed = False
        for label in labels:
            if label not in self._ids:
                self._add(label)
                changed = True
        if changed and self._on_change is not None:
            self._on_change()

    def label(self, lid: int) -> str:
        try:
            return self._labels[lid]
        except IndexError:
            raise codec.CodecError(f"unknown label id {lid}") from None

    def get(self, label: str) -> int | None:
        return self._ids.get(label)

    def as_list(self) -> list[str]:
        return list(self._labels)

    def __len__(self) -> int:
        return len(self._labels)


@dataclass
class StoredVertex:
    vertex: Vertex
    out_edges: list[Edge] = field(default_factory=list)
    in_edges: list[Edge] = field(default_factory=list)
    idx: int | None = None
    partition: int = 0


# -- row codecs ---------------------------------------------------------------

Cells = dict[tuple[int, bytes], bytes]


def encode_vertex_row(vertex: Vertex, out_edges: Iterable[Edge], labels: LabelDictionary,
                      partitioner: Partitioner, idx: int | None = None) -> tuple[bytes, Cells]:
    """Cells of one vertex row, excluding in-edges (those come from the sources)."""
    pid = partitioner.assign(vertex.id)
    row = codec.vertex_row_key(pid, vertex.id)
    cells: Cells = {(META, TYPE_COL): codec.encode_u16(labels.id_for(vertex.label))}
    if vertex.graph_ids:
        cells[(META, GRAPHS_COL)] = codec.encode_id_list(sorted(vertex.graph_ids))
    for key, value in vertex.properties.items():
        cells[(PROPERTIES, key.encode("utf-8"))] = codec.encode_value(value)
    next_idx = idx
    for e in out_edges:
        if e.source != vertex.id:
            raise StoreError(f"edge {e.id} does not start at vertex {vertex.id}")
        q = out_qualifier(e, labels, partitioner)
        cells[(OUT_EDGES, q)] = codec.encode_edge_properties(e.properties)
        if e.id is not None:
            cells[(EDGE_IDS, q)] = codec.encode_u64(e.id)
        next_idx = max(next_idx or 0, e.index + 1)
    if next_idx is not None:
        cells[(META, IDX_COL)] = codec.encode_u32(next_idx)
    return row, cells


def out_qualifier(e: Edge, labels: LabelDictionary, partitioner: Partitioner) -> bytes:
    return EdgeQualifier(labels.id_for(e.label), partitioner.assign(e.target), e.target, e.index).pack()


def in_qualifier(e: Edge, labels: LabelDictionary, partitioner: Partitioner) -> bytes:
    return EdgeQualifier(labels.id_for(e.label), partitioner.assign(e.source), e.source, e.index).pack()


def decode_vertex_row(row: bytes, cells: Cells, labels: LabelDictionary) -> StoredVertex:
    pid, vid = codec.split_vertex_row_key(row)
    type_cell = cells.get((META, TYPE_COL))
    if type_cell is None:
        raise codec.CodecError(f"vertex row {pid}-{vid} has no type column", META, TYPE_COL)
    try:
        label = labels.label(codec.decode_u16(type_cell))
    except codec.CodecError as exc:
        raise codec.CodecError(str(exc), META, TYPE_COL) from None
    graph_ids: set[int] = set()
    idx = None
    props = {}
    out_edges, in_edges = [], []
    for (family, qual), value in sorted(cells.items()):
        if family == META:
            if qual == GRAPHS_COL:
                graph_ids = set(_wrap(codec.decode_id_list, value, family, qual))
            elif qual == IDX_COL:
                idx = _wrap(codec.decode_u32, value, family, qual)
        elif family == PROPERTIES:
            props[qual.decode("utf-8")] = codec.decode_value(value, family, qual)
        elif family in (OUT_EDGES, IN_EDGES):
            q = EdgeQualifier.unpack(qual, family)
            eprops = codec.decode_edge_properties(value, family, qual)
            elabel = _wrap(labels.label, q.label_id, family, qual)
            if family == OUT_EDGES:
                eid_cell = cells.get((EDGE_IDS, qual))
                eid = None if eid_cell is None else codec.decode_u64(eid_cell)
                out_edges.append(Edge(eid, vid, q.opposite_id, elabel, eprops, q.index))
            else:
                in_edges.append(Edge(None, q.opposite_id, vid, elabel, eprops, q.index))
    vertex = Vertex(vid, label, props, graph_ids)
    return StoredVertex(vertex, out_edges, in_edges, idx, pid)


def _wrap(fn, value, family, qual):
    try:
        return fn(value)
    except (codec.CodecError, ValueError, IndexError) as exc:
        raise codec.CodecError(str(exc), family, qual) from None
    except Exception as exc:  # struct.error from short buffers
        raise codec.CodecError(f"malformed cell: {exc}", family, qual) from None


def encode_graph_row(graph: LogicalGraph, labels: LabelDictionary,
                     partitioner: Partitioner) -> tuple[bytes, Cells]:
    row = codec.graph_row_key(graph.id)
    vkeys = [codec.vertex_row_key(partitioner.assign(vid), vid) for vid in graph.vertices]
    cells: Cells = {
        (GRAPH_META, TYPE_COL): codec.encode_u16(labels.id_for(graph.label)),
        (GRAPH_META, VERTICES_COL): codec.encode_key_list(vkeys, codec.VERTEX_KEY_LEN),
    }
    for key, value in graph.properties.items():
        cells[(GRAPH_PROPERTIES, key.encode("utf-8"))] = codec.encode_value(value)
    per_vertex: dict[int, list[bytes]] = {}
    for e in graph.edges.values():
        per_vertex.setdefault(e.source, []).append(out_qualifier(e, labels, partitioner))
    for vid in graph.vertices:
        quals = per_vertex.get(vid)
        if quals:
            col = codec.vertex_row_key(partitioner.assign(vid), vid)
            cells[(GRAPH_EDGES, col)] = codec.encode_key_list(sorted(quals, key=_qual_sort),
                                                              codec.QUALIFIER_LEN)
    return row, cells


def _qual_sort(q: bytes):
    # order a vertex's edges by index, as listed in the graph table
    return EdgeQualifier.unpack(q).index, q


@dataclass
class GraphRow:
    id: int
    label: str
    properties: dict
    vertex_keys: list[tuple[int, int]]
    edges: dict[tuple[int, int], list[EdgeQualifier]]


def decode_graph_row(row: bytes, cells: Cells, labels: LabelDictionary) -> GraphRow:
    gid = codec.split_graph_row_key(row)
    type_cell = cells.get((GRAPH_META, TYPE_COL))
    if type_cell is None:
        raise codec.CodecError(f"graph row {gid} has no type column", GRAPH_META, TYPE_COL)
    label = _wrap(lambda v: labels.label(codec.decode_u16(v)), type_cell, GRAPH_META, TYPE_COL)
    vcell = cells.get((GRAPH_META, VERTICES_COL), codec.encode_key_list([], codec.VERTEX_KEY_LEN))
    vkeys = [codec.split_vertex_row_key(k) for k in
             _wrap(lambda v: codec.decode_key_list(v, codec.VERTEX_KEY_LEN), vcell,
                   GRAPH_META, VERTICES_COL)]
    props = {}
    edges = {}
    for (family, qual), value in cells.items():
        if family == GRAPH_PROPERTIES:
            props[qual.decode("utf-8")] = codec.decode_value(value, family, qual)
        elif family == GRAPH_EDGES:
            owner = codec.split_vertex_row_key(qual)
            quals = _wrap(lambda v: codec.decode_key_list(v, codec.QUALIFIER_LEN), value, family, qual)
            edges[owner] = [EdgeQualifier.unpack(q, family) for q in quals]
    return GraphRow(gid, label, props, vkeys, edges)


# -- the store ----------------------------------------------------------------

class Store:
    """Persistent, versioned, partitioned EPGM store (single writer, many readers)."""

    def __init__(self, config: StoreConfig):
        self.path = Path(config.path)
        self.path.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.RLock()
        meta_path = self.path / "meta"
        if meta_path.exists():
            meta = json.loads(meta_path.read_text())
            self.partitioner = Partitioner.from_dict(meta["partitioner"])
            self.max_versions = meta["max_versions"]
            self._check_config(config)
            labels = meta["labels"]
            self.dataset = meta.get("dataset", {})
        else:
            count = config.partition_count or 1
            strategy = config.partitioner or "range"
            bounds = tuple(config.boundaries) if config.boundaries else ()
            if strategy == "range" and not bounds:
                bounds = equal_width_boundaries(count)
            self.partitioner = Partitioner(strategy, count, bounds)
            self.max_versions = config.max_versions or 3
            labels = []
            self.dataset: dict = {}
        self.labels = LabelDictionary(labels, on_change=self._write_meta)
        self._write_meta()
        self.table = CellTable(self.path, self.max_versions, config.sync)
        rows = self.table.row_keys("graph")
        self.next_graph_id = codec.split_graph_row_key(rows[-1]) + 1 if rows else 0

    def _check_config(self, config: StoreConfig) -> None:
        p = self.partitioner
        if config.partition_count is not None and config.partition_count != p.partition_count:
            raise ConfigMismatchError(
                f"store has {p.partition_count} partitions, config asks for {config.partition_count}")
        if config.partitioner is not None and config.partitioner != p.strategy:
            raise ConfigMismatchError(
                f"store uses {p.strategy} partitioning, config asks for {config.partitioner}")
        if config.boundaries is not None and tuple(config.boundaries) != p.boundaries:
            raise ConfigMismatchError("range boundaries differ from the stored ones")
        if config.max_versions is not None and config.max_versions != self.max_versions:
            raise ConfigMismatchError(
                f"store keeps {self.max_versions} versions, config asks for {config.max_versions}")

    def _write_meta(self) -> None:
        if not hasattr(self, "labels"):
            return
        doc = {"format": FORMAT_VERSION, "partitioner": self.partitioner.to_dict(),
               "max_versions": self.max_versions, "labels": self.labels.as_list(),
               "dataset": self.dataset}
        tmp = self.path / "meta.tmp"
        with open(tmp, "w") as fh:
            json.dump(doc, fh)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.path / "meta")

    # -- lifecycle ---------------------------------------------------------
    def close(self) -> None:
        self.table.close()

    def flush(self) -> None:
        self.table.flush()

    def sync(self) -> None:
        self.table.sync()

    def simulate_crash(self) -> None:
        self.table.simulate_crash()

    def __enter__(self) -> Store:
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    @property
    def last_timestamp(self) -> int:
        return self.table.last_ts

    # -- vertices ------------------------------------------------------------
    def vertex_key(self, vertex_id: int) -> bytes:
        return codec.vertex_row_key(self.partitioner.assign(vertex_id), vertex_id)

    def put_vertex(self, vertex: Vertex, out_edges: Iterable[Edge] = (), timestamp: int | None = None) -> int:
        """Write a vertex with its outgoing edges; mirrors them as in-edges at the targets.

        Columns present in the previous version but not in this one are
        tombstoned, including mirrored in-edges of dropped out-edges.
        """
        out_edges = list(out_edges)
        with self._write_lock:
            row = self.vertex_key(vertex.id)
            old = self.table.row((META, PROPERTIES, OUT_EDGES, EDGE_IDS), row)
            old_idx = old.get((META, IDX_COL))
            idx = codec.decode_u32(old_idx) if old_idx is not None else None
            row, cells = encode_vertex_row(vertex, out_edges, self.labels, self.partitioner, idx)
            writes: list[tuple[int, bytes, bytes, bytes | None]] = []
            for (family, qual), value in cells.items():
                if old.get((family, qual)) != value:
                    writes.append((family, row, qual, value))
            for (family, qual) in old:
                if (family, qual) not in cells and family != IN_EDGES:
                    writes.append((family, row, qual, None))
                    if family == OUT_EDGES:
                        writes.append(self._mirror_of(row, qual, None))
            for e in out_edges:
                target_row = self.vertex_key(e.target)
                q_in = in_qualifier(e, self.labels, self.partitioner)
                value = codec.encode_edge_properties(e.properties)
                if self.table.get(IN_EDGES, target_row, q_in) != value:
                    writes.append((IN_EDGES, target_row, q_in, value))
            if not writes:
                return self.table.last_ts
            return self.table.write(writes, timestamp)

    def _mirror_of(self, row: bytes, out_qual: bytes, value: bytes | None):
        pid, vid = codec.split_vertex_row_key(row)
        q = EdgeQualifier.unpack(out_qual)
        target_row = codec.vertex_row_key(q.opposite_partition, q.opposite_id)
        in_q = EdgeQualifier(q.label_id, pid, vid, q.index).pack()
        return IN_EDGES, target_row, in_q, value

    def delete_vertex(self, vertex_id: int, timestamp: int | None = None) -> int:
        """Tombstone a vertex row and every mirrored copy of its edges."""
        with self._write_lock:
            row = self.vertex_key(vertex_id)
            cells = self.table.row(VERTEX_ROW_FAMILIES, row)
            if (META, TYPE_COL) not in cells:
                raise StoreError(f"unknown vertex {vertex_id}")
            writes = [(family, row, qual, None) for (family, qual) in cells]
            for (family, qual) in cells:
                if family == OUT_EDGES:
                    writes.append(self._mirror_of(row, qual, None))
                elif family == IN_EDGES:
                    q = EdgeQualifier.unpack(qual)
                    src_row = codec.vertex_row_key(q.opposite_partition, q.opposite_id)
                    pid, vid = codec.split_vertex_row_key(row)
                    out_q = EdgeQualifier(q.label_id, pid, vid, q.index).pack()
                    writes.append((OUT_EDGES, src_row, out_q, None))
                    writes.append((EDGE_IDS, src_row, out_q, None))
            return self.table.write(writes, timestamp)

    def get_vertex(self, vertex_id: int, as_of: int | None = None) -> StoredVertex | None:
        row = self.vertex_key(vertex_id)
        cells = self.table.row(VERTEX_ROW_FAMILIES, row, as_of)
        if (META, TYPE_COL) not in cells:
            return None
        sv = decode_vertex_row(row, cells, self.labels)
        for e in sv.in_edges:
            e.id = self._edge_id(e, as_of)
        return sv

    def _edge_id(self, e: Edge, as_of: int | None) -> int | None:
        src_row = self.vertex_key(e.source)
        q = EdgeQualifier(self.labels.id_for(e.label), self.partitioner.assign(e.target),
                          e.target, e.index).pack()
        raw = self.table.get(EDGE_IDS, src_row, q, as_of)
        return None if raw is None else codec.decode_u64(raw)

    def scan_vertices(self, partition: int | None = None, as_of: int | None = None) -> Iterator[StoredVertex]:
        """Vertices in row-key order; a partition scan reads only that key range.

        The row set and timestamp are fixed when the scan starts, so
        concurrent writes neither block nor leak into it.
        """
        if as_of is None:
            as_of = self.table.last_ts
        if partition is None:
            rows = self.table.row_keys("vertex")
        else:
            if not 0 <= partition < self.partitioner.partition_count:
                raise StoreError(f"no partition {partition}")
            start = codec.vertex_row_key(partition, 0)
            stop = codec.vertex_row_key(partition + 1, 0) if partition + 1 < 2**16 else None
            rows = self.table.row_keys("vertex", start, stop)
        for row in rows:
            cells = self.table.row(VERTEX_ROW_FAMILIES, row, as_of)
            if (META, TYPE_COL) in cells:
                sv = decode_vertex_row(row, cells, self.labels)
                for e in sv.in_edges:
                    e.id = self._edge_id(e, as_of)
                yield sv

    # -- graphs ----------------------------------------------------------------
    def put_graph(self, graph: LogicalGraph, timestamp: int | None = None) -> int:
        if graph.id is None or graph.id < 0:
            raise StoreError(f"graph id {graph.id!r} cannot be stored; use persist_graph")
        with self._write_lock:
            for vid in graph.vertices:
                if self.table.get(META, self.vertex_key(vid), TYPE_COL) is None:
                    raise DanglingReferenceError(f"graph {graph.id} references unknown vertex {vid}")
            for eid, e in graph.edges.items():
                q = out_qualifier(e, self.labels, self.partitioner)
                if self.table.get(OUT_EDGES, self.vertex_key(e.source), q) is None:
                    raise DanglingReferenceError(f"graph {graph.id} references unknown edge {eid}")
            row, cells = encode_graph_row(graph, self.labels, self.partitioner)
            old = self.table.row(GRAPH_ROW_FAMILIES, row)
            writes = [(f, row, q, v) for (f, q), v in cells.items() if old.get((f, q)) != v]
            writes += [(f, row, q, None) for (f, q) in old if (f, q) not in cells]
            self.next_graph_id = max(self.next_graph_id, graph.id + 1)
            if not writes:
                return self.table.last_ts
            return self.table.write(writes, timestamp)

    def get_graph_row(self, graph_id: int, as_of: int | None = None) -> GraphRow | None:
        row = codec.graph_row_key(graph_id)
        cells = self.table.row(GRAPH_ROW_FAMILIES, row, as_of)
        if (GRAPH_META, TYPE_COL) not in cells:
            return None
        return decode_graph_row(row, cells, self.labels)

    def get_graph(self, graph_id: int, as_of: int | None = None) -> LogicalGraph | None:
        """Snapshot of a logical graph with its member vertices and edges as of a timestamp."""
        grow = self.get_graph_row(graph_id, as_of)
        if grow is None:
            return None
        vertices = {}
        out_by_vertex: dict[int, dict[bytes, Edge]] = {}
        for pid, vid in grow.vertex_keys:
            sv = self.get_vertex(vid, as_of)
            if sv is None:
                raise DanglingReferenceError(f"graph {graph_id} lists missing vertex {vid}")
            vertices[vid] = sv.vertex
            out_by_vertex[vid] = {out_qualifier(e, self.labels, self.partitioner): e
                                  for e in sv.out_edges}
        edges = {}
        for (pid, vid), quals in grow.edges.items():
            for q in quals:
                e = out_by_vertex.get(vid, {}).get(q.pack())
                if e is None:
                    raise DanglingReferenceError(f"graph {graph_id} lists missing edge {q} at {vid}")
                edges[e.id] = e
        return LogicalGraph(graph_id, grow.label, grow.properties, vertices, edges)

    def graph_ids(self, as_of: int | None = None) -> list[int]:
        out = []
        for row in self.table.row_keys("graph"):
            if self.table.get(GRAPH_META, row, TYPE_COL, as_of) is not None:
                out.append(codec.split_graph_row_key(row))
        return out

    def persist_graph(self, graph: LogicalGraph, timestamp: int | None = None) -> int:
        """Store a temporary graph under a fresh id and register membership on its vertices."""
        with self._write_lock:
            gid = self.next_graph_id
            stored = LogicalGraph(gid, graph.label, graph.properties, graph.vertices, graph.edges)
            ts = self.put_graph(stored, timestamp)
            writes = []
            for vid in graph.vertices:
                row = self.vertex_key(vid)
                raw = self.table.get(META, row, GRAPHS_COL)
                ids = set(codec.decode_id_list(raw)) if raw is not None else set()
                ids.add(gid)
                writes.append((META, row, GRAPHS_COL, codec.encode_id_list(sorted(ids))))
            if writes:
                self.table.write(writes, ts if timestamp is not None else None)
            return gid

    # -- bulk ------------------------------------------------------------------
    def import_database(self, db: EpgmDatabase, labels: Iterable[str] = ()) -> dict[str, int]:
        """Bulk-write a database; its non-label metadata is kept with the store settings."""
        self.labels.seed(labels)
        extra = {k: v for k, v in db.metadata.items() if k != "labels"}
        if extra:
            self.dataset.update(extra)
            self._write_meta()
        out: dict[int, list[Edge]] = {vid: [] for vid in db.vertices}
        for e in db.edges.values():
            out[e.source].append(e)
        for vid, v in db.vertices.items():
            self.put_vertex(v, out[vid])
        for g in db.graphs.values():
            self.put_graph(g)
        return {"vertices": len(db.vertices), "edges": len(db.edges), "graphs": len(db.graphs)}

    def load_database(self, as_of: int | None = None) -> EpgmDatabase:
        """Rebuild an in-memory database from the store."""
        db = EpgmDatabase()
        db.metadata["labels"] = self.labels.as_list()
        db.metadata.update(self.dataset)
        stored = list(self.scan_vertices(as_of=as_of))
        for sv in stored:
            db.add_vertex(sv.vertex.label, sv.vertex.properties, id=sv.vertex.id)
        pending = []
        for sv in stored:
            for e in sorted(sv.out_edges, key=lambda e: e.index):
                if e.id is None:
                    pending.append(e)
                    continue
                db.add_edge(e.source, e.target, e.label, e.properties, id=e.id, index=e.index)
            if sv.idx is not None:
                db.edge_index[sv.vertex.id] = max(db.edge_index.get(sv.vertex.id, 0), sv.idx)
        for e in pending:
            db.add_edge(e.source, e.target, e.label, e.properties, index=e.index)
        for gid in self.graph_ids(as_of):
            g = self.get_graph(gid, as_of)
            db.create_logical_graph(g.label, g.properties, g.vertices, g.edges, id=gid)
        return db

    # -- audits and statistics -------------------------------------------------
    def audit_mirror(self) -> list[str]:
        """Every out-edge cell must have exactly one matching in-edge cell and vice versa."""
        problems = []
        outs: dict[tuple[bytes, bytes], bytes] = {}
        ins: dict[tuple[bytes, bytes], bytes] = {}
        for row in self.table.row_keys("vertex"):
            cells = self.table.row((OUT_EDGES, IN_EDGES, EDGE_IDS), row)
            for (family, qual), value in cells.items():
                if family == OUT_EDGES:
                    _, target_row, in_q, _ = self._mirror_of(row, qual, None)
                    outs[(target_row, in_q)] = value
                    if (EDGE_IDS, qual) not in cells:
                        problems.append(f"out-edge {EdgeQualifier.unpack(qual)} at {row.hex()} has no edge id")
                elif family == IN_EDGES:
                    ins[(row, qual)] = value
        for key, value in outs.items():
            if key not in ins:
                problems.append(f"missing in-edge {EdgeQualifier.unpack(key[1])} at row {key[0].hex()}")
            elif ins[key] != value:
                problems.append(f"in-edge {EdgeQualifier.unpack(key[1])} at row {key[0].hex()} "
                                f"differs from its out-edge")
        for key in ins:
            if key not in outs:
                problems.append(f"orphan in-edge {EdgeQualifier.unpack(key[1])} at row {key[0].hex()}")
        return problems

    def stats(self) -> dict:
        per_partition = Counter()
        vertex_labels = Counter()
        edge_labels = Counter()
        n_edges = 0
        for sv in self.scan_vertices():
            per_partition[sv.partition] += 1
            vertex_labels[sv.vertex.label] += 1
            for e in sv.out_edges:
                n_edges += 1
                edge_labels[e.label] += 1
        n_vertices = sum(per_partition.values())
        return {
            "vertices": n_vertices,
            "edges": n_edges,
            "graphs": len(self.graph_ids()),
            "partitions": {p: per_partition.get(p, 0)
                           for p in range(self.partitioner.partition_count)},
            "vertex_labels": dict(sorted(vertex_labels.items())),
            "edge_labels": dict(sorted(edge_labels.items())),
        }


def open_store(config: StoreConfig | str | os.PathLike, **kwargs) -> Store:
    if not isinstance(config, StoreConfig):
        config = StoreConfig(config, **kwargs)
    elif kwargs:
        config = replace(config, **kwargs)
    return Store(config)
