import math
import tempfile

import pytest
from hypothesis import given, settings, strategies as st

from epgm import Edge, EpgmDatabase, LogicalGraph, Vertex
from epgm.store import (CodecError, ConfigMismatchError, CorruptJournalError, DanglingReferenceError,
                        EdgeQualifier, Partitioner, StoreError, open_store)
from epgm.store import codec
from epgm.store.codec import GRAPHS_COL, IDX_COL, META, OUT_EDGES, PROPERTIES, TYPE_COL

from strategies import databases


@pytest.fixture
def store(tmp_path):
    s = open_store(tmp_path / "db", partition_count=4, partitioner="hash")
    yield s
    s.close()


def fig3_store(path, fig3, **kw):
    s = open_store(path, **kw)
    s.import_database(fig3, fig3.metadata["labels"])
    return s


# -- codec ---------------------------------------------------------------------------

def test_qualifier_bytes():
    q = EdgeQualifier(2, 0, 1, 0)
    assert q.pack().hex() == "0002" + "0000" + "0000000000000001" + "00000000"
    assert EdgeQualifier.unpack(q.pack()) == q
    assert str(q) == "<2,0-1,0>"


def test_row_keys_sort_like_numbers():
    keys = [codec.vertex_row_key(p, v) for p, v in [(0, 300), (0, 2), (1, 0), (0, 256)]]
    assert sorted(keys) == [keys[1], keys[3], keys[0], keys[2]]
    assert codec.split_vertex_row_key(keys[0]) == (0, 300)


@pytest.mark.parametrize("value", [0, -1, 2**63 - 1, -2**63, 0.5, -0.0, math.inf, True, False,
                                   "", "Alice", "Grüße"])
def test_value_round_trip(value):
    raw = codec.encode_value(value)
    back = codec.decode_value(raw)
    assert back == value and type(back) is type(value)


def test_type_codes():
    assert codec.encode_value("Alice") == b"\x05Alice"
    assert codec.encode_value(2014) == b"\x00" + (2014).to_bytes(8, "big")
    assert codec.encode_value(True)[0] == 2
    assert codec.encode_value(1.5)[0] == 1


def test_corrupted_type_code_raises():
    with pytest.raises(CodecError, match="unknown property type code 9"):
        codec.decode_value(b"\x09abc", PROPERTIES, b"name")


def test_nan_survives():
    assert math.isnan(codec.decode_value(codec.encode_value(math.nan)))


@pytest.mark.parametrize("raw", [b"", b"\x00\x01", b"\x02\x07", b"\x00\x01\x00\x05\x00name"])
def test_malformed_cells_raise(raw):
    with pytest.raises(CodecError):
        if len(raw) > 3:
            codec.decode_edge_properties(raw)
        else:
            codec.decode_value(raw)


@given(st.dictionaries(st.text(max_size=5), st.one_of(st.integers(-2**63, 2**63 - 1), st.text(),
                                                       st.booleans(), st.floats(allow_nan=False))))
def test_edge_property_list_round_trip(props):
    assert codec.decode_edge_properties(codec.encode_edge_properties(props)) == props


# -- partitioning ------------------------------------------------------------------------

def test_hash_partitions_are_exactly_balanced():
    p = Partitioner("hash", 10)
    counts = [0] * 10
    for vid in range(1000):
        counts[p.assign(vid)] += 1
    assert counts == [100] * 10


def test_range_boundaries():
    p = Partitioner("range", 3, (0, 100, 200))
    assert [p.assign(v) for v in (0, 99, 100, 150, 200, 10**12)] == [0, 0, 1, 1, 2, 2]


@pytest.mark.parametrize("args", [("range", 2, (5, 10)), ("range", 2, (0, 0)), ("range", 3, (0, 9)),
                                  ("hash", 2, (0, 1)), ("zigzag", 2, ()), ("hash", 0, ())])
def test_invalid_partitioners(args):
    from epgm import EpgmError
    with pytest.raises(EpgmError):
        Partitioner(*args)


@settings(max_examples=200)
@given(st.integers(0, 5000), st.integers(1, 64), st.integers(0, 10**9))
def test_hash_balance_bound(n, p, offset):
    part = Partitioner("hash", p)
    counts = [0] * p
    for vid in range(offset, offset + n):
        counts[part.assign(vid)] += 1
    assert max(counts) <= math.ceil(n / p)
    assert min(counts) >= n // p


# -- fixture layout -------------------------------------------------------------------------

def test_fixture_vertex_row_cells(tmp_path, fig3):
    s = fig3_store(tmp_path, fig3)
    row = codec.vertex_row_key(0, 0)
    cells = s.table.row(codec.VERTEX_FAMILIES, row)
    assert codec.decode_u16(cells[(META, TYPE_COL)]) == 0
    assert codec.decode_id_list(cells[(META, GRAPHS_COL)]) == [0, 2]
    assert cells[(PROPERTIES, b"name")] == b"\x05Alice"
    q = EdgeQualifier(2, 0, 1, 0).pack()
    assert codec.decode_edge_properties(cells[(OUT_EDGES, q)]) == {"since": 2014}
    assert codec.decode_u32(cells[(META, IDX_COL)]) == 1
    s.close()


def test_fixture_graph_row(tmp_path, fig3):
    s = fig3_store(tmp_path, fig3)
    grow = s.get_graph_row(2)
    assert grow.label == "Community" and s.labels.get("Community") == 5
    assert grow.vertex_keys == [(0, 0), (0, 1), (0, 2), (0, 3)]
    assert grow.properties == {"interest": "Graphs", "vertexCount": 4}
    s.close()


def test_fixture_round_trip(tmp_path, fig3):
    s = fig3_store(tmp_path, fig3, partition_count=3, partitioner="hash")
    s.close()
    s = open_store(tmp_path)
    back = s.load_database()
    assert_same_database(fig3, back)
    assert s.audit_mirror() == []
    s.close()


# -- columns and versions ---------------------------------------------------------------------

def test_vertex_without_edges_or_graphs(store):
    store.put_vertex(Vertex(7, "Tag", {"name": "x"}))
    cols = store.table.row(codec.VERTEX_FAMILIES, store.vertex_key(7))
    assert (META, GRAPHS_COL) not in cols
    assert (META, IDX_COL) not in cols
    assert store.get_vertex(7).vertex.graph_ids == set()


def test_as_of_reads(store):
    t1 = store.put_vertex(Vertex(0, "Person", {"name": "Alice"}))
    t2 = store.put_vertex(Vertex(0, "Person", {"name": "Alicia"}))
    assert t2 > t1
    assert store.get_vertex(0, as_of=t1).vertex["name"] == "Alice"
    assert store.get_vertex(0, as_of=t2).vertex["name"] == "Alicia"
    assert store.get_vertex(0).vertex["name"] == "Alicia"
    assert store.get_vertex(0, as_of=t1 - 1) is None


def test_graph_snapshot(tmp_path, fig3):
    s = fig3_store(tmp_path, fig3)
    t1 = s.last_timestamp
    g0 = fig3.graphs[0]
    smaller = LogicalGraph(0, g0.label, g0.properties,
                           {v: g0.vertices[v] for v in (0, 1)}, {e: g0.edges[e] for e in (0, 1)})
    t2 = s.put_graph(smaller)
    assert sorted(s.get_graph(0).vertices) == [0, 1]
    old = s.get_graph(0, as_of=t1)
    assert sorted(old.vertices) == [0, 1, 4]
    assert sorted(old.edges) == [0, 1, 6, 21]
    assert t2 > t1
    s.close()


def test_retention_keeps_three_versions(tmp_path):
    s = open_store(tmp_path, max_versions=3)
    stamps = [s.put_vertex(Vertex(0, "P", {"n": i})) for i in range(6)]
    versions = s.table.versions(PROPERTIES, s.vertex_key(0), b"n")
    assert [ts for ts, _ in versions] == stamps[:-4:-1]
    assert s.get_vertex(0, as_of=stamps[2]) is not None
    # older versions of a column are gone, the type column was written once
    assert s.get_vertex(0, as_of=stamps[2]).vertex.properties == {}
    for _ in range(5):
        s.flush()
    s.close()
    s = open_store(tmp_path)
    assert len(s.table.versions(PROPERTIES, s.vertex_key(0), b"n")) == 3
    assert s.get_vertex(0).vertex["n"] == 5
    s.close()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.one_of(st.integers(0, 9), st.none()), min_size=1, max_size=12),
       st.integers(1, 4))
def test_as_of_is_monotone(writes, max_versions):
    with tempfile.TemporaryDirectory() as tmp:
        s = open_store(tmp, max_versions=max_versions, sync="manual")
        stamps = []
        s.put_vertex(Vertex(0, "P"))
        for w in writes:
            props = {} if w is None else {"n": w}
            stamps.append(s.put_vertex(Vertex(0, "P", props)))
        row = s.vertex_key(0)
        versions = s.table.versions(PROPERTIES, row, b"n")
        assert len(versions) <= max_versions
        assert [t for t, _ in versions] == sorted({t for t, _ in versions}, reverse=True)
        seen = []
        for t in range(0, s.last_timestamp + 2):
            hit = [ts for ts, _ in versions if ts <= t]
            seen.append(hit[0] if hit else -1)
        assert seen == sorted(seen)
        # reads inside the retained window agree with the write history
        oldest = versions[-1][0] if versions else math.inf
        for t, w in zip(stamps, writes):
            if t >= oldest:
                got = s.get_vertex(0, as_of=t).vertex.get("n", None)
                assert got == w
        s.close()


# -- durability ----------------------------------------------------------------------------

def test_crash_keeps_journaled_writes(tmp_path):
    s = open_store(tmp_path)
    s.put_vertex(Vertex(0, "P", {"v": 0}))
    s.simulate_crash()
    s = open_store(tmp_path)
    assert s.get_vertex(0).vertex["v"] == 0
    s.close()


def test_crash_drops_unsynced_writes(tmp_path):
    s = open_store(tmp_path, sync="manual")
    s.put_vertex(Vertex(0, "P", {"v": 0}))
    s.sync()
    s.put_vertex(Vertex(1, "P", {"v": 1}))
    s.simulate_crash()
    s = open_store(tmp_path, sync="manual")
    assert s.get_vertex(0) is not None
    assert s.get_vertex(1) is None
    s.close()


def test_flush_and_merge_survive_reopen(tmp_path, fig3):
    s = fig3_store(tmp_path, fig3)
    for _ in range(6):
        s.put_vertex(Vertex(5, "Person", {"name": "Frank", "age": 24}),
                     [e for e in fig3.edges.values() if e.source == 5])
        s.flush()
    s.delete_vertex(10)
    s.flush()
    s.table.merge()
    s.close()
    s = open_store(tmp_path)
    assert s.get_vertex(10) is None
    assert s.get_vertex(5).vertex["age"] == 24
    assert s.audit_mirror() == []
    s.close()


def test_corrupt_journal_reports_offset(tmp_path):
    s = open_store(tmp_path)
    s.put_vertex(Vertex(0, "P"))
    s.put_vertex(Vertex(1, "P"))
    s.close()
    journal = tmp_path / "journal.log"
    data = bytearray(journal.read_bytes())
    data[-1] ^= 0xFF
    journal.write_bytes(bytes(data))
    with pytest.raises(CorruptJournalError, match="byte offset"):
        open_store(tmp_path)


def test_config_mismatch(tmp_path):
    open_store(tmp_path, partition_count=4).close()
    with pytest.raises(ConfigMismatchError):
        open_store(tmp_path, partition_count=8)
    with pytest.raises(ConfigMismatchError):
        open_store(tmp_path, partitioner="hash")
    with pytest.raises(ConfigMismatchError):
        open_store(tmp_path, max_versions=5)
    open_store(tmp_path).close()


def test_dangling_graph_members(store):
    store.put_vertex(Vertex(0, "P"))
    g = LogicalGraph(0, "G", {}, [Vertex(0, "P"), Vertex(1, "P")], [])
    with pytest.raises(DanglingReferenceError):
        store.put_graph(g)
    with pytest.raises(StoreError):
        store.delete_vertex(42)


def test_persist_graph_assigns_fresh_ids(tmp_path, fig3):
    s = fig3_store(tmp_path, fig3)
    g = LogicalGraph(None, "Pair", {}, {v: fig3.vertices[v] for v in (0, 1)},
                     {e: fig3.edges[e] for e in (0, 1)})
    gid = s.persist_graph(g)
    assert gid == 3
    assert 3 in s.get_vertex(0).vertex.graph_ids
    assert sorted(s.get_graph(3).edges) == [0, 1]
    s.close()


# -- scans and randomized round trips ---------------------------------------------------------

def test_scans_sorted_and_partitioned(tmp_path):
    db = EpgmDatabase()
    for i in range(50):
        db.add_vertex("P", {"i": i})
    for i in range(49):
        db.add_edge(i, (i * 7 + 3) % 50, "e")
    s = open_store(tmp_path, partition_count=4, partitioner="hash", sync="manual")
    s.import_database(db)
    rows = [s.vertex_key(sv.vertex.id) for sv in s.scan_vertices()]
    assert rows == sorted(rows)
    parts = [sv.vertex.id for p in range(4) for sv in s.scan_vertices(partition=p)]
    assert parts == [sv.vertex.id for sv in s.scan_vertices()]
    assert all(sv.partition == sv.vertex.id % 4 for sv in s.scan_vertices())
    with pytest.raises(StoreError):
        list(s.scan_vertices(partition=4))
    s.close()


def assert_same_database(a, b):
    assert set(a.vertices) == set(b.vertices)
    for vid, v in a.vertices.items():
        w = b.vertices[vid]
        assert (v.label, v.properties, v.graph_ids) == (w.label, w.properties, w.graph_ids)
    assert set(a.edges) == set(b.edges)
    for eid, e in a.edges.items():
        f = b.edges[eid]
        assert e.same_content(f)
        assert e.graph_ids == f.graph_ids
    assert set(a.graphs) == set(b.graphs)
    for gid, g in a.graphs.items():
        h = b.graphs[gid]
        assert (g.label, g.properties) == (h.label, h.properties)
        assert g.vertex_ids == h.vertex_ids and g.edge_ids == h.edge_ids


def _nan_free(db):
    return all(not (isinstance(x, float) and math.isnan(x))
               for el in list(db.vertices.values()) + list(db.edges.values())
               for x in el.properties.values())


@settings(max_examples=100, deadline=None)
@given(databases(max_vertices=12, max_edges=20, max_graphs=4), st.integers(1, 5),
       st.sampled_from(["hash", "range"]))
def test_random_round_trip_and_mirror(db, partitions, strategy):
    with tempfile.TemporaryDirectory() as tmp:
        kw = {"partition_count": partitions, "partitioner": strategy, "sync": "manual"}
        if strategy == "range":
            kw["boundaries"] = tuple(range(0, 3 * partitions, 3))
        s = open_store(tmp, **kw)
        s.import_database(db)
        assert s.audit_mirror() == []
        s.close()
        s = open_store(tmp)
        back = s.load_database()
        assert_same_database(db, back)
        assert back.check_invariants() == []
        stats = s.stats()
        assert (stats["vertices"], stats["edges"], stats["graphs"]) == \
            (len(db.vertices), len(db.edges), len(db.graphs))
        # mutate: rewrite a vertex without its out-edges, delete another
        if db.vertices:
            vid = next(iter(db.vertices))
            s.put_vertex(db.vertices[vid], [])
            assert s.audit_mirror() == []
            s.delete_vertex(vid)
            assert s.audit_mirror() == []
            assert s.get_vertex(vid) is None
            for sv in s.scan_vertices():
                assert all(vid not in (e.source, e.target) for e in sv.out_edges + sv.in_edges)
        s.close()


def test_in_edges_carry_ids(tmp_path, fig3):
    s = fig3_store(tmp_path, fig3, partition_count=2, partitioner="hash")
    sv = s.get_vertex(0)
    assert sorted(e.id for e in sv.in_edges) == [1, 15, 17, 21]
    assert sorted(e.id for e in sv.out_edges) == [0]
    s.close()
