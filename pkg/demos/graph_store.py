"""
The versioned graph store
=========================

Vertices live in rows keyed by (partition, id), with properties and both
edge directions as columns. Graphs live in their own table.
"""

import tempfile

import epgm
from epgm.store import open_store

db = epgm.load_fixture()
tmp = tempfile.mkdtemp()

s = open_store(tmp, partition_count=4, partitioner="hash")
s.import_database(db, db.metadata["labels"])
s.stats()

v = s.get_vertex(0)
print(v.vertex.properties, v.vertex.graph_ids, v.idx)
print([(e.label, e.target) for e in v.out_edges])
print([(e.label, e.source) for e in v.in_edges])

# every out-edge has its mirrored in-edge
s.audit_mirror()

# writes are versioned; old states stay readable
before = s.last_timestamp
alice = db.vertices[0].copy()
alice["city"] = "Dresden"
s.put_vertex(alice, [e for e in db.edges.values() if e.source == 0])
print(s.get_vertex(0).vertex["city"], s.get_vertex(0, as_of=before).vertex["city"])

# the whole database back, as of now or earlier
again = s.load_database(as_of=before)
len(again.vertices), len(again.edges), sorted(again.graphs)
s.close()

# reopening with a different layout is refused
try:
    open_store(tmp, partition_count=2)
except epgm.store.ConfigMismatchError as exc:
    print(exc)
