"""
The operator algebra on the small social network
=================================================

Three overlapping logical graphs (two communities and a forum) over one
shared set of persons and forums.
"""

import epgm
from epgm import operators as ops

db = epgm.load_fixture()
for gid, g in sorted(db.graphs.items()):
    print(gid, g.label, g.properties, sorted(g.vertices))

# graphs are views: the same vertex object lives in G0 and G2
print(db.graphs[0].vertices[0] is db.graphs[2].vertices[0])

G = db.collection

# select keeps graphs by a predicate over the whole graph
ops.select(G, lambda g: g["vertexCount"] > 3).ids
ops.select(G, lambda g: g.label == "Community").ids

# sorting is stable and puts graphs lacking the key last
ops.top(ops.sort_by(G, "vertexCount", "desc"), 2).ids

# binary graph operators
g0, g2 = db.graphs[0], db.graphs[2]
both = ops.combine(g0, g2)
print(sorted(both.vertices), sorted(both.edges))
print(sorted(ops.overlap(g0, g2).vertices))
print(sorted(ops.exclude(g0, g2).vertices))    # only v4 is left, and no edge

# aggregate writes a property computed from the graph
g = ops.aggregate(g2, "avgAge", lambda g: ops.average_of(g.vertices.values(), "age"))
g["avgAge"]

# summarize: one vertex per city, edges counted per label
summary = ops.summarize(db.database_graph(),
                        vertex_keys=("city",), edge_keys=(ops.TYPE,),
                        vertex_agg=ops.count_aggregator(), edge_agg=ops.count_aggregator())
for v in summary.vertices.values():
    print(v.properties)
for e in summary.edges.values():
    print(summary.vertices[e.source].get("city", "(no city)"), "->", summary.vertices[e.target].get("city", "(no city)"),
          e.properties)

# apply and reduce lift single-graph operators to collections
counted = ops.apply(G, lambda g: ops.aggregate(g, "edgeCount", ops.edge_count))
[g["edgeCount"] for g in counted]
merged = ops.reduce(G, ops.combine)
len(merged.vertices), len(merged.edges)
