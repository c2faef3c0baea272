"""
Pattern matching
================

Patterns are written as ASCII chains; matches are injective on vertices and
edges and come back as a collection of logical graphs.
"""

import epgm
from epgm.pattern import PatternSyntaxError, match_pattern, parse_pattern

db = epgm.load_fixture()
g = db.database_graph()

p = parse_pattern("(a)-c->(b)")
p

# every edge of the database matches the bare pattern
len(match_pattern(g, p)) == len(g.edges)

# moderated forums: who moderates what
p = parse_pattern("(f)-m->(p)")
# the predicate sees the candidate subgraph and the variable bindings
moderated = match_pattern(
    g, p, lambda sub, emb: sub.vertices[emb.vertices["f"]].label == "Forum"
    and sub.edges[emb.edges["m"]].label == "hasModerator")
for m in moderated:
    print(sorted(m.vertices), sorted(m.edges))

# longer chains, with a reversed edge in the middle
p = parse_pattern("(a)-x->(b)<-y-(c)")
hits = match_pattern(g, p, lambda sub, emb: all(sub.edges[emb.edges[x]].label == "knows"
                                                for x in "xy"))
print(len(hits), "pairs of persons with a common acquaintance")

# a bad pattern points at the offending token
try:
    parse_pattern("(a)-x->(b)-x->(c)")
except PatternSyntaxError as exc:
    print(exc)
