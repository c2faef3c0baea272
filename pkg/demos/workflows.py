"""
The two shipped workflows on generated data
===========================================
"""

import time

from epgm.generators import business_network, planted_communities, social_network
from epgm.workflows import source, summarized_communities, top_revenue

print(source("summarized_communities"))

social = social_network(scale=1, seed=7)
t = time.perf_counter()
r = summarized_communities(social)
print(f"{time.perf_counter() - t:.2f} s")

summary = r.bindings["summarizedCommunities"]
sizes = sorted((v["count"] for v in summary.vertices.values()), reverse=True)
print(len(sizes), "communities, sizes", sizes[:5], "...")

# how close are the found communities to the planted ones?
planted = planted_communities(social)
found = {vid: v["community"] for vid, v in r.bindings["knowsGraph"].vertices.items()}
pure = sum(len({planted[v] for v in found if found[v] == c}) == 1 for c in set(found.values()))
print(pure, "of", len(set(found.values())), "found communities sit inside one planted community")

# heaviest links between communities
edges = sorted(summary.edges.values(), key=lambda e: -e["count"])
print([(e.source, e.target, e["count"]) for e in edges if e.source != e.target][:5])

business = business_network(scale=1, seed=7)
r = top_revenue(business)
top = r.bindings["topRevBtgs"]
print(len(r.bindings["btgs"]), "cases,", len(r.bindings["invBtgs"]), "invoiced, kept", len(top))
print([round(g["revenue"], 2) for g in top][:5])

overlap = r.bindings["topRevBtgOverlap"]
# what every top case has in common
print([(v.label, v.properties) for v in overlap.vertices.values()])
