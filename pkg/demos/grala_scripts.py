"""
Running GrALa scripts
=====================
"""

import epgm
from epgm.grala import format_script, parse, run

db = epgm.load_fixture()

script = '''
communities = db.G.select(Graph g => g[:type] == "Community")
counted = communities.apply(Graph g => g.aggregate("members", (Graph h => h.V.count())))
biggest = counted.sortBy("members", :desc).top(1)
'''
r = run(script, db)
r.bindings["counted"].ids
[g["members"] for g in r.bindings["counted"]]
r.bindings["biggest"].ids

# one timing line per statement
for t in r.timings:
    print(t)

# the pretty-printer gives source that parses back to the same tree
print(format_script(parse(script)))

# a stray closing paren is skipped with a warning unless strict
r = run('x = db.G.top(2))', db)
r.warnings
try:
    run('x = db.G.top(2))', db, strict=True)
except epgm.grala.GralaSyntaxError as exc:
    print(exc)

# runtime errors carry the source position
try:
    run('x = db.G[9]', db)
except epgm.grala.GralaRuntimeError as exc:
    print(exc)
