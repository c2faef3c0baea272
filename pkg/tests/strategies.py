"""Hypothesis strategies for small random EPGM databases."""

from hypothesis import strategies as st

from epgm import EpgmDatabase

VERTEX_LABELS = ("Person", "Forum", "Tag")
EDGE_LABELS = ("knows", "hasMember", "hasTag")
CITIES = ("Leipzig", "Dresden", "Berlin")

scalars = st.one_of(
    st.integers(-2**63, 2**63 - 1),
    st.floats(allow_nan=False, width=64),
    st.booleans(),
    st.text(max_size=8),
)
property_maps = st.dictionaries(st.sampled_from(("name", "age", "city", "w", "flag")), scalars,
                                max_size=3)


@st.composite
def databases(draw, max_vertices=8, max_edges=14, max_graphs=3, loops=True, properties=True):
    """A database with random labels, properties, parallel edges and logical graphs."""
    db = EpgmDatabase()
    n = draw(st.integers(0, max_vertices))
    for _ in range(n):
        props = draw(property_maps) if properties else {}
        db.add_vertex(draw(st.sampled_from(VERTEX_LABELS)), props)
    if n:
        m = draw(st.integers(0, max_edges))
        for _ in range(m):
            s = draw(st.integers(0, n - 1))
            t = draw(st.integers(0, n - 1))
            if s == t and not loops:
                continue
            props = draw(property_maps) if properties else {}
            db.add_edge(s, t, draw(st.sampled_from(EDGE_LABELS)), props)
    for _ in range(draw(st.integers(0, max_graphs))):
        vids = draw(st.sets(st.integers(0, max(n - 1, 0)), max_size=n)) if n else set()
        eids = [e.id for e in db.edges.values() if e.source in vids and e.target in vids
                and draw(st.booleans())]
        db.create_logical_graph("G", {"size": len(vids)}, sorted(vids), eids)
    return db


@st.composite
def large_graphs(draw, max_vertices=10_000):
    """A person graph with up to ``max_vertices`` vertices, built from a drawn seed."""
    import random
    n = draw(st.integers(0, max_vertices))
    m = draw(st.integers(0, 2 * n))
    rng = random.Random(draw(st.integers(0, 2**32)))
    db = EpgmDatabase()
    for _ in range(n):
        props = {"city": CITIES[rng.randrange(3)]} if rng.random() < 0.9 else {}
        if rng.random() < 0.8:
            props["age"] = rng.randint(18, 70)
        db.add_vertex("Person" if rng.random() < 0.7 else "Tag", props)
    for _ in range(m if n else 0):
        props = {"since": rng.randint(2005, 2015)} if rng.random() < 0.5 else {}
        db.add_edge(rng.randrange(n), rng.randrange(n), EDGE_LABELS[rng.randrange(3)], props)
    return db
