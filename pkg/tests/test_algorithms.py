import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from epgm import EpgmDatabase, LogicalGraph, Vertex, operators as ops
from epgm.algorithms import (AlgorithmError, AlgorithmRegistry, btg_extract, community_split,
                             default_registry, label_propagation, lookup, propagate_labels,
                             register_algorithm)

from strategies import databases


def clique_db(*sizes, bridges=()):
    db = EpgmDatabase()
    start = 0
    for n in sizes:
        ids = [db.add_vertex("Person") for _ in range(n)]
        for a, b in itertools.combinations(ids, 2):
            db.add_edge(a, b, "knows")
        start += n
    for a, b in bridges:
        db.add_edge(a, b, "knows")
    return db


def test_two_cliques_with_bridge():
    db = clique_db(4, 4, bridges=[(3, 4)])
    labels = propagate_labels(db.database_graph())
    assert len(set(labels.values())) == 2
    assert len({labels[v] for v in range(4)}) == 1
    assert len({labels[v] for v in range(4, 8)}) == 1


def test_edgeless_graph_keeps_own_labels():
    db = EpgmDatabase()
    for _ in range(5):
        db.add_vertex("P")
    assert propagate_labels(db.database_graph()) == {i: i for i in range(5)}


def test_single_clique_takes_minimum_id():
    db = clique_db(5)
    assert set(propagate_labels(db.database_graph()).values()) == {0}


def test_label_propagation_writes_property():
    db = clique_db(3)
    out = label_propagation(db.database_graph(), "comm")
    assert {v["comm"] for v in out.vertices.values()} == {0}
    assert "comm" not in db.vertices[0].properties


def test_label_propagation_rejects_empty_key():
    with pytest.raises(AlgorithmError):
        label_propagation(clique_db(2).database_graph(), "")


@settings(max_examples=100, deadline=None)
@given(databases(max_vertices=10, max_edges=20, max_graphs=0, properties=False), st.randoms())
def test_label_propagation_ignores_edge_order(db, rnd):
    g = db.database_graph()
    edges = list(g.edges.values())
    rnd.shuffle(edges)
    shuffled = LogicalGraph(None, "", {}, g.vertices, {e.id: e for e in edges})
    a, b = propagate_labels(g), propagate_labels(shuffled)
    assert a == b
    assert set(a.values()) <= set(g.vertices)


def test_community_split_partitions_vertices():
    db = clique_db(4, 4, bridges=[(3, 4)])
    labeled = label_propagation(db.database_graph())
    parts = community_split(labeled)
    assert len(parts) == 2
    assert sorted(v for g in parts for v in g.vertices) == list(range(8))
    bridge = [e.id for e in db.edges.values() if (e.source, e.target) == (3, 4)][0]
    assert all(bridge not in g.edges for g in parts)
    assert sum(len(g.edges) for g in parts) == len(db.edges) - 1
    assert {g["community"] for g in parts} == {v["community"] for v in labeled.vertices.values()}


def test_community_split_uniform_labels():
    db = clique_db(3)
    g = db.database_graph()
    for v in g.vertices.values():
        v["community"] = 1
    (only,) = community_split(g)
    assert only.vertex_ids == g.vertex_ids and only.edge_ids == g.edge_ids


def test_community_split_needs_the_key():
    with pytest.raises(AlgorithmError, match="has no"):
        community_split(clique_db(2).database_graph())


@settings(max_examples=100, deadline=None)
@given(databases(max_vertices=10, max_edges=20, max_graphs=0, properties=False))
def test_community_split_invariants(db):
    labeled = label_propagation(db.database_graph())
    parts = community_split(labeled)
    seen = [v for g in parts for v in g.vertices]
    assert sorted(seen) == sorted(labeled.vertices)
    colabeled = [e for e in labeled.edges.values()
                 if labeled.vertices[e.source]["community"] == labeled.vertices[e.target]["community"]]
    assert sum(len(g.edges) for g in parts) == len(colabeled)
    for g in parts:
        assert g.closure_violations() == []


# -- business transaction graphs ---------------------------------------------------

def business_db():
    db = EpgmDatabase()
    customer = db.add_vertex("Customer")
    for _ in range(2):
        quote = db.add_vertex("SalesQuotation")
        order = db.add_vertex("SalesOrder")
        db.add_edge(order, quote, "basedOn")
        db.add_edge(quote, customer, "sentTo")
    return db


def test_chains_sharing_a_master():
    out = btg_extract(business_db().database_graph())
    assert [sorted(g.vertices) for g in out] == [[0, 1, 2], [0, 3, 4]]
    assert all(g.closure_violations() == [] for g in out)


def test_all_master_graph():
    db = EpgmDatabase()
    db.add_vertex("Customer")
    db.add_vertex("Vendor")
    assert len(btg_extract(db.database_graph())) == 0


def test_transaction_with_two_masters():
    db = EpgmDatabase()
    inv = db.add_vertex("SalesInvoice", {"revenue": 5.0})
    db.add_edge(inv, db.add_vertex("Customer"), "billedTo")
    db.add_edge(inv, db.add_vertex("Employee"), "approvedBy")
    (btg,) = btg_extract(db.database_graph())
    assert len(btg) == 3 and len(btg.edges) == 2


def test_unclassified_labels_rejected():
    db = EpgmDatabase()
    db.add_vertex("Spaceship")
    with pytest.raises(AlgorithmError, match="unclassified"):
        btg_extract(db.database_graph())
    with pytest.raises(AlgorithmError, match="both ways"):
        btg_extract(db.database_graph(), ["A"], ["A"])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_every_transaction_in_exactly_one_btg(seed):
    rng = random.Random(seed)
    db = EpgmDatabase()
    tx_labels = ["SalesQuotation", "SalesOrder", "SalesInvoice", "PurchOrder", "DeliveryNote"]
    master_labels = ["Customer", "Vendor", "Employee", "Product"]
    for _ in range(rng.randint(0, 25)):
        db.add_vertex(rng.choice(tx_labels + master_labels))
    n = len(db.vertices)
    for _ in range(rng.randint(0, 2 * n) if n else 0):
        db.add_edge(rng.randrange(n), rng.randrange(n), "rel")
    out = btg_extract(db.database_graph())
    tx = {v.id for v in db.vertices.values() if v.label in tx_labels}
    counts = {}
    for g in out:
        for v in g.vertices.values():
            if v.id in tx:
                counts[v.id] = counts.get(v.id, 0) + 1
    assert counts == {v: 1 for v in tx}
    assert all(g.closure_violations() == [] for g in out)


# -- registry -----------------------------------------------------------------------

def test_builtins_registered():
    assert {"LabelPropagation", "CommunityDetection", "BusinessTransactionGraphs"} <= \
        set(default_registry.symbols())
    assert lookup(":LabelPropagation").arity == "graph"


def test_register_and_lookup():
    reg = AlgorithmRegistry()
    register_algorithm(":Identity", lambda inp, params: inp, "graph", registry=reg)
    g = clique_db(2).database_graph()
    assert ops.call_for_graph(g, ":Identity", registry=reg) is g
    with pytest.raises(AlgorithmError):
        reg.register(":Identity", lambda inp, params: inp, "graph")
    with pytest.raises(AlgorithmError):
        reg.lookup(":Missing")


def test_parameters_are_validated():
    g = clique_db(3).database_graph()
    with pytest.raises(AlgorithmError):
        ops.call_for_graph(g, ":LabelPropagation", {"maxIterations": "-2"})
    out = ops.call_for_graph(g, ":LabelPropagation", {"propertyKey": "c", "maxIterations": "1"})
    assert all("c" in v.properties for v in out.vertices.values())
