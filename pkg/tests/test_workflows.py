import pytest

from epgm import EpgmDatabase
from epgm.generators import business_network
from epgm.grala import parse
from epgm.workflows import BUSINESS, SOCIAL, source, summarized_communities, top_revenue


def test_shipped_scripts_parse_strictly():
    assert len(parse(source(SOCIAL), strict=True).statements) == 6
    assert len(parse(source(BUSINESS), strict=True).statements) == 6


def test_literal_overlap_variant():
    assert "invBtgs.reduce(" in source(BUSINESS, literal_overlap=True)
    assert "topRevBtgs.reduce(" in source(BUSINESS)
    with pytest.raises(ValueError):
        source(SOCIAL, literal_overlap=True)
    with pytest.raises(ValueError):
        source("nope")


def test_summarized_communities_on_toy_graph():
    db = EpgmDatabase()
    for _ in range(8):
        db.add_vertex("Person")
    for block in (range(0, 4), range(4, 8)):
        for a in block:
            for b in block:
                if a < b:
                    db.add_edge(a, b, "knows")
    db.add_edge(3, 4, "knows")
    db.add_vertex("Tag")
    db.add_edge(0, 8, "hasInterest")
    summary = summarized_communities(db).bindings["summarizedCommunities"]
    assert sorted(v["count"] for v in summary.vertices.values()) == [4, 4]
    assert sorted(e["count"] for e in summary.edges.values()) == [1, 6, 6]


def test_top_revenue_small():
    db = business_network(1, 1)
    r = top_revenue(db)
    top = r.bindings["topRevBtgs"]
    revenue = [g["revenue"] for g in top]
    assert revenue == sorted(revenue, reverse=True)
    assert len(top) == min(100, len(r.bindings["invBtgs"]))
    assert r.bindings["topRevBtgOverlap"].closure_violations() == []
