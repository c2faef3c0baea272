import json

import pytest

from epgm import EpgmDatabase, io
from epgm.io import DataImportError, ImportSpec


def same(a, b):
    assert io.db_to_dict(a) == io.db_to_dict(b)


def test_json_round_trip(tmp_path, fig3):
    path = tmp_path / "fig3.json"
    io.save_json(fig3, path)
    same(fig3, io.load_json(path))


def test_csv_round_trip(tmp_path, fig3):
    spec = io.save_csv(fig3, tmp_path)
    back = io.load_csv(spec)
    back.metadata["labels"] = fig3.metadata["labels"]
    same(fig3, back)


def test_csv_typed_columns(tmp_path):
    (tmp_path / "v.csv").write_text("id,label,name,age:int,score:float,ok:bool\n"
                                    "0,Person,Ann,31,1.5,true\n1,Person,Ben,,,false\n")
    (tmp_path / "e.csv").write_text("source,target,label,since:int\n0,1,knows,2014\n")
    (tmp_path / "g.csv").write_text("id,label,vertices,edges,topic\n0,Pair,0 1,0,x\n")
    db = io.load_csv(ImportSpec(tmp_path / "v.csv", tmp_path / "e.csv", tmp_path / "g.csv"))
    assert db.vertices[0].properties == {"name": "Ann", "age": 31, "score": 1.5, "ok": True}
    assert db.vertices[1].properties == {"name": "Ben", "ok": False}
    assert db.edges[0]["since"] == 2014
    assert db.graphs[0].vertex_ids == {0, 1} and db.graphs[0]["topic"] == "x"


@pytest.mark.parametrize("vertices, message", [
    ("id,label,age:int\n0,P,old\n", "row 2"),
    ("id,label,x:date\n0,P,1\n", "unknown type"),
    ("id,name\n0,P\n", "missing column"),
])
def test_csv_errors_name_file_and_row(tmp_path, vertices, message):
    (tmp_path / "v.csv").write_text(vertices)
    with pytest.raises(DataImportError, match=message):
        io.load_csv(ImportSpec(tmp_path / "v.csv"))


def test_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(DataImportError, match="invalid JSON"):
        io.load_json(bad)
    with pytest.raises(DataImportError, match="lacks field"):
        io.db_from_dict({"vertices": [{"id": 0}]})
    with pytest.raises(DataImportError):
        io.db_from_dict({"vertices": [{"label": "A"}], "edges": [{"source": 0, "target": 5,
                                                                  "label": "x"}]})


def test_non_finite_floats_refused(fig3):
    fig3.vertices[0]["score"] = float("inf")
    with pytest.raises(Exception, match="non-finite"):
        io.dumps(io.db_to_dict(fig3))


def test_graphs_to_dict_is_self_contained(fig3):
    doc = io.graphs_to_dict(fig3.graphs[1])
    back = io.db_from_dict(json.loads(io.dumps(doc)))
    assert sorted(back.vertices) == [2, 3, 5]
    assert back.graphs[1].edge_ids == {4, 5, 7, 8}


def test_dot_output(fig3):
    dot = io.to_dot(fig3.graphs[0], "g0")
    assert dot.startswith("digraph")
    assert "knows" in dot and "Alice" in dot
    assert dot.count("->") == 4


def test_empty_database_round_trip(tmp_path):
    io.save_json(EpgmDatabase(), tmp_path / "e.json")
    assert len(io.load_json(tmp_path / "e.json").vertices) == 0
