"""Reading and writing databases: JSON fixtures, typed CSV, DOT."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

from .model import EpgmDatabase, EpgmError, GraphCollection, LogicalGraph, check_property_value


class DataImportError(EpgmError):
    def __init__(self, message: str, file: str | None = None, row: int | None = None):
        where = ""
        if file is not None:
            where = f"{file}"
            if row is not None:
                where += f", row {row}"
            where += ": "
        super().__init__(where + message)
        self.file = file
        self.row = row


# -- JSON -----------------------------------------------------------------

def db_from_dict(doc: dict) -> EpgmDatabase:
    db = EpgmDatabase()
    for key in ("vertices", "edges", "graphs"):
        if not isinstance(doc.get(key, []), list):
            raise DataImportError(f"'{key}' must be a list")
    try:
        for i, v in enumerate(doc.get("vertices", [])):
            db.add_vertex(v["label"], v.get("properties", {}), id=v.get("id"))
        for i, e in enumerate(doc.get("edges", [])):
            db.add_edge(e["source"], e["target"], e["label"], e.get("properties", {}),
                        id=e.get("id"), index=e.get("index"))
        for i, g in enumerate(doc.get("graphs", [])):
            db.create_logical_graph(g.get("label", ""), g.get("properties", {}),
                                    g.get("vertices", []), g.get("edges", []), id=g.get("id"))
    except KeyError as exc:
        raise DataImportError(f"element {i} lacks field {exc}") from None
    except EpgmError as exc:
        raise DataImportError(f"element {i}: {exc}") from None
    if "labels" in doc:
        db.metadata["labels"] = list(doc["labels"])
    if "metadata" in doc:
        db.metadata.update(doc["metadata"])
    return db


def load_json(path: str | Path) -> EpgmDatabase:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataImportError(f"invalid JSON: {exc}", str(path)) from None
    return db_from_dict(doc)


def load_fixture(name: str = "fig3") -> EpgmDatabase:
    """Load a fixture shipped with the package (``fig3``: the social network example)."""
    res = resources.files("epgm") / "data" / f"{name}.json"
    if not res.is_file():
        raise EpgmError(f"no fixture named {name!r}")
    return db_from_dict(json.loads(res.read_text(encoding="utf-8")))


def _vertex_doc(v) -> dict:
    return {"id": v.id, "label": v.label, "properties": dict(v.properties)}


def _edge_doc(e) -> dict:
    return {"id": e.id, "source": e.source, "target": e.target, "label": e.label,
            "index": e.index, "properties": dict(e.properties)}


def _graph_doc(g: LogicalGraph) -> dict:
    return {"id": g.id, "label": g.label, "properties": dict(g.properties),
            "vertices": list(g.vertices), "edges": list(g.edges)}


def db_to_dict(db: EpgmDatabase) -> dict:
    doc: dict[str, Any] = {}
    if "labels" in db.metadata:
        doc["labels"] = db.metadata["labels"]
    doc["vertices"] = [_vertex_doc(db.vertices[k]) for k in sorted(db.vertices)]
    doc["edges"] = [_edge_doc(db.edges[k]) for k in sorted(db.edges)]
    doc["graphs"] = [_graph_doc(db.graphs[k]) for k in sorted(db.graphs)]
    extra = {k: v for k, v in db.metadata.items() if k != "labels"}
    if extra:
        doc["metadata"] = extra
    return doc


def graphs_to_dict(graphs: LogicalGraph | Iterable[LogicalGraph]) -> dict:
    """A self-contained document holding the given graphs and every element they reference."""
    if isinstance(graphs, LogicalGraph):
        graphs = [graphs]
    graphs = list(graphs)
    vertices: dict[int, Any] = {}
    edges: dict[int, Any] = {}
    for g in graphs:
        vertices.update(g.vertices)
        edges.update(g.edges)
    return {
        "vertices": [_vertex_doc(vertices[k]) for k in sorted(vertices)],
        "edges": [_edge_doc(edges[k]) for k in sorted(edges)],
        "graphs": [_graph_doc(g) for g in graphs],
    }


def _json_default(value):
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(doc: dict) -> str:
    for v in _floats(doc):
        if not math.isfinite(v):
            raise EpgmError("non-finite float values cannot be written as JSON")
    return json.dumps(doc, indent=1, default=_json_default, ensure_ascii=False)


def _floats(obj):
    if isinstance(obj, float):
        yield obj
    elif isinstance(obj, dict):
        for v in obj.values():
            yield from _floats(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _floats(v)


def save_json(db: EpgmDatabase, path: str | Path) -> None:
    Path(path).write_text(dumps(db_to_dict(db)), encoding="utf-8")


# -- CSV ------------------------------------------------------------------

_CSV_TYPES = {"int": int, "long": int, "float": float, "double": float, "bool": None,
              "boolean": None, "string": str, "str": str}


@dataclass(frozen=True)
class ImportSpec:
    """Where the CSV files are and which columns carry structure.

    Every other column is a property; a header ``name:type`` declares its
    type (int, float, bool, string; string when omitted). Empty cells mean
    the property is absent. Graph member lists are space-separated ids.
    """

    vertices: str | Path
    edges: str | Path | None = None
    graphs: str | Path | None = None
    id_column: str = "id"
    label_column: str = "label"
    source_column: str = "source"
    target_column: str = "target"
    index_column: str = "index"
    members_columns: tuple[str, str] = ("vertices", "edges")


def _parse_cell(raw: str, typ: str, file: str, row: int, col: str):
    try:
        if typ in ("int", "long"):
            return check_property_value(int(raw))
        if typ in ("float", "double"):
            return float(raw)
        if typ in ("bool", "boolean"):
            low = raw.strip().lower()
            if low in ("true", "1"):
                return True
            if low in ("false", "0"):
                return False
            raise ValueError(raw)
        return raw
    except (ValueError, EpgmError):
        raise DataImportError(f"column {col!r}: cannot read {raw!r} as {typ}", file, row) from None


def _header(fieldnames: list[str], structural: set[str], file: str) -> list[tuple[str, str, str]]:
    props = []
    for name in fieldnames:
        if name in structural:
            continue
        key, _, typ = name.partition(":")
        typ = typ or "string"
        if typ not in _CSV_TYPES:
            raise DataImportError(f"column {name!r} has unknown type {typ!r}", file, 1)
        props.append((name, key, typ))
    return props


def _rows(path, required: list[str]):
    file = str(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        missing = [c for c in required if c not in fields]
        if missing and fields:
            raise DataImportError(f"missing column(s) {missing}", file, 1)
        rows = list(enumerate(reader, start=2))
    return file, fields, rows


def _int(raw: str | None, file: str, row: int, col: str, optional: bool = False) -> int | None:
    if raw is None or raw == "":
        if optional:
            return None
        raise DataImportError(f"column {col!r} is empty", file, row)
    try:
        return int(raw)
    except ValueError:
        raise DataImportError(f"column {col!r}: {raw!r} is not an integer id", file, row) from None


def load_csv(spec: ImportSpec) -> EpgmDatabase:
    db = EpgmDatabase()
    file, fields, rows = _rows(spec.vertices, [spec.label_column])
    props = _header(fields, {spec.id_column, spec.label_column}, file)
    for n, rec in rows:
        vid = _int(rec.get(spec.id_column), file, n, spec.id_column, optional=True)
        values = {key: _parse_cell(rec[name], typ, file, n, name)
                  for name, key, typ in props if rec.get(name, "") != ""}
        try:
            db.add_vertex(rec[spec.label_column], values, id=vid)
        except EpgmError as exc:
            raise DataImportError(str(exc), file, n) from None
    if spec.edges is not None:
        structural = {spec.id_column, spec.label_column, spec.source_column, spec.target_column,
                      spec.index_column}
        file, fields, rows = _rows(spec.edges, [spec.source_column, spec.target_column,
                                                spec.label_column])
        props = _header(fields, structural, file)
        for n, rec in rows:
            src = _int(rec.get(spec.source_column), file, n, spec.source_column)
            dst = _int(rec.get(spec.target_column), file, n, spec.target_column)
            for end in (src, dst):
                if end not in db.vertices:
                    raise DataImportError(f"edge references unknown vertex {end}", file, n)
            values = {key: _parse_cell(rec[name], typ, file, n, name)
                      for name, key, typ in props if rec.get(name, "") != ""}
            try:
                db.add_edge(src, dst, rec[spec.label_column], values,
                            id=_int(rec.get(spec.id_column), file, n, spec.id_column, True),
                            index=_int(rec.get(spec.index_column), file, n, spec.index_column, True))
            except EpgmError as exc:
                raise DataImportError(str(exc), file, n) from None
    if spec.graphs is not None:
        vcol, ecol = spec.members_columns
        file, fields, rows = _rows(spec.graphs, [spec.label_column])
        props = _header(fields, {spec.id_column, spec.label_column, vcol, ecol}, file)
        for n, rec in rows:
            try:
                vids = [int(x) for x in (rec.get(vcol) or "").split()]
                eids = [int(x) for x in (rec.get(ecol) or "").split()]
            except ValueError:
                raise DataImportError("member lists must be space-separated integers", file, n) from None
            values = {key: _parse_cell(rec[name], typ, file, n, name)
                      for name, key, typ in props if rec.get(name, "") != ""}
            try:
                db.create_logical_graph(rec[spec.label_column], values, vids, eids,
                                        id=_int(rec.get(spec.id_column), file, n, spec.id_column, True))
            except EpgmError as exc:
                raise DataImportError(str(exc), file, n) from None
    return db


def _type_name(value) -> str:
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, int):
        return "int"
    if isinstance(value, float):
        return "float"
    return "string"


def _prop_columns(elements) -> list[tuple[str, str]]:
    seen: dict[str, str] = {}
    for el in elements:
        for k, v in el.properties.items():
            t = _type_name(v)
            if seen.setdefault(k, t) != t:
                raise EpgmError(f"property {k!r} mixes {seen[k]} and {t} values; CSV needs one type")
    return sorted(seen.items())


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def save_csv(db: EpgmDatabase, directory: str | Path) -> ImportSpec:
    """Write vertices.csv, edges.csv and graphs.csv; returns the spec that reads them back."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    tables = [
        ("vertices.csv", ["id", "label"], [db.vertices[k] for k in sorted(db.vertices)],
         lambda v: [v.id, v.label]),
        ("edges.csv", ["id", "source", "target", "label", "index"],
         [db.edges[k] for k in sorted(db.edges)],
         lambda e: [e.id, e.source, e.target, e.label, e.index]),
        ("graphs.csv", ["id", "label", "vertices", "edges"],
         [db.graphs[k] for k in sorted(db.graphs)],
         lambda g: [g.id, g.label, " ".join(map(str, g.vertices)), " ".join(map(str, g.edges))]),
    ]
    for name, fixed, elements, head in tables:
        cols = _prop_columns(elements)
        with open(out / name, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(fixed + [f"{k}:{t}" for k, t in cols])
            for el in elements:
                w.writerow([_cell(x) for x in head(el)] +
                           [_cell(el.properties.get(k)) for k, _ in cols])
    return ImportSpec(out / "vertices.csv", out / "edges.csv", out / "graphs.csv")


# -- DOT ------------------------------------------------------------------

def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _dot_props(props: dict) -> str:
    return "{" + ",".join(f"{k}={_cell(v)}" for k, v in props.items()) + "}"


def to_dot(graphs: LogicalGraph | GraphCollection | Iterable[LogicalGraph], name: str = "epgm") -> str:
    """Vertices as ``label\\n{key=value,...}`` nodes; directed, labeled edges.

    A collection becomes one cluster per graph; shared elements are drawn once.
    """
    single = isinstance(graphs, LogicalGraph)
    graphs = [graphs] if single else list(graphs)
    lines = [f'digraph "{_dot_escape(name)}" {{']
    drawn_v: set[int] = set()
    drawn_e: set[int] = set()
    for i, g in enumerate(graphs):
        indent = "  "
        if not single:
            lines.append(f'  subgraph "cluster_{i}" {{')
            title = f"{g.label} {g.id}" if g.label else f"graph {g.id}"
            lines.append(f'    label="{_dot_escape(title + " " + _dot_props(g.properties))}";')
            indent = "    "
        for vid, v in g.vertices.items():
            if vid in drawn_v:
                continue
            drawn_v.add(vid)
            text = _dot_escape(v.label) + "\\n" + _dot_escape(_dot_props(v.properties))
            lines.append(f'{indent}v{vid} [label="{text}"];')
        if not single:
            lines.append("  }")
    for g in graphs:
        for eid, e in g.edges.items():
            if eid in drawn_e:
                continue
            drawn_e.add(eid)
            text = _dot_escape(e.label)
            if e.properties:
                text += "\\n" + _dot_escape(_dot_props(e.properties))
            lines.append(f'  v{e.source} -> v{e.target} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
