"""Command-line entry point: ``epgm import|generate|run|export|stats``.

Exit status is 0 on success, 1 on a runtime or data error and 2 on a usage
or script syntax error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import generators, io
from .grala import GralaError, GralaSyntaxError, parse, run
from .grala.interpreter import DatabaseRef, StatementTiming
from .model import EpgmDatabase, EpgmError, GraphCollection, LogicalGraph
from .store import StoreConfig, open_store
from .store.partition import equal_width_boundaries
from .workflows import BUSINESS, SOCIAL, source as workflow_source

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _store_path(args) -> Path:
    path = args.store or os.environ.get("EPGM_STORE")
    if not path:
        raise UsageError("no store given; pass --store PATH or set EPGM_STORE")
    return Path(path)


def _existing_store(args):
    path = _store_path(args)
    if not (path / "meta").is_file():
        raise EpgmError(f"no store at {path}")
    return open_store(StoreConfig(path))


def _new_store_config(args, db: EpgmDatabase) -> StoreConfig:
    path = _store_path(args)
    if (path / "meta").is_file():
        # reopening: only explicit flags are checked against the stored settings
        return StoreConfig(path, args.partitions, args.partitioner)
    count = args.partitions or 1
    strategy = args.partitioner or "range"
    bounds = None
    if strategy == "range" and count > 1:
        # equal-width ranges over the ids actually present, not the whole 64-bit space
        top = max(db.vertices, default=-1) + 1
        bounds = equal_width_boundaries(count, max(top, count))
    return StoreConfig(path, count, strategy, bounds)


def _say(text: str = "") -> None:
    print(text, file=sys.stderr)


# -- import ---------------------------------------------------------------------

def _read_input(args) -> EpgmDatabase:
    if args.fixture:
        return io.load_fixture(args.fixture)
    if not args.source:
        raise UsageError("import needs a source file or directory, or --fixture NAME")
    src = Path(args.source)
    fmt = args.format or ("json" if src.suffix == ".json" else "csv")
    if fmt == "json":
        return io.load_json(src)
    if fmt != "csv":
        raise UsageError(f"cannot import format {fmt!r}")
    if src.is_dir():
        vertices = src / "vertices.csv"
        edges = args.edges or (src / "edges.csv" if (src / "edges.csv").exists() else None)
        graphs = args.graphs or (src / "graphs.csv" if (src / "graphs.csv").exists() else None)
    else:
        vertices, edges, graphs = src, args.edges, args.graphs
    db = io.load_csv(io.ImportSpec(vertices, edges, graphs))
    meta = Path(vertices).parent / "metadata.json"
    if meta.is_file():
        db.metadata.update(json.loads(meta.read_text(encoding="utf-8")))
    return db


def cmd_import(args) -> int:
    t0 = time.perf_counter()
    db = _read_input(args)
    with open_store(_new_store_config(args, db)) as store:
        counts = store.import_database(db, db.metadata.get("labels", ()))
        store.sync()
    elapsed = time.perf_counter() - t0
    print(f"imported {counts['vertices']} vertices, {counts['edges']} edges, "
          f"{counts['graphs']} graphs in {elapsed:.3f} s")
    return EXIT_OK


# -- generate -------------------------------------------------------------------

def cmd_generate(args) -> int:
    t0 = time.perf_counter()
    db = generators.generate(args.kind, args.scale, args.seed)
    fmt = args.format or "json"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if fmt == "json":
            io.save_json(db, out / f"{args.kind}.json")
        elif fmt == "csv":
            io.save_csv(db, out)
            (out / "metadata.json").write_text(io.dumps(db.metadata), encoding="utf-8")
        else:
            raise UsageError("generate writes json or csv")
    elif not args.store:
        if fmt != "json":
            raise UsageError("without --out only JSON can go to stdout")
        print(io.dumps(io.db_to_dict(db)))
    if args.store:
        with open_store(_new_store_config(args, db)) as store:
            store.import_database(db, db.metadata.get("labels", ()))
            store.sync()
    _say(f"generated {args.kind} scale {args.scale} seed {args.seed}: {len(db.vertices)} vertices, "
         f"{len(db.edges)} edges in {time.perf_counter() - t0:.3f} s")
    return EXIT_OK


# -- run ------------------------------------------------------------------------

def _script_text(args) -> str:
    if args.script and args.workflow:
        raise UsageError("give either --script or --workflow, not both")
    if args.workflow:
        name = {"social": SOCIAL, "business": BUSINESS}.get(args.workflow, args.workflow)
        return workflow_source(name, literal_overlap=args.literal_overlap)
    if not args.script:
        raise UsageError("run needs --script FILE or --workflow NAME")
    if args.literal_overlap:
        raise UsageError("--literal-overlap only applies to --workflow business")
    return Path(args.script).read_text(encoding="utf-8")


def _bindings(args, db: EpgmDatabase) -> dict:
    ref = DatabaseRef(db)
    out = {"sng": ref, "iig": ref}
    for item in args.bind or ():
        name, sep, target = item.partition("=")
        if not sep or not name.isidentifier():
            raise UsageError(f"--bind expects NAME=GRAPH_ID or NAME=db, got {item!r}")
        if target == "db":
            out[name] = ref
            continue
        try:
            gid = int(target)
        except ValueError:
            raise UsageError(f"--bind {name}: {target!r} is not a graph id") from None
        if gid not in db.graphs:
            raise EpgmError(f"--bind {name}: no graph {gid} in the store")
        out[name] = db.graphs[gid]
    return out


def _print_timing(t: StatementTiming) -> None:
    line = f"line {t.line}" if t.line is not None else "-"
    text = t.text if len(t.text) <= 60 else t.text[:57] + "..."
    _say(f"[{t.index:>3}] {line:<9} {t.seconds:12.6f} s  {text}")


def _emit_targets(args, result) -> list[str]:
    if args.emit:
        return list(args.emit)
    # default: the variable assigned last
    names = [n for n in result.bindings if isinstance(result.bindings[n], (LogicalGraph, GraphCollection))]
    return names[-1:]


def _render(value, fmt: str, name: str) -> str:
    if fmt == "dot":
        return io.to_dot(value, name)
    return io.dumps(io.graphs_to_dict(value))


def cmd_run(args) -> int:
    text = _script_text(args)
    script = parse(text, strict=args.strict)
    for w in script.warnings:
        _say(f"warning: {w}")
    store = _existing_store(args)
    with store:
        t0 = time.perf_counter()
        db = store.load_database()
        _say(f"loaded {len(db.vertices)} vertices, {len(db.edges)} edges, {len(db.graphs)} graphs "
             f"in {time.perf_counter() - t0:.6f} s")
        t0 = time.perf_counter()
        result = run(script, db, _bindings(args, db), on_statement=_print_timing)
        _say(f"total {time.perf_counter() - t0:.6f} s")
        for name in args.persist or ():
            value = result.bindings.get(name)
            if not isinstance(value, LogicalGraph):
                raise EpgmError(f"--persist {name}: not a graph binding")
            _say(f"persisted {name} as graph {store.persist_graph(value)}")
    fmt = args.format or "json"
    if fmt not in ("json", "dot"):
        raise UsageError("run emits json or dot")
    targets = _emit_targets(args, result)
    for name in targets:
        if name not in result.bindings:
            raise EpgmError(f"--emit {name}: the script binds no such variable")
        value = result.bindings[name]
        if not isinstance(value, (LogicalGraph, GraphCollection)):
            raise EpgmError(f"--emit {name}: value is not a graph or collection")
        rendered = _render(value, fmt, name)
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{name}.{fmt}").write_text(rendered, encoding="utf-8")
            _say(f"wrote {out / f'{name}.{fmt}'}")
        else:
            print(rendered, end="" if rendered.endswith("\n") else "\n")
    return EXIT_OK


# -- export ---------------------------------------------------------------------

def cmd_export(args) -> int:
    fmt = args.format or "json"
    with _existing_store(args) as store:
        db = store.load_database()
    if args.graph:
        missing = [g for g in args.graph if g not in db.graphs]
        if missing:
            raise EpgmError(f"unknown graph id {missing[0]}")
        graphs = [db.graphs[g] for g in args.graph]
        value = graphs[0] if len(graphs) == 1 else GraphCollection(graphs)
        if fmt == "csv":
            raise UsageError("csv export covers the whole database; drop --graph")
        rendered = _render(value, fmt, "graph" if len(graphs) == 1 else "collection")
    elif fmt == "csv":
        if not args.out:
            raise UsageError("csv export needs --out DIR")
        io.save_csv(db, args.out)
        (Path(args.out) / "metadata.json").write_text(io.dumps(db.metadata), encoding="utf-8")
        _say(f"wrote {args.out}")
        return EXIT_OK
    elif fmt == "dot":
        rendered = io.to_dot(db.database_graph(), "database")
    else:
        rendered = io.dumps(io.db_to_dict(db))
    if args.out:
        out = Path(args.out)
        if out.is_dir() or not out.suffix:
            out.mkdir(parents=True, exist_ok=True)
            out = out / f"export.{fmt}"
        out.write_text(rendered, encoding="utf-8")
        _say(f"wrote {out}")
    else:
        print(rendered, end="" if rendered.endswith("\n") else "\n")
    return EXIT_OK


# -- stats ----------------------------------------------------------------------

def cmd_stats(args) -> int:
    with _existing_store(args) as store:
        report = store.stats()
        partitioner = store.partitioner
    if args.format == "json":
        report = dict(report, partitioner=partitioner.strategy,
                      partitions={str(k): v for k, v in report["partitions"].items()})
        print(json.dumps(report, indent=1))
        return EXIT_OK
    print(f"vertices  {report['vertices']}")
    print(f"edges     {report['edges']}")
    print(f"graphs    {report['graphs']}")
    print(f"partitions ({partitioner.strategy}, {partitioner.partition_count})")
    for p, n in report["partitions"].items():
        print(f"  {p:>5}  {n}")
    for title, key in (("vertex labels", "vertex_labels"), ("edge labels", "edge_labels")):
        print(title)
        for label, n in report[key].items():
            print(f"  {label:<16} {n}")
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--store", help="store directory (default: $EPGM_STORE)")

    layout = argparse.ArgumentParser(add_help=False)
    layout.add_argument("--partitions", type=int, help="partition count for a new store")
    layout.add_argument("--partitioner", choices=("range", "hash"), help="partitioning strategy")

    parser = argparse.ArgumentParser(prog="epgm", description="EPGM graph store and GrALa workflows")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", parents=[common, layout], help="bulk-load JSON or CSV into a store")
    p.add_argument("source", nargs="?", help="JSON file, CSV vertices file, or directory of CSV files")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--edges", help="CSV edges file")
    p.add_argument("--graphs", help="CSV graphs file")
    p.add_argument("--fixture", help="import a bundled fixture instead (e.g. fig3)")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("generate", parents=[common, layout], help="generate a seeded synthetic dataset")
    p.add_argument("kind", choices=("social", "business"))
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", parents=[common], help="run a GrALa script against a store")
    p.add_argument("--script", help="GrALa script file")
    p.add_argument("--workflow", help="a shipped workflow: social or business")
    p.add_argument("--literal-overlap", action="store_true",
                   help="business workflow: overlap every invoiced graph as the published listing does")
    p.add_argument("--bind", action="append", metavar="NAME=ID", help="bind a stored graph (or db)")
    p.add_argument("--emit", action="append", metavar="NAME", help="binding to output (default: last)")
    p.add_argument("--persist", action="append", metavar="NAME", help="write a graph binding to the store")
    p.add_argument("--format", choices=("json", "dot"))
    p.add_argument("--out", help="output directory")
    p.add_argument("--strict", action="store_true", help="reject unbalanced parentheses")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("export", parents=[common], help="write stored graphs as JSON, CSV or DOT")
    p.add_argument("--graph", type=int, action="append", help="graph id (repeat for a collection)")
    p.add_argument("--format", choices=("json", "csv", "dot"))
    p.add_argument("--out", help="output file or directory")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("stats", parents=[common], help="counts, partitions and label histograms")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GralaSyntaxError) as exc:
        print(f"epgm {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EpgmError, GralaError, OSError, ValueError) as exc:
        print(f"epgm {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
