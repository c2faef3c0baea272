"""Extended property graph model: shared vertex/edge spaces with overlapping logical graphs.

The library surface is organised like this:

``epgm.model``       in-memory database, vertices, edges, logical graphs, collections
``epgm.operators``   the operator algebra (select, combine, summarize, reduce, ...)
``epgm.pattern``     ASCII pattern graphs and subgraph matching
``epgm.algorithms``  plug-in registry, label propagation, business transaction graphs
``epgm.grala``       the GrALa workflow language
``epgm.store``       persistent, versioned, partitioned wide-column store
``epgm.io``          JSON, CSV and DOT
``epgm.generators``  seeded synthetic social and business datasets
"""

from . import algorithms, generators, grala, io, model, operators, pattern, store
from .model import (ABSENT, ClosureError, Edge, EpgmDatabase, EpgmError, GraphCollection,
                    LogicalGraph, UnknownVertexError, Vertex, create_database)
from .io import load_fixture
from .pattern import match_pattern, parse_pattern

__all__ = [
    "ABSENT", "ClosureError", "Edge", "EpgmDatabase", "EpgmError", "GraphCollection",
    "LogicalGraph", "UnknownVertexError", "Vertex", "algorithms", "create_database", "generators",
    "grala", "io", "load_fixture", "match_pattern", "model", "operators", "parse_pattern",
    "pattern", "store",
]
