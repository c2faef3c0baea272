"""The two end-to-end analysis workflows shipped as GrALa scripts.

``summarized_communities`` extracts the Person/knows subgraph of a social
network, runs label propagation on it and summarizes one vertex per
community. ``top_revenue`` extracts business transaction graphs, keeps the
invoiced ones, ranks them by revenue and overlaps the top 100.
"""

from __future__ import annotations

from importlib import resources

from ..grala import RunResult, run
from ..grala.interpreter import DatabaseRef
from ..model import EpgmDatabase

SOCIAL = "summarized_communities"
BUSINESS = "top_revenue"

# the published listing folds over every invoiced graph, not just the top 100
_LITERAL_OVERLAP = ("topRevBtgOverlap = topRevBtgs.reduce(", "topRevBtgOverlap = invBtgs.reduce(")


def source(name: str, literal_overlap: bool = False) -> str:
    """Text of a shipped workflow script."""
    try:
        text = resources.files(__package__).joinpath(f"{name}.grala").read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"no workflow named {name!r}") from None
    if literal_overlap:
        if name != BUSINESS:
            raise ValueError("literal_overlap only applies to the top_revenue workflow")
        text = text.replace(*_LITERAL_OVERLAP)
    return text


def summarized_communities(db: EpgmDatabase, **kwargs) -> RunResult:
    return run(source(SOCIAL), db, {"sng": DatabaseRef(db)}, **kwargs)


def top_revenue(db: EpgmDatabase, literal_overlap: bool = False, **kwargs) -> RunResult:
    return run(source(BUSINESS, literal_overlap), db, {"iig": DatabaseRef(db)}, **kwargs)
