"""Vertex-to-partition assignment over a continuous id space."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from ..model import EpgmError

ID_SPACE = 2**64
MAX_PARTITIONS = 2**16


@dataclass(frozen=True)
class Partitioner:
    """Hash (``id mod n``) or range (interval lookup) partitioning.

    For range partitioning ``boundaries`` holds the first vertex id of every
    partition, starting at 0. Ids past the last boundary fall into the last
    partition, so the mapping is total.
    """

    strategy: str = "range"
    partition_count: int = 1
    boundaries: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.strategy not in ("range", "hash"):
            raise EpgmError(f"unknown partitioner {self.strategy!r}")
        if not 1 <= self.partition_count <= MAX_PARTITIONS:
            raise EpgmError(f"partition count must be in [1, {MAX_PARTITIONS}]")
        if self.strategy == "range":
            if not self.boundaries:
                object.__setattr__(self, "boundaries",
                                   equal_width_boundaries(self.partition_count))
            b = tuple(self.boundaries)
            if len(b) != self.partition_count:
                raise EpgmError(f"{self.partition_count} partitions need {self.partition_count} "
                                f"boundaries, got {len(b)}")
            if b[0] != 0 or any(x >= y for x, y in zip(b, b[1:])):
                raise EpgmError("range boundaries must start at 0 and increase strictly")
            object.__setattr__(self, "boundaries", b)
        elif self.boundaries:
            raise EpgmError("hash partitioning takes no boundaries")

    def assign(self, vertex_id: int) -> int:
        if vertex_id < 0:
            raise EpgmError(f"vertex id must be non-negative, got {vertex_id}")
        if self.strategy == "hash":
            return vertex_id % self.partition_count
        return bisect_right(self.boundaries, vertex_id) - 1

    def to_dict(self) -> dict:
        return {"strategy": self.strategy, "partition_count": self.partition_count,
                "boundaries": list(self.boundaries)}

    @classmethod
    def from_dict(cls, d: dict) -> Partitioner:
        return cls(d["strategy"], d["partition_count"], tuple(d.get("boundaries", ())))


def equal_width_boundaries(partition_count: int, id_space: int = ID_SPACE) -> tuple[int, ...]:
    if id_space < partition_count:
        raise EpgmError(f"id space {id_space} is smaller than {partition_count} partitions")
    return tuple(i * id_space // partition_count for i in range(partition_count))


def assign_partition(partitioner: Partitioner, vertex_id: int) -> int:
    return partitioner.assign(vertex_id)
