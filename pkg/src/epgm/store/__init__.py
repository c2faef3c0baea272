"""Versioned, partitioned wide-column storage for EPGM databases."""

from .codec import CodecError, EdgeQualifier
from .graphstore import (ConfigMismatchError, DanglingReferenceError, LabelDictionary, Store,
                         StoreConfig, StoreError, StoredVertex, decode_graph_row, decode_vertex_row,
                         encode_graph_row, encode_vertex_row, open_store)
from .kv import CorruptJournalError
from .partition import Partitioner, assign_partition, equal_width_boundaries

__all__ = [
    "CodecError", "ConfigMismatchError", "CorruptJournalError", "DanglingReferenceError",
    "EdgeQualifier", "LabelDictionary", "Partitioner", "Store", "StoreConfig", "StoreError",
    "StoredVertex", "assign_partition", "decode_graph_row", "decode_vertex_row",
    "encode_graph_row", "encode_vertex_row", "equal_width_boundaries", "open_store",
]
