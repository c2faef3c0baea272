"""Byte layout of the vertex and graph tables.

All integers are fixed-width big-endian so that byte order equals numeric
order. Vertex row keys are ``partition:u16 | vertex:u64``; graph row keys are
a bare ``graph:u64``. Edge qualifiers are ``label:u16 | opposite row key |
index:u32`` (16 bytes) and appear identically in the source's out-edges and
the target's in-edges, with the opposite vertex swapped.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable

from ..model import EpgmError, PropertyValue

# column families
META, PROPERTIES, OUT_EDGES, IN_EDGES, EDGE_IDS = 0, 1, 2, 3, 4
GRAPH_META, GRAPH_PROPERTIES, GRAPH_EDGES = 8, 9, 10

VERTEX_FAMILIES = (META, PROPERTIES, OUT_EDGES, IN_EDGES, EDGE_IDS)
GRAPH_FAMILIES = (GRAPH_META, GRAPH_PROPERTIES, GRAPH_EDGES)
FAMILY_NAMES = {
    META: "meta", PROPERTIES: "properties", OUT_EDGES: "out-edges", IN_EDGES: "in-edges",
    EDGE_IDS: "edge-ids", GRAPH_META: "meta", GRAPH_PROPERTIES: "properties",
    GRAPH_EDGES: "edges",
}

VERTEX_KEY_LEN = 10
GRAPH_KEY_LEN = 8
QUALIFIER_LEN = 16

TYPE_COL = b"type"
GRAPHS_COL = b"graphs"
IDX_COL = b"idx"
VERTICES_COL = b"vertices"

# property type codes
INT64, FLOAT64, BOOLEAN, STRING = 0, 1, 2, 5

_U16 = struct.Struct(">H")
_U32 = struct.Struct(">I")
_U64 = struct.Struct(">Q")
_I64 = struct.Struct(">q")
_F64 = struct.Struct(">d")
_ROW = struct.Struct(">HQ")
_QUAL = struct.Struct(">HHQI")


class CodecError(EpgmError):
    def __init__(self, message: str, family: int | None = None, qualifier: bytes | None = None):
        where = ""
        if family is not None:
            where = f" [family {FAMILY_NAMES.get(family, family)}"
            if qualifier is not None:
                where += f", qualifier {qualifier!r}"
            where += "]"
        super().__init__(message + where)
        self.family = family
        self.qualifier = qualifier


def family_key_length(family: int) -> int:
    if family in VERTEX_FAMILIES:
        return VERTEX_KEY_LEN
    if family in GRAPH_FAMILIES:
        return GRAPH_KEY_LEN
    raise CodecError(f"unknown column family {family}")


# -- keys -------------------------------------------------------------------

def vertex_row_key(partition: int, vertex_id: int) -> bytes:
    return _ROW.pack(partition, vertex_id)


def split_vertex_row_key(key: bytes) -> tuple[int, int]:
    if len(key) != VERTEX_KEY_LEN:
        raise CodecError(f"vertex row key must be {VERTEX_KEY_LEN} bytes, got {len(key)}")
    return _ROW.unpack(key)


def graph_row_key(graph_id: int) -> bytes:
    return _U64.pack(graph_id)


def split_graph_row_key(key: bytes) -> int:
    if len(key) != GRAPH_KEY_LEN:
        raise CodecError(f"graph row key must be {GRAPH_KEY_LEN} bytes, got {len(key)}")
    return _U64.unpack(key)[0]


@dataclass(frozen=True, order=True)
class EdgeQualifier:
    label_id: int
    opposite_partition: int
    opposite_id: int
    index: int

    def pack(self) -> bytes:
        return _QUAL.pack(self.label_id, self.opposite_partition, self.opposite_id, self.index)

    @classmethod
    def unpack(cls, raw: bytes, family: int | None = None) -> EdgeQualifier:
        if len(raw) != QUALIFIER_LEN:
            raise CodecError(f"edge qualifier must be {QUALIFIER_LEN} bytes, got {len(raw)}",
                             family, raw)
        return cls(*_QUAL.unpack(raw))

    def __str__(self) -> str:
        return f"<{self.label_id},{self.opposite_partition}-{self.opposite_id},{self.index}>"


# -- values -----------------------------------------------------------------

def encode_value(value: PropertyValue) -> bytes:
    if isinstance(value, bool):
        return bytes((BOOLEAN, 1 if value else 0))
    if isinstance(value, int):
        try:
            return bytes((INT64,)) + _I64.pack(value)
        except struct.error:
            raise CodecError(f"integer {value} does not fit in 64 bits") from None
    if isinstance(value, float):
        return bytes((FLOAT64,)) + _F64.pack(value)
    if isinstance(value, str):
        return bytes((STRING,)) + value.encode("utf-8")
    raise CodecError(f"cannot encode {type(value).__name__} value {value!r}")


def decode_value(raw: bytes, family: int | None = None, qualifier: bytes | None = None) -> PropertyValue:
    if not raw:
        raise CodecError("empty property cell", family, qualifier)
    code, payload = raw[0], raw[1:]
    try:
        if code == INT64:
            return _I64.unpack(payload)[0]
        if code == FLOAT64:
            return _F64.unpack(payload)[0]
        if code == BOOLEAN:
            if payload not in (b"\x00", b"\x01"):
                raise CodecError(f"bad boolean payload {payload!r}", family, qualifier)
            return payload == b"\x01"
        if code == STRING:
            return payload.decode("utf-8")
    except (struct.error, UnicodeDecodeError) as exc:
        raise CodecError(f"malformed payload for type code {code}: {exc}", family, qualifier) from None
    raise CodecError(f"unknown property type code {code}", family, qualifier)


def _value_length(code: int, buf: bytes, pos: int) -> int:
    if code in (INT64, FLOAT64):
        return 8
    if code == BOOLEAN:
        return 1
    if code == STRING:
        return 4  # length prefix handled by caller
    raise CodecError(f"unknown property type code {code}")


def encode_edge_properties(props: dict[str, PropertyValue]) -> bytes:
    """``count:u16`` then per entry ``keylen:u16 key code payload``.

    Strings inside the list carry a ``u32`` length prefix since the entry
    itself is not the whole cell.
    """
    out = [_U16.pack(len(props))]
    for key, value in props.items():
        kb = key.encode("utf-8")
        out.append(_U16.pack(len(kb)))
        out.append(kb)
        enc = encode_value(value)
        if enc[0] == STRING:
            out.append(enc[:1] + _U32.pack(len(enc) - 1) + enc[1:])
        else:
            out.append(enc)
    return b"".join(out)


def decode_edge_properties(raw: bytes, family: int | None = None,
                           qualifier: bytes | None = None) -> dict[str, PropertyValue]:
    try:
        (n,) = _U16.unpack_from(raw, 0)
        pos = 2
        props = {}
        for _ in range(n):
            (klen,) = _U16.unpack_from(raw, pos)
            pos += 2
            key = raw[pos:pos + klen].decode("utf-8")
            if len(raw) < pos + klen + 1:
                raise CodecError("truncated edge property list", family, qualifier)
            pos += klen
            code = raw[pos]
            if code == STRING:
                (slen,) = _U32.unpack_from(raw, pos + 1)
                payload = raw[pos + 5:pos + 5 + slen]
                if len(payload) != slen:
                    raise CodecError("truncated string in edge property list", family, qualifier)
                pos += 5 + slen
                props[key] = payload.decode("utf-8")
            else:
                size = _value_length(code, raw, pos)
                cell = raw[pos:pos + 1 + size]
                if len(cell) != 1 + size:
                    raise CodecError("truncated edge property list", family, qualifier)
                props[key] = decode_value(cell, family, qualifier)
                pos += 1 + size
        if pos != len(raw):
            raise CodecError("trailing bytes after edge property list", family, qualifier)
        return props
    except CodecError as exc:
        if exc.family is None and family is not None:
            raise CodecError(str(exc), family, qualifier) from None
        raise
    except (struct.error, UnicodeDecodeError, IndexError) as exc:
        raise CodecError(f"malformed edge property list: {exc}", family, qualifier) from None


def encode_u16(n: int) -> bytes:
    return _U16.pack(n)


def decode_u16(raw: bytes) -> int:
    if len(raw) != 2:
        raise CodecError(f"expected 2 bytes, got {len(raw)}")
    return _U16.unpack(raw)[0]


def encode_u32(n: int) -> bytes:
    return _U32.pack(n)


def decode_u32(raw: bytes) -> int:
    if len(raw) != 4:
        raise CodecError(f"expected 4 bytes, got {len(raw)}")
    return _U32.unpack(raw)[0]


def encode_u64(n: int) -> bytes:
    return _U64.pack(n)


def decode_u64(raw: bytes) -> int:
    if len(raw) != 8:
        raise CodecError(f"expected 8 bytes, got {len(raw)}")
    return _U64.unpack(raw)[0]


def encode_id_list(ids: Iterable[int]) -> bytes:
    ids = list(ids)
    return _U32.pack(len(ids)) + b"".join(_U64.pack(i) for i in ids)


def decode_id_list(raw: bytes) -> list[int]:
    (n,) = _U32.unpack_from(raw, 0)
    if len(raw) != 4 + 8 * n:
        raise CodecError(f"id list of {n} entries has {len(raw)} bytes")
    return [_U64.unpack_from(raw, 4 + 8 * i)[0] for i in range(n)]


def encode_key_list(keys: Iterable[bytes], width: int) -> bytes:
    keys = list(keys)
    for k in keys:
        if len(k) != width:
            raise CodecError(f"list entry must be {width} bytes, got {len(k)}")
    return _U32.pack(len(keys)) + b"".join(keys)


def decode_key_list(raw: bytes, width: int) -> list[bytes]:
    (n,) = _U32.unpack_from(raw, 0)
    if len(raw) != 4 + width * n:
        raise CodecError(f"key list of {n} entries has {len(raw)} bytes")
    return [raw[4 + width * i:4 + width * (i + 1)] for i in range(n)]
