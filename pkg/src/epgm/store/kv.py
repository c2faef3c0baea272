"""Versioned sorted cell table: memtable, write-ahead journal and immutable segments.

A cell is addressed by (family, row key, qualifier) and holds up to
``max_versions`` timestamped values; a value of ``None`` is a tombstone.
Writes go to the journal first and then into the memtable. ``flush`` turns
the memtable into a sorted segment file and truncates the journal; when
enough segments pile up they are merged, which is where retention is
applied on disk and tombstoned cells disappear.
"""

from __future__ import annotations

import logging
import os
import struct
import threading
import zlib
from pathlib import Path
from typing import Iterable, Iterator

from sortedcontainers import SortedSet

from ..model import EpgmError
from .codec import family_key_length

log = logging.getLogger(__name__)

CellKey = tuple[int, bytes, bytes]  # (family, row, qualifier)
Version = tuple[int, "bytes | None"]

TOMBSTONE_LEN = 0xFFFFFFFF
SEGMENT_MAGIC = b"EPGMSEG1"
MERGE_THRESHOLD = 4

_HEAD = struct.Struct(">B")
_QLEN = struct.Struct(">H")
_TS_VLEN = struct.Struct(">QI")
_CRC = struct.Struct(">I")


class CorruptJournalError(EpgmError):
    def __init__(self, path: Path, offset: int, reason: str):
        super().__init__(f"{path}: corrupt record at byte offset {offset}: {reason}")
        self.path = path
        self.offset = offset


def encode_record(family: int, row: bytes, qualifier: bytes, ts: int, value: bytes | None) -> bytes:
    if len(row) != family_key_length(family):
        raise EpgmError(f"row key length {len(row)} does not match family {family}")
    vlen = TOMBSTONE_LEN if value is None else len(value)
    body = b"".join((_HEAD.pack(family), row, _QLEN.pack(len(qualifier)), qualifier,
                     _TS_VLEN.pack(ts, vlen), value or b""))
    return body + _CRC.pack(zlib.crc32(body))


def decode_records(data: bytes, path: Path, start: int = 0) -> Iterator[tuple[int, bytes, bytes, int, bytes | None]]:
    pos = start
    n = len(data)
    while pos < n:
        begin = pos
        try:
            family = data[pos]
            klen = family_key_length(family)
            pos += 1
            row = data[pos:pos + klen]
            pos += klen
            (qlen,) = _QLEN.unpack_from(data, pos)
            pos += 2
            qual = data[pos:pos + qlen]
            pos += qlen
            ts, vlen = _TS_VLEN.unpack_from(data, pos)
            pos += _TS_VLEN.size
            if vlen == TOMBSTONE_LEN:
                value = None
            else:
                value = data[pos:pos + vlen]
                if len(value) != vlen:
                    raise CorruptJournalError(path, begin, "truncated value")
                pos += vlen
            (crc,) = _CRC.unpack_from(data, pos)
        except CorruptJournalError:
            raise
        except (struct.error, IndexError, EpgmError) as exc:
            raise CorruptJournalError(path, begin, str(exc)) from None
        if zlib.crc32(data[begin:pos]) != crc:
            raise CorruptJournalError(path, begin, "checksum mismatch")
        pos += 4
        yield family, row, qual, ts, value


class Journal:
    """Append-only record log with an explicit durability point.

    Records sit in an in-process buffer until :meth:`sync` writes and
    fsyncs them. With ``sync_mode="always"`` the owner syncs after every
    write batch; with ``"manual"`` durability only happens on ``sync``,
    ``flush`` or ``close``.
    """

    def __init__(self, path: Path, sync_mode: str = "always"):
        if sync_mode not in ("always", "manual"):
            raise EpgmError(f"unknown journal sync mode {sync_mode!r}")
        self.path = path
        self.sync_mode = sync_mode
        self._buffer: list[bytes] = []
        self._fh = open(path, "ab")

    def append(self, record: bytes) -> None:
        self._buffer.append(record)

    def sync(self) -> None:
        if not self._buffer:
            return
        self._fh.write(b"".join(self._buffer))
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self._buffer.clear()

    def drop_unsynced(self) -> None:
        self._buffer.clear()

    def truncate(self) -> None:
        self._buffer.clear()
        self._fh.truncate(0)
        self._fh.seek(0)
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self) -> None:
        self._fh.close()

    def replay(self) -> Iterator[tuple[int, bytes, bytes, int, bytes | None]]:
        data = self.path.read_bytes()
        yield from decode_records(data, self.path)


def _merge_versions(into: list[Version], ts: int, value: bytes | None, limit: int) -> None:
    # newest first; a rewrite at an existing timestamp replaces the value
    for i, (t, _) in enumerate(into):
        if t == ts:
            into[i] = (ts, value)
            return
        if t < ts:
            into.insert(i, (ts, value))
            break
    else:
        into.append((ts, value))
    del into[limit:]


class CellTable:
    def __init__(self, path: Path, max_versions: int = 3, sync_mode: str = "always"):
        if max_versions < 1:
            raise EpgmError("max_versions must be at least 1")
        self.path = Path(path)
        self.max_versions = max_versions
        self.segment_dir = self.path / "segments"
        self.segment_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._cells: dict[CellKey, list[Version]] = {}
        self._memtable: dict[CellKey, list[Version]] = {}
        self._rows: dict[tuple[int, bytes], set[tuple[int, bytes]]] = {}
        self._sorted_rows: dict[str, SortedSet] = {"vertex": SortedSet(), "graph": SortedSet()}
        self.last_ts = 0
        self._segments: list[Path] = []
        for seg in sorted(self.segment_dir.glob("*.seg")):
            self._load_segment(seg)
        self.journal = Journal(self.path / "journal.log", sync_mode)
        for family, row, qual, ts, value in self.journal.replay():
            self._apply((family, row, qual), ts, value, memtable=True)
        log.debug("opened cell table at %s: %d cells, %d segments",
                  self.path, len(self._cells), len(self._segments))

    # -- loading --------------------------------------------------------
    def _load_segment(self, seg: Path) -> None:
        data = seg.read_bytes()
        if not data.startswith(SEGMENT_MAGIC):
            raise CorruptJournalError(seg, 0, "bad segment header")
        for family, row, qual, ts, value in decode_records(data, seg, len(SEGMENT_MAGIC)):
            self._apply((family, row, qual), ts, value, memtable=False)
        self._segments.append(seg)

    @staticmethod
    def table_of(family: int) -> str:
        return "vertex" if family_key_length(family) == 10 else "graph"

    def _apply(self, key: CellKey, ts: int, value: bytes | None, memtable: bool) -> None:
        family, row, qual = key
        versions = self._cells.get(key)
        if versions is None:
            versions = self._cells[key] = []
            cols = self._rows.get((self._table_code(family), row))
            if cols is None:
                cols = self._rows[(self._table_code(family), row)] = set()
                self._sorted_rows[self.table_of(family)].add(row)
            cols.add((family, qual))
        _merge_versions(versions, ts, value, self.max_versions)
        if memtable:
            _merge_versions(self._memtable.setdefault(key, []), ts, value, self.max_versions)
        if ts > self.last_ts:
            self.last_ts = ts

    @staticmethod
    def _table_code(family: int) -> int:
        return 0 if family_key_length(family) == 10 else 1

    # -- writing --------------------------------------------------------
    def next_timestamp(self) -> int:
        with self._lock:
            return self.last_ts + 1

    def write(self, cells: Iterable[tuple[int, bytes, bytes, bytes | None]], ts: int | None = None) -> int:
        """Write a batch of cells at one timestamp; ``None`` values are tombstones."""
        with self._lock:
            if ts is None:
                ts = self.last_ts + 1
            cells = list(cells)
            for family, row, qual, value in cells:
                self.journal.append(encode_record(family, row, qual, ts, value))
            for family, row, qual, value in cells:
                self._apply((family, row, qual), ts, value, memtable=True)
            if self.journal.sync_mode == "always":
                self.journal.sync()
            return ts

    def sync(self) -> None:
        with self._lock:
            self.journal.sync()

    def flush(self) -> Path | None:
        """Persist the memtable as a new segment and truncate the journal."""
        with self._lock:
            self.journal.sync()
            if not self._memtable:
                return None
            n = len(self._segments)
            seg = self.segment_dir / f"{n:06d}.seg"
            while seg.exists():
                n += 1
                seg = self.segment_dir / f"{n:06d}.seg"
            self._write_segment(seg, self._memtable)
            self._segments.append(seg)
            self._memtable = {}
            self.journal.truncate()
            if len(self._segments) >= MERGE_THRESHOLD:
                self.merge()
            return seg

    def _write_segment(self, seg: Path, cells: dict[CellKey, list[Version]]) -> None:
        tmp = seg.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            fh.write(SEGMENT_MAGIC)
            for key in sorted(cells):
                family, row, qual = key
                for ts, value in reversed(cells[key]):
                    fh.write(encode_record(family, row, qual, ts, value))
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, seg)

    def merge(self) -> None:
        """Fold every segment into one, dropping cells whose newest version is a tombstone."""
        with self._lock:
            self.journal.sync()
            if self._memtable:
                # keep the on-disk state self-contained before rewriting segments
                self.flush_no_merge()
            live = {k: v for k, v in self._cells.items() if v and v[0][1] is not None}
            target = self.segment_dir / "merged.tmpseg"
            self._write_segment(target, live)
            for seg in self._segments:
                seg.unlink()
            final = self.segment_dir / "000000.seg"
            os.replace(target, final)
            self._segments = [final]
            dead = [k for k in self._cells if k not in live]
            for key in dead:
                del self._cells[key]
                family, row, qual = key
                rk = (self._table_code(family), row)
                cols = self._rows.get(rk)
                if cols is not None:
                    cols.discard((family, qual))
                    if not cols:
                        del self._rows[rk]
                        self._sorted_rows[self.table_of(family)].discard(row)

    def flush_no_merge(self) -> None:
        n = len(self._segments)
        seg = self.segment_dir / f"{n:06d}.seg"
        while seg.exists():
            n += 1
            seg = self.segment_dir / f"{n:06d}.seg"
        self._write_segment(seg, self._memtable)
        self._segments.append(seg)
        self._memtable = {}
        self.journal.truncate()

    def simulate_crash(self) -> None:
        """Drop writes that never reached the journal file and close everything."""
        with self._lock:
            self.journal.drop_unsynced()
            self.journal.close()

    def close(self) -> None:
        with self._lock:
            self.journal.sync()
            self.journal.close()

    # -- reading --------------------------------------------------------
    def versions(self, family: int, row: bytes, qualifier: bytes) -> list[Version]:
        with self._lock:
            return list(self._cells.get((family, row, qualifier), ()))

    def get(self, family: int, row: bytes, qualifier: bytes, as_of: int | None = None) -> bytes | None:
        with self._lock:
            for ts, value in self._cells.get((family, row, qualifier), ()):
                if as_of is None or ts <= as_of:
                    return value
            return None

    def row(self, families: Iterable[int], row: bytes, as_of: int | None = None) -> dict[tuple[int, bytes], bytes]:
        """Live cells of one row restricted to ``families``, as of a timestamp."""
        fams = set(families)
        out = {}
        with self._lock:
            if not fams:
                return out
            table = self._table_code(next(iter(fams)))
            for family, qual in self._rows.get((table, row), ()):
                if family not in fams:
                    continue
                for ts, value in self._cells[(family, row, qual)]:
                    if as_of is None or ts <= as_of:
                        if value is not None:
                            out[(family, qual)] = value
                        break
        return out

    def row_keys(self, table: str, start: bytes | None = None, stop: bytes | None = None) -> list[bytes]:
        """Snapshot of row keys in byte order within ``[start, stop)``."""
        with self._lock:
            rows = self._sorted_rows[table]
            if start is None and stop is None:
                return list(rows)
            return list(rows.irange(start, stop, inclusive=(True, False)))

    def cells(self) -> Iterator[tuple[CellKey, list[Version]]]:
        with self._lock:
            items = [(k, list(v)) for k, v in self._cells.items()]
        return iter(items)
