"""Embedding store: (visit_id, modality) -> fixed-dimension vector.

Binary interchange format (all integers little-endian):

    magic   4 bytes  b"MEMB"
    version u16      currently 1
    d       u32      vector dimension
    count   u64      number of entries
    entry*  u16 key length, UTF-8 key "visit_id|modality",
            d * float32 (little-endian IEEE-754)

Vectors are held as float32 so export -> import is bit-exact. A CSV
fallback (header: visit_id,modality,v0..v{d-1}) covers hand inspection.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from ..errors import DataError
from ..modalities import Modality

MAGIC = b"MEMB"
VERSION = 1

Key = tuple[str, str]


class StoreFormatError(DataError):
    pass


class BadMagic(StoreFormatError):
    pass


class VersionUnsupported(StoreFormatError):
    pass


class DimensionMismatch(StoreFormatError):
    pass


class TruncatedFile(StoreFormatError):
    pass


def _norm_modality(modality: Modality | str) -> str:
    return modality.value if isinstance(modality, Modality) else str(modality)


class EmbeddingStore:
    """Single-writer map from (visit_id, modality) to a float32 vector."""

    def __init__(self, d: int, source: str = "hash"):
        if d < 1:
            raise DataError(f"store dimension must be >= 1, got {d}")
        self.d = d
        self.source = source
        self._entries: dict[Key, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: Key) -> bool:
        visit_id, modality = key
        return (visit_id, _norm_modality(modality)) in self._entries

    def put(self, visit_id: str, modality: Modality | str, vector: np.ndarray) -> None:
        vec = np.asarray(vector, dtype=np.float32)
        if vec.shape != (self.d,):
            raise DimensionMismatch(
                f"vector for ({visit_id}, {_norm_modality(modality)}) has shape {vec.shape}, "
                f"store dimension is {self.d}"
            )
        if not np.isfinite(vec).all():
            raise DataError(f"non-finite vector for ({visit_id}, {_norm_modality(modality)})")
        key = (visit_id, _norm_modality(modality))
        if key in self._entries:
            raise DataError(f"duplicate store key {key}")
        self._entries[key] = vec

    def get(self, visit_id: str, modality: Modality | str) -> np.ndarray:
        key = (visit_id, _norm_modality(modality))
        try:
            return self._entries[key]
        except KeyError:
            raise KeyError(f"no embedding for {key}") from None

    def keys(self) -> list[Key]:
        return list(self._entries.keys())

    def items(self) -> list[tuple[Key, np.ndarray]]:
        return list(self._entries.items())

    def equals(self, other: "EmbeddingStore") -> bool:
        if self.d != other.d or set(self._entries) != set(other._entries):
            return False
        return all(
            np.array_equal(vec, other._entries[key]) for key, vec in self._entries.items()
        )


def export_store(store: EmbeddingStore, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HIQ", VERSION, store.d, len(store)))
        for (visit_id, modality), vec in store.items():
            key = f"{visit_id}|{modality}".encode("utf-8")
            if len(key) > 0xFFFF:
                raise DataError(f"store key too long: {key[:32]!r}...")
            fh.write(struct.pack("<H", len(key)))
            fh.write(key)
            fh.write(vec.astype("<f4").tobytes())


def import_store(path: str | Path, expected_d: int | None = None) -> EmbeddingStore:
    """Read a binary store, validating magic, version, and entry lengths."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic(f"{path}: not an embedding store (bad magic)")
    if len(data) < 18:
        raise TruncatedFile(f"{path}: header truncated")
    version, d, count = struct.unpack_from("<HIQ", data, 4)
    if version != VERSION:
        raise VersionUnsupported(f"{path}: store version {version} not supported")
    if expected_d is not None and d != expected_d:
        raise DimensionMismatch(f"{path}: store dimension {d}, expected {expected_d}")
    store = EmbeddingStore(d=d, source="imported")
    offset = 18
    row_bytes = 4 * d
    for i in range(count):
        if offset + 2 > len(data):
            raise TruncatedFile(f"{path}: entry {i}: key length truncated")
        (key_len,) = struct.unpack_from("<H", data, offset)
        offset += 2
        if offset + key_len + row_bytes > len(data):
            raise TruncatedFile(f"{path}: entry {i}: payload truncated")
        key = data[offset : offset + key_len].decode("utf-8")
        offset += key_len
        visit_id, sep, modality = key.partition("|")
        if not sep or not visit_id or not modality:
            raise StoreFormatError(f"{path}: entry {i}: malformed key {key!r}")
        vec = np.frombuffer(data[offset : offset + row_bytes], dtype="<f4").astype(np.float32)
        offset += row_bytes
        store.put(visit_id, modality, vec)
    if offset != len(data):
        raise TruncatedFile(f"{path}: {len(data) - offset} trailing bytes after last entry")
    return store


def export_store_csv(store: EmbeddingStore, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["visit_id", "modality"] + [f"v{i}" for i in range(store.d)])
        for (visit_id, modality), vec in store.items():
            writer.writerow([visit_id, modality] + [repr(float(x)) for x in vec])


def import_store_csv(path: str | Path, expected_d: int | None = None) -> EmbeddingStore:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["visit_id", "modality"]:
            raise StoreFormatError(f"{path}: missing visit_id,modality header")
        d = len(header) - 2
        if d < 1:
            raise StoreFormatError(f"{path}: no vector columns")
        if expected_d is not None and d != expected_d:
            raise DimensionMismatch(f"{path}: store dimension {d}, expected {expected_d}")
        store = EmbeddingStore(d=d, source="imported")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != d + 2:
                raise TruncatedFile(f"{path}:{lineno}: expected {d + 2} fields, got {len(row)}")
            vec = np.array([float(x) for x in row[2:]], dtype=np.float32)
            store.put(row[0], row[1], vec)
        return store
