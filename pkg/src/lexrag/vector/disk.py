"""Versioned binary persistence for vector indexes.

Layout (all little-endian):
    magic "ESKW" | version 0x01 | dim u32 | entry count u64
    then per entry: id length u16 | id bytes UTF-8 | dim x f32

Floats round-trip bit-exactly. The provider tag is runtime metadata and is
not part of the file; callers may re-supply it at load time.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import CorruptFileError, DimensionZeroError, VectorError
from .index import VectorIndex

MAGIC = b"ESKW"
VERSION = 1

_HEADER = struct.Struct("<4sBIQ")
_ID_LEN = struct.Struct("<H")


def save_index(index: VectorIndex, path: Path | str) -> None:
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, index.dim, len(index)))
        for chunk_id in index.ids():
            id_bytes = chunk_id.encode("utf-8")
            if len(id_bytes) > 0xFFFF:
                raise VectorError(f"chunk id too long to persist: {chunk_id[:40]!r}...")
            fh.write(_ID_LEN.pack(len(id_bytes)))
            fh.write(id_bytes)
            fh.write(index.get(chunk_id).astype("<f4").tobytes())


def load_index(path: Path | str, provider_tag: str = "") -> VectorIndex:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise CorruptFileError("index file truncated before header")
    magic, version, dim, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CorruptFileError(f"bad magic bytes: {magic!r}")
    if version != VERSION:
        raise CorruptFileError(f"unsupported index version: {version}")
    if dim == 0:
        raise DimensionZeroError("index file declares dim 0")

    index = VectorIndex(dim=dim, provider_tag=provider_tag)
    offset = _HEADER.size
    vec_bytes = dim * 4
    for _ in range(count):
        if offset + _ID_LEN.size > len(data):
            raise CorruptFileError("index file truncated in entry header")
        (id_len,) = _ID_LEN.unpack_from(data, offset)
        offset += _ID_LEN.size
        if offset + id_len + vec_bytes > len(data):
            raise CorruptFileError("index file truncated in entry body")
        try:
            chunk_id = data[offset : offset + id_len].decode("utf-8")
        except UnicodeDecodeError:
            raise CorruptFileError("entry id is not valid UTF-8") from None
        offset += id_len
        vector = np.frombuffer(data, dtype="<f4", count=dim, offset=offset).copy()
        offset += vec_bytes
        try:
            index.add(chunk_id, vector)
        except VectorError as exc:
            raise CorruptFileError(f"invalid entry {chunk_id!r}: {exc}") from exc
    if offset != len(data):
        raise CorruptFileError("trailing bytes after final entry")
    return index
