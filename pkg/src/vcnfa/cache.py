"""On-disk cache of enumerated trace sets.

File layout (all integers little-endian)::

    8s   magic  b"VCNFATRC"
    H    format version
    H    length of the model-version string, then that many UTF-8 bytes
    H q, H n, B alphabet, B exact
    I    uint64 words per mask
    Q    number of masks
    ...  masks, sorted, each as ``words`` uint64 values (low word first)
    32s  SHA-256 of everything above

Writes go to a temporary file in the cache directory and are renamed into
place, so readers only ever see complete files.
"""

from __future__ import annotations

import hashlib
import os
import re
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .enumeration import MODEL_VERSION, SearchBudget, TraceSet, enumerate_traces, words_per_mask

MAGIC = b"VCNFATRC"
FORMAT_VERSION = 1
ENV_VAR = "VCNFA_CACHE_DIR"
_DIGEST = 32


class CacheCorruptError(RuntimeError):
    pass


@dataclass(frozen=True)
class CacheKey:
    q: int
    n: int
    alphabet: int = 2
    exact: bool = True
    model_version: str = MODEL_VERSION

    @classmethod
    def for_traces(cls, T: TraceSet) -> "CacheKey":
        return cls(T.q, T.n, T.alphabet, T.exact, T.model_version)

    def filename(self) -> str:
        tag = re.sub(r"[^A-Za-z0-9.-]", "_", self.model_version)
        kind = "exact" if self.exact else "partial"
        return f"{tag}_a{self.alphabet}_q{self.q}_n{self.n}_{kind}.trc"


def default_cache_dir() -> Path | None:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def encode(T: TraceSet) -> bytes:
    version = T.model_version.encode("utf-8")
    W = words_per_mask(T.n)
    header = MAGIC + struct.pack("<HH", FORMAT_VERSION, len(version)) + version
    header += struct.pack("<HHBBIQ", T.q, T.n, T.alphabet, int(T.exact), W, len(T))
    body = np.ascontiguousarray(T.masks, dtype="<u8").tobytes()
    payload = header + body
    return payload + hashlib.sha256(payload).digest()


def decode(data: bytes) -> TraceSet:
    if len(data) < len(MAGIC) + _DIGEST:
        raise CacheCorruptError("cache file truncated")
    payload, digest = data[:-_DIGEST], data[-_DIGEST:]
    if hashlib.sha256(payload).digest() != digest:
        raise CacheCorruptError("cache file checksum mismatch")
    if not payload.startswith(MAGIC):
        raise CacheCorruptError("bad magic")
    pos = len(MAGIC)
    fmt, vlen = struct.unpack_from("<HH", payload, pos)
    pos += 4
    if fmt != FORMAT_VERSION:
        raise CacheCorruptError(f"unknown format version {fmt}")
    version = payload[pos : pos + vlen].decode("utf-8")
    pos += vlen
    q, n, alphabet, exact, W, count = struct.unpack_from("<HHBBIQ", payload, pos)
    pos += struct.calcsize("<HHBBIQ")
    if W != words_per_mask(n) or len(payload) - pos != count * W * 8:
        raise CacheCorruptError("body size disagrees with header")
    masks = np.frombuffer(payload, dtype="<u8", offset=pos).reshape(count, W).astype(np.uint64)
    return TraceSet(q, n, alphabet, masks, exact=bool(exact), model_version=version)


def store(key: CacheKey, T: TraceSet, cache_dir: Path | str) -> Path:
    if CacheKey.for_traces(T) != key:
        raise ValueError(f"trace set metadata {CacheKey.for_traces(T)} does not match key {key}")
    directory = Path(cache_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / key.filename()
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".trc")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(encode(T))
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load(key: CacheKey, cache_dir: Path | str) -> TraceSet | None:
    """Stored trace set for ``key``; None when absent or from another model version."""
    path = Path(cache_dir) / key.filename()
    if not path.exists():
        return None
    T = decode(path.read_bytes())
    if T.model_version != key.model_version:
        return None
    if CacheKey.for_traces(T) != key:
        raise CacheCorruptError(f"{path.name} holds {CacheKey.for_traces(T)}")
    return T


def entries(cache_dir: Path | str) -> list[Path]:
    directory = Path(cache_dir)
    if not directory.is_dir():
        return []
    return sorted(directory.glob("*.trc"))


def clear(cache_dir: Path | str) -> int:
    paths = entries(cache_dir)
    for p in paths:
        p.unlink()
    return len(paths)


def cached_traces(
    q: int,
    n: int,
    alphabet: int = 2,
    budget: SearchBudget | None = None,
    cache_dir: Path | str | None = None,
) -> TraceSet:
    """Enumerate traces, consulting and filling the cache when a directory is given."""
    if cache_dir is None:
        cache_dir = default_cache_dir()
    if cache_dir is None:
        return enumerate_traces(q, n, alphabet, budget=budget)
    key = CacheKey(q, n, alphabet)
    hit = load(key, cache_dir)
    if hit is not None:
        return hit
    T = enumerate_traces(q, n, alphabet, budget=budget)
    store(CacheKey.for_traces(T), T, cache_dir)
    return T
