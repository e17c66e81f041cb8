"""Exhaustive enumeration of the length-``n`` behaviours of small NFAs.

Every NFA with ``q`` states, start state 0, is identified by a *relation
index*: the base-``2**q`` number whose digit ``c*q + s`` is the target bitset
of state ``s`` on symbol ``c``. Chunks of relation indices are decoded into
numpy arrays and simulated together; each relation then contributes one
trace per accept set.

Traces are stored as rows of little-endian ``uint64`` words, so word index
``i`` lives in bit ``i % 64`` of column ``i // 64``.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .automata import FiniteLanguage, Nfa

log = logging.getLogger(__name__)

MODEL_VERSION = "nfa-single-start-v1"
CHUNK = 1 << 15


class BudgetExceeded(RuntimeError):
    """Raised when a request cannot even start within its budget."""


@dataclass
class SearchBudget:
    max_seconds: float | None = None
    max_enumeration: int = 1 << 26
    jobs: int = 1

    def deadline(self) -> float | None:
        return None if self.max_seconds is None else time.monotonic() + self.max_seconds


def words_per_mask(n: int) -> int:
    return max(1, (1 << n) // 64)


def enumeration_size(q: int, alphabet: int = 2) -> int:
    """``(2^q)^(q*|alphabet|) * 2^q``: automata visited by a plain sweep."""
    return (1 << q) ** (q * alphabet) * (1 << q)


@dataclass
class TraceSet:
    """Distinct traces of all NFAs with at most ``q`` states at length ``n``."""

    q: int
    n: int
    alphabet: int
    masks: np.ndarray
    exact: bool = True
    model_version: str = MODEL_VERSION
    _ints: frozenset | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.masks = canonical_rows(np.asarray(self.masks, dtype=np.uint64).reshape(-1, words_per_mask(self.n)))

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, mask: int) -> bool:
        return mask in self.as_ints()

    def __eq__(self, other):
        if not isinstance(other, TraceSet):
            return NotImplemented
        return (
            (self.q, self.n, self.alphabet, self.exact, self.model_version)
            == (other.q, other.n, other.alphabet, other.exact, other.model_version)
            and np.array_equal(self.masks, other.masks)
        )

    def as_ints(self) -> frozenset[int]:
        if self._ints is None:
            self._ints = frozenset(row_to_int(r) for r in self.masks)
        return self._ints

    def languages(self) -> list[FiniteLanguage]:
        return [FiniteLanguage(self.n, m) for m in sorted(self.as_ints())]


def row_to_int(row) -> int:
    return sum(int(w) << (64 * j) for j, w in enumerate(row))


def int_to_row(mask: int, n: int) -> np.ndarray:
    W = words_per_mask(n)
    return np.array([(mask >> (64 * j)) & 0xFFFFFFFFFFFFFFFF for j in range(W)], dtype=np.uint64)


def canonical_rows(rows: np.ndarray) -> np.ndarray:
    """Deduplicate and sort rows by their integer value."""
    if rows.shape[1] == 1:
        return np.unique(rows[:, 0]).reshape(-1, 1)
    rows = np.unique(rows, axis=0)
    order = np.lexsort(rows.T)  # last key (most significant word) is primary
    return rows[order]


def pack_bool_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a ``(R, 2^n)`` boolean array into ``(R, W)`` uint64 rows."""
    R, N = bits.shape
    W = max(1, N // 64)
    if N < 64:
        bits = np.concatenate([bits, np.zeros((R, 64 - N), dtype=bool)], axis=1)
    packed = np.packbits(bits, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(R, W).astype(np.uint64)


def decode_relations(idx: np.ndarray, q: int, alphabet: int) -> np.ndarray:
    """``(R, alphabet, q)`` target bitsets for relation indices ``idx``."""
    idx = idx.astype(np.uint64)
    out = np.empty((len(idx), alphabet, q), dtype=np.uint64)
    mask = np.uint64((1 << q) - 1)
    for c in range(alphabet):
        for s in range(q):
            out[:, c, s] = (idx >> np.uint64(q * (c * q + s))) & mask
    return out


def image_tables(T: np.ndarray) -> np.ndarray:
    """``img[r, c, m]`` = union of ``T[r, c, s]`` over states ``s`` in bitset ``m``."""
    R, alphabet, q = T.shape
    img = np.zeros((R, alphabet, 1 << q), dtype=np.uint64)
    for m in range(1, 1 << q):
        low = (m & -m).bit_length() - 1
        img[:, :, m] = img[:, :, m & (m - 1)] | T[:, :, low]
    return img


def reach_table(T: np.ndarray, n: int) -> np.ndarray:
    """State sets after every binary word of length ``n``: shape ``(R, 2^n)``.

    Over a unary alphabet the symbol 1 leads to the empty set.
    """
    R, alphabet, q = T.shape
    img = image_tables(T).astype(np.int64)
    reach = np.ones((R, 1), dtype=np.int64)
    for _ in range(n):
        nxt = np.zeros((R, reach.shape[1], 2), dtype=np.int64)
        for c in range(alphabet):
            nxt[:, :, c] = np.take_along_axis(img[:, c, :], reach, axis=1)
        reach = nxt.reshape(R, -1)
    return reach


def canonical_relation_indices(idx: np.ndarray, q: int, alphabet: int) -> np.ndarray:
    """Keep relation indices minimal under relabelings of the non-start states."""
    if q <= 2:
        return idx
    T = decode_relations(idx, q, alphabet)
    keep = np.ones(len(idx), dtype=bool)
    for perm in itertools.permutations(range(1, q)):
        pi = (0,) + perm
        if pi == tuple(range(q)):
            continue
        # relabeled target bitsets: bit s -> bit pi[s]
        mapped = np.zeros_like(T)
        for s in range(q):
            bit = (T >> np.uint64(s)) & np.uint64(1)
            mapped |= bit << np.uint64(pi[s])
        other = np.zeros(len(idx), dtype=np.uint64)
        for c in range(alphabet):
            for s in range(q):
                other |= mapped[:, c, s] << np.uint64(q * (c * q + pi[s]))
        keep &= idx.astype(np.uint64) <= other
    return idx[keep]


def chunk_traces(lo: int, hi: int, q: int, ns: tuple[int, ...], alphabet: int, prune: bool) -> np.ndarray:
    """Distinct joint traces at lengths ``ns`` for relation indices ``lo..hi-1``.

    Returns one array of unique rows; a row concatenates the uint64 words of
    the traces at each length in ``ns``.
    """
    idx = np.arange(lo, hi, dtype=np.int64)
    if prune:
        idx = canonical_relation_indices(idx, q, alphabet)
    if len(idx) == 0:
        return np.zeros((0, sum(words_per_mask(n) for n in ns)), dtype=np.uint64)
    T = decode_relations(idx, q, alphabet)
    reaches = [reach_table(T, n) for n in ns]
    parts = []
    for acc in range(1 << q):
        cols = [pack_bool_rows((reach & acc) != 0) for reach in reaches]
        parts.append(np.concatenate(cols, axis=1))
    rows = np.concatenate(parts, axis=0)
    return np.unique(rows, axis=0)


def _chunk_worker(args):
    return chunk_traces(*args)


def enumerate_joint(
    q: int,
    ns: tuple[int, ...],
    alphabet: int = 2,
    budget: SearchBudget | None = None,
    prune: bool = True,
) -> tuple[np.ndarray, bool]:
    """Distinct joint trace rows over all NFAs with ``q`` states, plus exactness.

    Padding with unreachable states shows that ``q`` states realise every
    behaviour of fewer states, so this is the "at most ``q``" set.
    """
    budget = budget or SearchBudget()
    if q < 1:
        raise ValueError("need at least one state")
    size = enumeration_size(q, alphabet)
    if size > budget.max_enumeration:
        raise BudgetExceeded(
            f"q={q} over alphabet {alphabet} needs {size} automata; budget is "
            f"{budget.max_enumeration} (feasible frontier: q<=3 binary, q<=5 unary)"
        )
    total = (1 << q) ** (q * alphabet)
    tasks = [(lo, min(lo + CHUNK, total), q, tuple(ns), alphabet, prune) for lo in range(0, total, CHUNK)]
    deadline = budget.deadline()
    collected = []
    exact = True
    if budget.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=budget.jobs) as pool:
            for rows in pool.map(_chunk_worker, tasks):
                collected.append(rows)
                if deadline is not None and time.monotonic() > deadline:
                    exact = len(collected) == len(tasks)
                    break
    else:
        for task in tasks:
            collected.append(chunk_traces(*task))
            if deadline is not None and time.monotonic() > deadline and len(collected) < len(tasks):
                exact = False
                break
    if not exact:
        log.warning("enumeration stopped after %d of %d chunks", len(collected), len(tasks))
    rows = np.unique(np.concatenate(collected, axis=0), axis=0)
    return rows, exact


def enumerate_traces(
    q: int,
    n: int,
    alphabet: int = 2,
    budget: SearchBudget | None = None,
    prune: bool = True,
) -> TraceSet:
    """All distinct length-``n`` traces of NFAs with at most ``q`` states."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    rows, exact = enumerate_joint(q, (n,), alphabet, budget, prune)
    return TraceSet(q, n, alphabet, rows, exact=exact)


def iter_nfas(q: int, alphabet: int = 2):
    """Every NFA with ``q`` states and start state 0, unpruned (for oracles)."""
    for idx in range((1 << q) ** (q * alphabet)):
        delta = [[(idx >> (q * (c * q + s))) & ((1 << q) - 1) for s in range(q)] for c in range(alphabet)]
        for acc in range(1 << q):
            yield Nfa.from_bitsets(delta, acc)
