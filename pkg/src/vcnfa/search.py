"""Shattering searches and the other exhaustively computed quantities.

All shattering work runs on the frozen trace rows of a :class:`TraceSet`.
For a set ``X`` of word positions, every trace gets a *label*: the bit
pattern it shows on ``X``. ``X`` is shattered iff all ``2^|X|`` labels occur.
Per label group we OR and AND the traces; position ``j`` extends ``X`` to a
shattered set iff every group has a trace with ``j`` set (OR) and one with
``j`` clear (not AND).
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .automata import all_words, word_index
from .constructions import cph_params, hyde_witness
from .enumeration import (
    BudgetExceeded,
    SearchBudget,
    TraceSet,
    enumerate_joint,
    enumerate_traces,
    words_per_mask,
)


@dataclass
class VcResult:
    value: int
    exact: bool
    witness: tuple[int, ...] | None = None
    counterexample: tuple[tuple[int, ...], tuple[int, ...]] | None = None


@dataclass
class ShatterReport:
    n: int
    q: int
    upper: int
    upper_exact: bool
    lower: int
    lower_exact: bool
    witness: tuple[int, ...]
    counterexample: tuple[tuple[int, ...], tuple[int, ...]] | None

    def to_dict(self) -> dict:
        ce = None
        if self.counterexample is not None:
            ce = {"set": list(self.counterexample[0]), "missing_F": list(self.counterexample[1])}
        return {
            "n": self.n,
            "q": self.q,
            "upper": self.upper,
            "upper_exact": self.upper_exact,
            "lower": self.lower,
            "lower_exact": self.lower_exact,
            "witness": list(self.witness),
            "counterexample": ce,
        }

    @property
    def exact(self) -> bool:
        return self.upper_exact and self.lower_exact


class _Searcher:
    """Group-wise OR/AND machinery over one trace set."""

    def __init__(self, T: TraceSet, deadline: float | None = None):
        self.T = T
        self.rows = T.masks
        self.N = 1 << T.n
        self.deadline = deadline
        self.timed_out = False

    def bit(self, j: int) -> np.ndarray:
        return ((self.rows[:, j >> 6] >> np.uint64(j & 63)) & np.uint64(1)).astype(np.int64)

    def extensions(self, labels: np.ndarray, size: int) -> int | None:
        """Positions extending the set behind ``labels``; None if it is not shattered."""
        if len(self.rows) == 0:
            return None
        order = np.argsort(labels, kind="stable")
        srt = labels[order]
        starts = np.flatnonzero(np.r_[True, srt[1:] != srt[:-1]])
        if len(starts) != 1 << size:
            return None
        grouped = self.rows[order]
        ors = np.bitwise_or.reduceat(grouped, starts, axis=0)
        ands = np.bitwise_and.reduceat(grouped, starts, axis=0)
        both = np.bitwise_and.reduce(ors & ~ands, axis=0)
        cand = sum(int(w) << (64 * j) for j, w in enumerate(both))
        return cand & ((1 << self.N) - 1)

    def projection_cap(self, positions) -> int:
        """Largest ``m`` with ``2^m`` distinct projections of the traces onto ``positions``."""
        sel = np.zeros(self.rows.shape[1], dtype=np.uint64)
        for j in positions:
            sel[j >> 6] |= np.uint64(1) << np.uint64(j & 63)
        proj = self.rows & sel
        count = len(np.unique(proj[:, 0])) if proj.shape[1] == 1 else len(np.unique(proj, axis=0))
        return count.bit_length() - 1

    def missing_pattern(self, labels: np.ndarray, size: int) -> int:
        present = np.zeros(1 << size, dtype=bool)
        present[labels] = True
        return int(np.flatnonzero(~present)[0])

    def check_time(self) -> bool:
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.timed_out = True
        return self.timed_out


def _bits_above(mask: int, j: int) -> list[int]:
    mask >>= j + 1
    out = []
    pos = j + 1
    while mask:
        if mask & 1:
            out.append(pos)
        mask >>= 1
        pos += 1
    return out


def is_shattered(X, T: TraceSet) -> bool:
    """Whether every subset of the words ``X`` is cut out by some trace in ``T``."""
    words = set(X)
    if any(len(w) != T.n for w in words):
        raise ValueError(f"all words must have length {T.n}")
    s = _Searcher(T)
    labels = np.zeros(len(T), dtype=np.int64)
    for pos, j in enumerate(sorted(word_index(w) for w in words)):
        labels |= s.bit(j) << pos
    return len(np.unique(labels)) == 1 << len(words)


def projections(X, T: TraceSet) -> set[frozenset[str]]:
    """The distinct subsets ``L ∩ X`` over traces ``L`` in ``T``."""
    words = sorted(set(X))
    return {frozenset(w for w in words if w in L) for L in T.languages()}


GREEDY_TRIES = 64


def _greedy_seed(s: _Searcher, root: int, tries: int, seed: int = 0) -> tuple[int, ...]:
    """Largest shattered set found by random greedy extension (an incumbent for the search)."""
    rng = random.Random(seed)
    best: tuple[int, ...] = ()
    for _ in range(tries):
        X: list[int] = []
        labels = np.zeros(len(s.rows), dtype=np.int64)
        cand = root
        while cand and not s.check_time():
            j = rng.choice(_bits_above(cand, -1))
            labels = labels | (s.bit(j) << len(X))
            X.append(j)
            cand &= s.extensions(labels, len(X)) & ~(1 << j)
        if len(X) > len(best):
            best = tuple(sorted(X))
    s.timed_out = False
    return best


def _upper_search(s: _Searcher) -> tuple[int, tuple[int, ...]]:
    cap = int(math.floor(math.log2(len(s.rows)))) if len(s.rows) else 0
    labels0 = np.zeros(len(s.rows), dtype=np.int64)
    root = s.extensions(labels0, 0)
    if root is None:
        return 0, ()
    seed = _greedy_seed(s, root, GREEDY_TRIES)
    best = [len(seed), seed]

    def dfs(X, labels, cand):
        if len(X) > best[0]:
            best[0], best[1] = len(X), tuple(X)
        if best[0] >= cap or s.check_time():
            return
        last = X[-1] if X else -1
        options = _bits_above(cand, last)
        if len(X) + len(options) <= best[0]:
            return
        if s.projection_cap(X + options) <= best[0]:
            return
        for pos, j in enumerate(options):
            if len(X) + len(options) - pos <= best[0] or best[0] >= cap:
                return
            if s.check_time():
                return
            child = labels | (s.bit(j) << len(X))
            c = s.extensions(child, len(X) + 1)
            dfs(X + [j], child, c & cand)

    dfs([], labels0, root)
    return best[0], best[1]


def upper_vc(n: int, q: int, traces: TraceSet | None = None, budget: SearchBudget | None = None) -> VcResult:
    """Largest shattered set of length-``n`` words; branch and bound over shattered sets.

    Shattered sets are closed downwards, so the extension candidates of a set
    bound every shattered superset reachable from it.
    """
    budget = budget or SearchBudget()
    T = traces if traces is not None else enumerate_traces(q, n, budget=budget)
    s = _Searcher(T, budget.deadline())
    value, witness = _upper_search(s)
    return VcResult(value, T.exact and not s.timed_out, witness=witness)


def lower_vc(n: int, q: int, traces: TraceSet | None = None, budget: SearchBudget | None = None) -> VcResult:
    """Largest ``m`` such that every ``m``-set of length-``n`` words is shattered."""
    budget = budget or SearchBudget()
    T = traces if traces is not None else enumerate_traces(q, n, budget=budget)
    s = _Searcher(T, budget.deadline())
    N = 1 << n
    labels0 = np.zeros(len(T), dtype=np.int64)
    root = s.extensions(labels0, 0)
    if root is None:
        return VcResult(0, T.exact, counterexample=((), ()))

    def first_failure(X, labels, cand, depth):
        """Search ``(depth+1)``-sets extending ``X``; return (set, missing pattern)."""
        last = X[-1] if X else -1
        if len(X) == depth:
            for j in range(last + 1, N):
                if not cand >> j & 1:
                    child = labels | (s.bit(j) << len(X))
                    return tuple(X + [j]), s.missing_pattern(child, len(X) + 1)
            return None
        for j in range(last + 1, N):
            if s.check_time():
                return None
            child = labels | (s.bit(j) << len(X))
            c = s.extensions(child, len(X) + 1)
            found = first_failure(X + [j], child, c, depth)
            if found is not None:
                return found
        return None

    for m in range(1, N + 1):
        found = first_failure([], labels0, root, m - 1)
        if s.timed_out:
            return VcResult(m - 1, False)
        if found is not None:
            subset, pattern = found
            missing = tuple(subset[i] for i in range(len(subset)) if pattern >> i & 1)
            return VcResult(m - 1, T.exact, counterexample=(subset, missing))
    return VcResult(N, T.exact)


def shatter_report(n: int, q: int, traces: TraceSet | None = None, budget: SearchBudget | None = None) -> ShatterReport:
    budget = budget or SearchBudget()
    T = traces if traces is not None else enumerate_traces(q, n, budget=budget)
    up = upper_vc(n, q, T, budget)
    lo = lower_vc(n, q, T, budget)
    # a lower bound that outgrew the best upper witness lifts the witness search
    if lo.value > up.value:
        up = VcResult(lo.value, False, witness=tuple(range(lo.value)))
    return ShatterReport(n, q, up.value, up.exact, lo.value, lo.exact, up.witness or (), lo.counterexample)


# -- nondeterministic automatic complexity ---------------------------------


@lru_cache(maxsize=None)
def _growth_strings(length: int, q: int) -> np.ndarray:
    """State sequences ``p_0 = 0, p_1, ...`` using states ``< q`` in first-use order."""
    seqs = [[0]]
    for _ in range(length - 1):
        nxt = []
        for seq in seqs:
            top = max(seq)
            for v in range(min(top + 2, q)):
                nxt.append(seq + [v])
        seqs = nxt
    return np.array(seqs, dtype=np.int64)


def _has_unique_path_witness(x: str, q: int) -> bool:
    n = len(x)
    if n == 0:
        return True
    P = _growth_strings(n + 1, q)
    S = len(P)
    E = np.zeros((S, 2, q, q), dtype=bool)
    ar = np.arange(S)
    for i, ch in enumerate(x):
        E[ar, int(ch), P[:, i], P[:, i + 1]] = True
    A = E.sum(axis=1, dtype=np.int64)
    vec = np.zeros((S, q), dtype=np.int64)
    vec[:, 0] = 1
    for _ in range(n):
        vec = np.einsum("sq,sqr->sr", vec, A)
    return bool(np.any(vec[ar, P[:, n]] == 1))


MAX_AN_LENGTH = 10


def an_nondet(x: str) -> int:
    """``A_N(x)``: fewest states of an NFA with exactly one accepting path of length ``|x|``.

    Only the edges on that path matter (dropping any other edge or accept
    state cannot add paths), so the search runs over state sequences of the
    path. Hyde's construction caps the answer at ``len(x) // 2 + 1``.
    """
    if any(c not in "01" for c in x):
        raise ValueError(f"not a binary word: {x!r}")
    if len(x) > MAX_AN_LENGTH:
        raise ValueError(f"length {len(x)} beyond the search frontier {MAX_AN_LENGTH}")
    cap = hyde_witness(x).q
    for q in range(1, cap):
        if _has_unique_path_witness(x, q):
            return q
    return cap


def max_an_words(n: int) -> tuple[int, frozenset[str]]:
    """Maximal ``A_N`` over words of length ``n`` and the words attaining it."""
    values = {w: an_nondet(w) for w in all_words(n)}
    top = max(values.values())
    return top, frozenset(w for w, v in values.items() if v == top)


# -- separating words -------------------------------------------------------


def _complete_dfa_finals(q: int, n: int) -> np.ndarray:
    """Final state of every complete ``q``-state DFA (start 0) on every length-``n`` word."""
    total = q ** (2 * q)
    idx = np.arange(total, dtype=np.int64)
    delta = np.empty((total, 2, q), dtype=np.int64)
    for c in range(2):
        for s in range(q):
            delta[:, c, s] = (idx // q ** (c * q + s)) % q
    cur = np.zeros((total, 1), dtype=np.int64)
    for _ in range(n):
        nxt = np.empty((total, cur.shape[1], 2), dtype=np.int64)
        for c in range(2):
            nxt[:, :, c] = np.take_along_axis(delta[:, c, :], cur, axis=1)
        cur = nxt.reshape(total, -1)
    return cur


MAX_SEP_STATES = 5


@lru_cache(maxsize=None)
def _separation_table(n: int) -> dict[tuple[int, int], int]:
    """``sep`` for every pair of distinct length-``n`` words, as ``{(i, j): q}`` with ``i < j``."""
    N = 1 << n
    result: dict[tuple[int, int], int] = {}
    pending = [(i, j) for i in range(N) for j in range(i + 1, N)]
    q = 1
    while pending:
        if q > MAX_SEP_STATES:
            raise ValueError(f"separating length-{n} words needs more than {MAX_SEP_STATES} states")
        finals = _complete_dfa_finals(q, n)
        still = []
        for i, j in pending:
            if np.any(finals[:, i] != finals[:, j]):
                result[(i, j)] = q
            else:
                still.append((i, j))
        pending = still
        q += 1
    return result


def sep(w: str, x: str) -> int:
    """Fewest states of a complete DFA accepting exactly one of ``w`` and ``x``."""
    if len(w) != len(x):
        raise ValueError("words must have equal length")
    if w == x:
        raise ValueError("sep(w, w) is undefined")
    if len(w) > 7:
        raise ValueError("pairwise search is limited to length 7")
    i, j = sorted((word_index(w), word_index(x)))
    return _separation_table(len(w))[(i, j)]


def sep_max(n: int) -> int:
    """``S(n)``: the maximum of ``sep`` over distinct pairs of length ``n``."""
    if n < 1:
        raise ValueError("need two distinct words, so n >= 1")
    return max(_separation_table(n).values())


# -- similarity -------------------------------------------------------------


@dataclass
class SimilarityProfile:
    value: int
    pairing: tuple[tuple[str, str], ...]
    realized: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def similar(self) -> bool:
        return self.value == 1 << len(self.pairing)


SIMILARITY_SCOPES = ("words", "lengths")


def similarity_profile(
    X, Y, q: int = 2, budget: SearchBudget | None = None, scope: str = "words"
) -> SimilarityProfile:
    """Best count of subsets ``F ⊆ [k]`` realisable in paired fashion, over orderings of ``Y``.

    ``F`` is realised when a single automaton with at most ``q`` states
    accepts ``x_i`` and ``y_i`` exactly for ``i`` in ``F``. With
    ``scope="words"`` only the words of ``X ∪ Y`` are inspected; with
    ``scope="lengths"`` the automaton must also reject every other word of
    the lengths involved, so its traces are exactly the chosen words.
    """
    X, Y = list(X), list(Y)
    if len(X) != len(Y):
        raise ValueError("sequences must have the same size")
    if len(X) > 4:
        raise ValueError("at most 4 words per side")
    if scope not in SIMILARITY_SCOPES:
        raise ValueError(f"scope must be one of {SIMILARITY_SCOPES}")
    k = len(X)
    lengths = tuple(sorted({len(w) for w in X + Y}))
    rows, _ = enumerate_joint(q, lengths, budget=budget)
    offsets = {}
    off = 0
    for L in lengths:
        offsets[L] = off
        off += words_per_mask(L)

    if scope == "lengths":
        allowed = np.zeros(rows.shape[1], dtype=np.uint64)
        for w in X + Y:
            i = word_index(w)
            allowed[offsets[len(w)] + (i >> 6)] |= np.uint64(1) << np.uint64(i & 63)
        rows = rows[np.all((rows & ~allowed) == 0, axis=1)]

    def column(w):
        i = word_index(w)
        col = offsets[len(w)] + (i >> 6)
        return ((rows[:, col] >> np.uint64(i & 63)) & np.uint64(1)).astype(np.int64)

    xbits = [column(w) for w in X]
    ybits = [column(w) for w in Y]
    px = sum(b << i for i, b in enumerate(xbits)) if k else np.zeros(len(rows), dtype=np.int64)
    best = None
    for perm in itertools.permutations(range(k)):
        py = sum(ybits[perm[i]] << i for i in range(k)) if k else np.zeros(len(rows), dtype=np.int64)
        agreed = np.unique(px[px == py])
        if best is None or len(agreed) > best.value:
            realized = tuple(tuple(i for i in range(k) if p >> i & 1) for p in agreed.tolist())
            best = SimilarityProfile(len(agreed), tuple((X[i], Y[perm[i]]) for i in range(k)), realized)
    return best


# -- derived quantities -----------------------------------------------------


@dataclass
class Bound:
    value: int
    exact: bool


EXACT_FULL_SHATTER_MAX_N = 3


def min_full_shatter_states(n: int, budget: SearchBudget | None = None) -> Bound:
    """Fewest states whose NFAs realise every subset of ``{0,1}^n`` as a trace.

    Beyond the enumeration frontier the CP-H sum is returned as an upper bound.
    """
    bound = cph_params(n).bound
    if n > EXACT_FULL_SHATTER_MAX_N:
        return Bound(bound, False)
    for q in range(1, min(bound, 3) + 1):
        if len(enumerate_traces(q, n, budget=budget)) == 1 << (1 << n):
            return Bound(q, True)
    return Bound(bound, False)


@dataclass
class MonotonicityReport:
    q: int
    cells: dict[int, VcResult]
    nondecreasing: dict[tuple[int, int], bool | None]
    diagonal: dict[tuple[int, int], tuple[VcResult, VcResult, bool | None]]

    @property
    def holds(self) -> bool:
        return all(v is True for v in self.nondecreasing.values())


def _judge(lo: VcResult, hi: VcResult) -> bool | None:
    """Is ``hi >= lo``? Inexact values are only lower bounds, so some pairs stay open."""
    if hi.value >= lo.value and lo.exact:
        return True
    if lo.exact and hi.exact:
        return False
    return None


def monotonicity_probe(q: int, n_range, budget: SearchBudget | None = None, diagonal: bool = True) -> MonotonicityReport:
    """Upper VC values along a row of fixed ``q`` plus the ``(n,q) <= (n+1,q+1)`` check.

    A pair is judged only from exact cells or from a bound that already decides it.
    """
    budget = budget or SearchBudget()
    ns = list(n_range)
    cells = {n: upper_vc(n, q, budget=budget) for n in ns}
    verdicts = {}
    for a, b in zip(ns, ns[1:]):
        verdicts[(a, b)] = _judge(cells[a], cells[b])
    diag = {}
    if diagonal:
        for n in ns:
            try:
                nxt = upper_vc(n + 1, q + 1, budget=budget)
            except BudgetExceeded:  # beyond the enumeration frontier
                continue
            diag[(n, n + 1)] = (cells[n], nxt, _judge(cells[n], nxt))
    return MonotonicityReport(q, cells, verdicts, diag)
