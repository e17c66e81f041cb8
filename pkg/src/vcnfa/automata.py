"""Automaton data model and length-restricted semantics.

Words are plain strings over ``"0"`` (and ``"1"`` for the binary alphabet).
A language of words of one fixed length ``n`` is stored as an integer bit
mask with ``2**n`` positions; bit ``i`` stands for the word whose
most-significant-bit-first binary value is ``i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

MAX_STATES = 64


def word_index(w: str) -> int:
    """Index of ``w`` among the words of length ``len(w)``, MSB first."""
    if any(c not in "01" for c in w):
        raise ValueError(f"not a binary word: {w!r}")
    return int(w, 2) if w else 0


def index_word(n: int, i: int) -> str:
    if n < 0 or not 0 <= i < (1 << n):
        raise ValueError(f"index {i} out of range for length {n}")
    return format(i, "b").zfill(n) if n else ""


def all_words(n: int) -> list[str]:
    return [index_word(n, i) for i in range(1 << n)]


@dataclass(frozen=True)
class FiniteLanguage:
    """A set of words of a single length ``n``, kept as a ``2**n``-bit mask."""

    n: int
    mask: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("length must be nonnegative")
        if self.mask < 0 or self.mask >> (1 << self.n):
            raise ValueError(f"mask does not fit {1 << self.n} positions")

    @classmethod
    def from_words(cls, words: Iterable[str], n: int | None = None) -> "FiniteLanguage":
        words = list(words)
        if n is None:
            if not words:
                raise ValueError("length of an empty word list is ambiguous")
            n = len(words[0])
        mask = 0
        for w in words:
            if len(w) != n:
                raise ValueError(f"word {w!r} does not have length {n}")
            mask |= 1 << word_index(w)
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "FiniteLanguage":
        return cls(n, (1 << (1 << n)) - 1)

    def __contains__(self, w: str) -> bool:
        return len(w) == self.n and bool(self.mask >> word_index(w) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.words())

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def words(self) -> list[str]:
        return [index_word(self.n, i) for i in range(1 << self.n) if self.mask >> i & 1]

    def derivative(self, c: int) -> "FiniteLanguage":
        """``c^{-1} L`` for a single symbol ``c``."""
        if self.n == 0:
            raise ValueError("cannot take a derivative of a length-0 language")
        half = 1 << (self.n - 1)
        return FiniteLanguage(self.n - 1, (self.mask >> (c * half)) & ((1 << half) - 1))


# Traces are finite languages produced by an automaton at one length.
LengthTrace = FiniteLanguage


def residual(F: FiniteLanguage, p: str) -> FiniteLanguage:
    """The derivative ``p^{-1}F = {w : pw in F}``."""
    if len(p) > F.n:
        raise ValueError(f"prefix {p!r} longer than {F.n}")
    rest = F.n - len(p)
    width = 1 << rest
    return FiniteLanguage(rest, (F.mask >> (word_index(p) * width)) & ((1 << width) - 1))


@dataclass(frozen=True)
class Nfa:
    """An epsilon-free NFA with a single start state.

    ``edges`` holds ``(source, symbol, target)`` triples; a missing triple is
    simply an absent transition.
    """

    q: int
    start: int
    accepts: frozenset[int]
    edges: frozenset[tuple[int, int, int]]
    alphabet: int = 2
    _delta: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "accepts", frozenset(self.accepts))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        if not 1 <= self.q <= MAX_STATES:
            raise ValueError(f"state count must lie in 1..{MAX_STATES}, got {self.q}")
        if self.alphabet not in (1, 2):
            raise ValueError("alphabet size must be 1 or 2")
        if not 0 <= self.start < self.q:
            raise ValueError("start state out of range")
        if any(not 0 <= s < self.q for s in self.accepts):
            raise ValueError("accept state out of range")
        delta = [[0] * self.q for _ in range(self.alphabet)]
        for s, c, t in self.edges:
            if not (0 <= s < self.q and 0 <= t < self.q):
                raise ValueError(f"edge {(s, c, t)} references a missing state")
            if not 0 <= c < self.alphabet:
                raise ValueError(f"edge {(s, c, t)} uses a symbol outside the alphabet")
            delta[c][s] |= 1 << t
        object.__setattr__(self, "_delta", tuple(tuple(row) for row in delta))

    @classmethod
    def from_bitsets(cls, delta, accept_mask: int, start: int = 0) -> "Nfa":
        """Build from ``delta[symbol][state]`` target bitsets and an accept bitset."""
        q = len(delta[0])
        edges = [
            (s, c, t)
            for c, row in enumerate(delta)
            for s, targets in enumerate(row)
            for t in range(q)
            if targets >> t & 1
        ]
        accepts = [s for s in range(q) if accept_mask >> s & 1]
        return cls(q, start, frozenset(accepts), frozenset(edges), alphabet=len(delta))

    @property
    def accept_mask(self) -> int:
        return sum(1 << s for s in self.accepts)

    def targets(self, state: int, symbol: int) -> int:
        return self._delta[symbol][state]

    def step(self, states: int, symbol: int) -> int:
        """Image of a state bitset under one symbol."""
        out = 0
        row = self._delta[symbol]
        while states:
            low = states & -states
            out |= row[low.bit_length() - 1]
            states ^= low
        return out

    def with_alphabet(self, size: int) -> "Nfa":
        if size < self.alphabet:
            raise ValueError("cannot shrink the alphabet")
        return Nfa(self.q, self.start, self.accepts, self.edges, alphabet=size)

    def sorted_edges(self) -> list[tuple[int, int, int]]:
        return sorted(self.edges)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "alphabet": self.alphabet,
            "start": self.start,
            "accepts": sorted(self.accepts),
            "edges": [list(e) for e in self.sorted_edges()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Nfa":
        return cls(
            data["q"],
            data["start"],
            frozenset(data["accepts"]),
            frozenset(tuple(e) for e in data["edges"]),
            alphabet=data.get("alphabet", 2),
        )

    @classmethod
    def from_json(cls, text: str) -> "Nfa":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Dfa(Nfa):
    """A partial DFA: each (state, symbol) pair has at most one target."""

    def __post_init__(self):
        super().__post_init__()
        for row in self._delta:
            for targets in row:
                if targets & (targets - 1):
                    raise ValueError("DFA has a nondeterministic transition")


def _symbols(M: Nfa, w: str) -> list[int]:
    out = []
    for ch in w:
        if ch not in "01" or int(ch) >= M.alphabet:
            raise ValueError(f"symbol {ch!r} outside the alphabet of size {M.alphabet}")
        out.append(int(ch))
    return out


def accepts(M: Nfa, w: str) -> bool:
    states = 1 << M.start
    for c in _symbols(M, w):
        states = M.step(states, c)
        if not states:
            return False
    return bool(states & M.accept_mask)


def reach_sets(M: Nfa, n: int) -> list[int]:
    """State sets reached after each word of length ``n``, in index order.

    One breadth-first sweep over the binary prefix tree; children of the
    prefix with index ``i`` sit at ``2i`` and ``2i+1``.
    """
    level = [1 << M.start]
    for _ in range(n):
        nxt = []
        for states in level:
            for c in range(2):
                nxt.append(M.step(states, c) if c < M.alphabet else 0)
        level = nxt
    return level


def trace(M: Nfa, n: int) -> FiniteLanguage:
    """``L(M)`` restricted to binary words of length ``n``."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    acc = M.accept_mask
    mask = 0
    for i, states in enumerate(reach_sets(M, n)):
        if states & acc:
            mask |= 1 << i
    return FiniteLanguage(n, mask)


def _count_matrix(M: Nfa, symbol: int | None) -> list[list[int]]:
    A = [[0] * M.q for _ in range(M.q)]
    for s, c, t in M.edges:
        if symbol is None or c == symbol:
            A[s][t] += 1
    return A


def count_accepting_paths(M: Nfa, n: int, w: str | None = None) -> int:
    """Number of accepting state sequences of length ``n + 1``.

    With ``w`` only paths spelling ``w`` are counted; otherwise all words of
    length ``n`` contribute.
    """
    if w is not None:
        if len(w) != n:
            raise ValueError(f"word {w!r} does not have length {n}")
        mats = [_count_matrix(M, c) for c in range(M.alphabet)]
        syms = _symbols(M, w)
    else:
        mats = [_count_matrix(M, None)]
        syms = [0] * n
    vec = [0] * M.q
    vec[M.start] = 1
    for c in syms:
        A = mats[c]
        vec = [sum(vec[s] * A[s][t] for s in range(M.q)) for t in range(M.q)]
    return sum(vec[s] for s in M.accepts)


def minimal_partial_dfa(F: FiniteLanguage) -> Dfa:
    """Minimal partial DFA for ``F``: one state per distinct nonempty residual.

    The empty language gets a single rejecting state.
    """
    if F.mask == 0:
        return Dfa(1, 0, frozenset(), frozenset())
    ids: dict[FiniteLanguage, int] = {F: 0}
    order = [F]
    edges = []
    i = 0
    while i < len(order):
        R = order[i]
        if R.n > 0:
            for c in range(2):
                D = R.derivative(c)
                if D.mask == 0:
                    continue
                if D not in ids:
                    ids[D] = len(order)
                    order.append(D)
                edges.append((i, c, ids[D]))
        i += 1
    accepting = frozenset(ids[R] for R in order if R.n == 0)
    return Dfa(len(order), 0, accepting, frozenset(edges))


def state_complexity(F: FiniteLanguage) -> int:
    """``s(F)``: the number of distinct nonempty residuals of ``F`` (at least 1)."""
    if F.mask == 0:
        return 1
    total = 0
    for level in range(F.n + 1):
        width = 1 << (F.n - level)
        low = (1 << width) - 1
        seen = {(F.mask >> (p * width)) & low for p in range(1 << level)}
        seen.discard(0)
        total += len(seen)
    return total


def unary_exact_lengths(S: Iterable[int], n_max: int) -> Nfa:
    """Unary path automaton accepting exactly ``{0^k : k in S}``."""
    S = set(S)
    if any(k < 0 or k > n_max for k in S):
        raise ValueError(f"lengths must lie in 0..{n_max}")
    edges = frozenset((i, 0, i + 1) for i in range(n_max))
    return Nfa(n_max + 1, 0, frozenset(S), edges, alphabet=1)


def render(M: Nfa, format: str = "dot", name: str = "nfa") -> str:
    """Serialize ``M`` as Graphviz DOT or as the JSON automaton schema.

    DOT draws symbol 0 dashed and symbol 1 solid; accept states are doubled
    circles and the start state receives an arrow from an invisible node.
    """
    if format == "json":
        return json.dumps(M.to_dict(), sort_keys=True)
    if format != "dot":
        raise ValueError(f"unknown format {format!r}")
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, style=invis];']
    for s in range(M.q):
        shape = "doublecircle" if s in M.accepts else "circle"
        lines.append(f'  {s} [shape={shape}, label="{s}"];')
    lines.append(f"  __start -> {M.start};")
    for s, c, t in M.sorted_edges():
        style = "dashed" if c == 0 else "solid"
        lines.append(f'  {s} -> {t} [label="{c}", style={style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
