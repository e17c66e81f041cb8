"""Constructive upper bounds: state-count formulas, schematics and witnesses."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .automata import FiniteLanguage, Nfa, residual, trace

VERIFY_MAX_N = 12


def _term(n: int, i: int) -> int:
    """``min(2^i, 2^(2^(n-i)) - 1)`` without building the huge power."""
    e = 1 << (n - i)
    if e > i:
        return 1 << i
    return min(1 << i, (1 << e) - 1)


def cp_bound(n: int) -> tuple[list[int], int]:
    """Champarnaud-Pin terms for length ``n`` and their sum (max of ``s(F)``)."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    terms = [_term(n, i) for i in range(n + 1)]
    return terms, sum(terms)


@dataclass(frozen=True)
class CphParams:
    """Column layout of the length-restricted NFA construction.

    ``mode`` is ``"fold-back"`` (columns ``0..k`` go up, loop at ``k``, come
    back down to ``t`` and close to column 0), ``"pure-cycle"`` (a plain cycle
    of ``n`` columns, when ``k = n - 1``) or ``"trivial"`` for ``n <= 1``.
    """

    n: int
    a_seq: tuple[int, ...]
    k: int
    mode: str
    t: int
    a: int | None
    bound: int

    def column_budget(self, i: int) -> int:
        return self.a_seq[i]


def cph_params(n: int) -> CphParams:
    if n < 0:
        raise ValueError("length must be nonnegative")
    if n <= 1:
        return CphParams(n, (1,), 0, "trivial", 0, None, 1)
    full, _ = cp_bound(n)
    k = max(i for i in range(1, n + 1) if full[i - 1] < full[i])
    a_seq = tuple(full[: k + 1])
    if k == n - 1:
        return CphParams(n, a_seq, k, "pure-cycle", k, None, sum(a_seq))
    return CphParams(n, a_seq, k, "fold-back", 2 * k - n + 2, n - k - 2, sum(a_seq))


@dataclass(frozen=True)
class SchematicAutomaton:
    t: int
    a: int
    edges: frozenset[tuple[int, int]]

    @property
    def k(self) -> int:
        return self.t + self.a

    @property
    def nodes(self) -> range:
        return range(self.k + 1)

    start = 0
    final = 0


def build_schematic(t: int, a: int) -> SchematicAutomaton:
    """The unlabeled digraph ``M_{t,a}``; coinciding edges collapse."""
    if t < 0 or a < 0:
        raise ValueError("t and a must be nonnegative")
    k = t + a
    edges = {(i, i + 1) for i in range(k)}
    edges.add((k, k))
    edges |= {(i, i - 1) for i in range(t + 1, k + 1)}
    edges.add((t, 0))
    return SchematicAutomaton(t, a, frozenset(edges))


def closed_walk_column_sequences(t: int, a: int, n: int) -> list[tuple[int, ...]]:
    """Every walk of length ``n`` from node 0 back to node 0 in ``M_{t,a}``."""
    if t + a > 16 or n > 64:
        raise ValueError("enumeration budget: t + a <= 16 and n <= 64")
    if n < 0:
        raise ValueError("length must be nonnegative")
    S = build_schematic(t, a)
    succ = {v: sorted(w for u, w in S.edges if u == v) for v in S.nodes}
    # home[r] = nodes with a walk of length r to node 0
    home = [{0}]
    for _ in range(n):
        prev = home[-1]
        home.append({v for v in S.nodes if any(w in prev for w in succ[v])})
    out = []

    def extend(walk):
        left = n - (len(walk) - 1)
        if left == 0:
            out.append(tuple(walk))
            return
        for w in succ[walk[-1]]:
            if w in home[left - 1]:
                walk.append(w)
                extend(walk)
                walk.pop()

    if 0 in home[n]:
        extend([0])
    return out


def hyde_witness(x: str) -> Nfa:
    """NFA with ``len(x)//2 + 1`` states whose only accepting path of length ``len(x)`` spells ``x``.

    Odd length ``2k+1``: climb ``0..k``, loop once at ``k``, descend to 0.
    Even length: a fresh start state reads the first symbol into the odd
    witness for the rest.
    """
    if any(c not in "01" for c in x):
        raise ValueError(f"not a binary word: {x!r}")
    n = len(x)
    if n == 0:
        return Nfa(1, 0, frozenset({0}), frozenset())
    if n % 2 == 0:
        inner = hyde_witness(x[1:])
        edges = {(s + 1, c, t + 1) for s, c, t in inner.edges}
        edges.add((0, int(x[0]), 1))
        return Nfa(inner.q + 1, 0, frozenset({1}), frozenset(edges))
    k = n // 2
    sym = [int(c) for c in x]
    edges = {(i, sym[i], i + 1) for i in range(k)}
    edges.add((k, sym[k], k))
    edges |= {(k - j + 1, sym[k + j], k - j) for j in range(1, k + 1)}
    return Nfa(k + 1, 0, frozenset({0}), frozenset(edges))


@dataclass(frozen=True)
class ColumnLabeledNfa:
    """An NFA whose states carry a column and residual labels (``None`` when absent)."""

    nfa: Nfa
    n: int
    columns: tuple[int, ...]
    fwd_label: tuple[int | None, ...]
    bwd_label: tuple[int | None, ...]

    @property
    def q(self) -> int:
        return self.nfa.q

    def column_sizes(self) -> list[int]:
        sizes = [0] * (max(self.columns) + 1)
        for c in self.columns:
            sizes[c] += 1
        return sizes

    def to_dict(self) -> dict:
        d = self.nfa.to_dict()
        d["columns"] = list(self.columns)
        d["fwd_label"] = list(self.fwd_label)
        d["bwd_label"] = list(self.bwd_label)
        return d

    @classmethod
    def from_dict(cls, d: dict, n: int) -> "ColumnLabeledNfa":
        return cls(Nfa.from_dict(d), n, tuple(d["columns"]), tuple(d["fwd_label"]), tuple(d["bwd_label"]))


def _classes(F: FiniteLanguage, level: int) -> list[int]:
    """Sorted distinct nonempty residual masks of ``F`` at prefix length ``level``."""
    width = 1 << (F.n - level)
    low = (1 << width) - 1
    seen = {(F.mask >> (p * width)) & low for p in range(1 << level)}
    seen.discard(0)
    return sorted(seen)


def _derive(mask: int, rest: int, c: int) -> int:
    half = 1 << (rest - 1)
    return (mask >> (c * half)) & ((1 << half) - 1)


def cph_construct(F: FiniteLanguage, verify: bool | None = None) -> ColumnLabeledNfa:
    """NFA ``M`` with ``L(M) ∩ {0,1}^n = F`` using at most ``cph_params(n).bound`` states.

    Columns ``0..k`` hold the forward residual classes of a prefix tree.
    In fold-back mode columns ``t..k`` also hold backward classes for the
    way home; forward and backward classes share states in sorted order.
    The column skeleton is ``M_{t,a}``, whose closed walks of length ``n``
    are unique, so each accepted word follows the intended column sequence.
    """
    n = F.n
    if verify is None:
        verify = n <= VERIFY_MAX_N
    if F.mask == 0:
        return ColumnLabeledNfa(Nfa(1, 0, frozenset(), frozenset()), n, (0,), (None,), (None,))
    if n == 0:
        return ColumnLabeledNfa(Nfa(1, 0, frozenset({0}), frozenset()), 0, (0,), (F.mask,), (None,))
    if n == 1:
        edges = frozenset((0, c, 0) for c in range(2) if F.mask >> c & 1)
        return ColumnLabeledNfa(Nfa(1, 0, frozenset({0}), edges), 1, (0,), (F.mask,), (F.mask,))

    P = cph_params(n)
    k, t = P.k, P.t
    fwd = [_classes(F, i) for i in range(k + 1)]
    bwd: dict[int, list[int]] = {}
    if P.mode == "fold-back":
        bwd = {i: _classes(F, n - (1 + i - t)) for i in range(t, k + 1)}

    offsets = []
    columns: list[int] = []
    fwd_label: list[int | None] = []
    bwd_label: list[int | None] = []
    for i in range(k + 1):
        size = max(len(fwd[i]), len(bwd.get(i, ())))
        offsets.append(len(columns))
        for j in range(size):
            columns.append(i)
            fwd_label.append(fwd[i][j] if j < len(fwd[i]) else None)
            bwd_label.append(bwd[i][j] if i in bwd and j < len(bwd[i]) else None)
    fstate = [{R: offsets[i] + j for j, R in enumerate(fwd[i])} for i in range(k + 1)]
    bstate = {i: {S: offsets[i] + j for j, S in enumerate(bwd[i])} for i in bwd}

    edges = set()
    for i in range(k):
        for R in fwd[i]:
            for c in range(2):
                D = _derive(R, n - i, c)
                if D:
                    edges.add((fstate[i][R], c, fstate[i + 1][D]))
    if P.mode == "pure-cycle":
        for R in fwd[k]:
            for c in range(2):
                if R >> c & 1:
                    edges.add((fstate[k][R], c, 0))
    else:
        for R in fwd[k]:
            for c in range(2):
                D = _derive(R, n - k, c)
                if D:
                    edges.add((fstate[k][R], c, bstate[k][D]))
        for i in range(t + 1, k + 1):
            rest = 1 + i - t
            for S in bwd[i]:
                for c in range(2):
                    D = _derive(S, rest, c)
                    if D:
                        edges.add((bstate[i][S], c, bstate[i - 1][D]))
        for S in bwd[t]:
            for c in range(2):
                if S >> c & 1:
                    edges.add((bstate[t][S], c, 0))

    M = Nfa(len(columns), 0, frozenset({0}), frozenset(edges))
    out = ColumnLabeledNfa(M, n, tuple(columns), tuple(fwd_label), tuple(bwd_label))
    if verify and trace(M, n) != F:
        raise AssertionError(f"construction for n={n}, mask={F.mask:#x} does not reproduce its language")
    return out


def do_better_n3(F: FiniteLanguage) -> Nfa:
    """A 4-state NFA for any ``F ⊆ {0,1}^3``.

    States: ``s`` (start and accept, id 0), ``s_0`` (1), ``s_1`` (2) and
    ``s_00`` (3). A prefix tree leads from ``s`` to ``s_0``, ``s_1`` and on
    to ``s_00``; the three non-start states double as penultimate states,
    each returning to ``s`` on its own set of last symbols. The search tries
    every injective assignment of the needed last-symbol sets to them.
    """
    if F.n != 3:
        raise ValueError("do_better_n3 needs words of length 3")
    if F.mask == 0:
        return Nfa(1, 0, frozenset(), frozenset())
    s, s0, s1, s00 = range(4)
    prefix_state = {"0": s0, "1": s1}
    pen = {p: residual(F, p).mask for p in ("00", "01", "10", "11")}
    needed = sorted({m for m in pen.values() if m})
    for targets in itertools.permutations((s0, s1, s00), len(needed)):
        cond = dict(zip(needed, targets))
        edges = set()
        for a in "01":
            if residual(F, a).mask:
                edges.add((s, int(a), prefix_state[a]))
        for p, m in pen.items():
            if m:
                edges.add((prefix_state[p[0]], int(p[1]), cond[m]))
        for m, state in cond.items():
            edges |= {(state, c, s) for c in range(2) if m >> c & 1}
        M = Nfa(4, s, frozenset({s}), frozenset(edges))
        if trace(M, 3) == F:
            return M
    raise RuntimeError(f"no template automaton found for mask {F.mask:#x}")
