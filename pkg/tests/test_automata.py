import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_fixture, nfas, universal
from vcnfa.automata import (
    Dfa,
    FiniteLanguage,
    Nfa,
    accepts,
    all_words,
    count_accepting_paths,
    index_word,
    minimal_partial_dfa,
    render,
    residual,
    state_complexity,
    trace,
    unary_exact_lengths,
    word_index,
)
from vcnfa.constructions import hyde_witness


@pytest.mark.parametrize("w, i", [("000", 0), ("111", 7), ("011", 3), ("", 0)])
def test_word_index_examples(w, i):
    assert word_index(w) == i
    assert index_word(len(w), i) == w


def test_index_word_out_of_range():
    with pytest.raises(ValueError):
        index_word(3, 8)
    with pytest.raises(ValueError):
        index_word(2, -1)


def test_word_index_roundtrip_up_to_12():
    for n in range(13):
        for i in range(1 << n):
            assert word_index(index_word(n, i)) == i


def test_accepts_examples():
    assert accepts(universal(), "01")
    assert not accepts(Nfa(1, 0, set(), {(0, 0, 0), (0, 1, 0)}), "01")
    assert accepts(hyde_witness("000"), "000")


def test_accepts_rejects_foreign_symbol():
    with pytest.raises(ValueError):
        accepts(Nfa(1, 0, {0}, {(0, 0, 0)}, alphabet=1), "01")


def test_trace_examples():
    assert trace(universal(), 2).mask == 0b1111
    assert trace(Nfa(1, 0, {0}, {(0, 0, 0)}), 2).words() == ["00"]
    assert trace(hyde_witness("000"), 3).words() == ["000"]


@settings(max_examples=200, deadline=None)
@given(nfas(), st.integers(0, 8))
def test_trace_matches_per_word_simulation(M, n):
    T = trace(M, n)
    for i in range(1 << n):
        assert bool(T.mask >> i & 1) == accepts(M, index_word(n, i))


def _brute_paths(M, n, w=None):
    """Count accepting state sequences by listing them."""
    total = 0
    for seq in itertools.product(range(M.q), repeat=n):
        states = (M.start,) + seq
        if states[-1] not in M.accepts:
            continue
        words = [""]
        for a, b in zip(states, states[1:]):
            words = [u + str(c) for u in words for c in range(2) if (a, c, b) in M.edges]
        total += sum(1 for u in words if w is None or u == w)
    return total


def test_count_accepting_paths_examples():
    assert count_accepting_paths(universal(), 2) == 4
    M = Nfa(2, 0, {0, 1}, {(0, 0, 0), (0, 0, 1)})
    assert count_accepting_paths(M, 1, "0") == 2
    for x in ["", "0", "0110", "10101"]:
        assert count_accepting_paths(hyde_witness(x), len(x)) == 1


@settings(max_examples=80, deadline=None)
@given(nfas(max_states=3), st.integers(0, 4))
def test_count_accepting_paths_against_listing(M, n):
    assert count_accepting_paths(M, n) == _brute_paths(M, n)
    for w in all_words(n):
        assert count_accepting_paths(M, n, w) == _brute_paths(M, n, w)


def test_path_total_is_sum_over_words_for_all_two_state_nfas():
    from vcnfa.enumeration import iter_nfas

    for M in itertools.chain(iter_nfas(1), iter_nfas(2)):
        for n in range(5):
            assert count_accepting_paths(M, n) == sum(count_accepting_paths(M, n, w) for w in all_words(n))


def test_residual_examples():
    F = FiniteLanguage.from_words(["000", "001", "100"])
    assert residual(F, "0").words() == ["00", "01"]
    assert residual(F, "11").mask == 0
    assert residual(F, "") == F
    with pytest.raises(ValueError):
        residual(F, "0000")


def test_minimal_partial_dfa_examples():
    assert minimal_partial_dfa(FiniteLanguage.full(2)).q == 3
    assert max(minimal_partial_dfa(FiniteLanguage(3, m)).q for m in range(256)) == 7
    empty = minimal_partial_dfa(FiniteLanguage(3, 0))
    assert empty.q == 1 and not empty.accepts


def test_minimal_partial_dfa_is_deterministic_and_exact():
    for n in range(5):
        for m in range(1 << (1 << n)):
            F = FiniteLanguage(n, m)
            D = minimal_partial_dfa(F)
            assert isinstance(D, Dfa)
            assert trace(D, n) == F
            assert D.q == state_complexity(F)


def _layered_dfa_minimum(n):
    """Fewest states of a partial DFA with language exactly F, for every F ⊆ {0,1}^n.

    A trimmed DFA for a language of length-n words is layered: a useful
    state reached by paths of two lengths would accept words of two lengths.
    So it suffices to list layered DFAs (level i -> level i+1, accepts at
    level n) by their level sizes.
    """
    best = {}
    limit = 7
    for sizes in itertools.product(range(1, 4), repeat=n):
        levels = (1,) + sizes
        if sum(levels) > limit:
            continue
        start = [sum(levels[:i]) for i in range(n + 1)]
        slots = [(i, s) for i in range(n) for s in range(levels[i])]
        choices = [range(levels[i + 1] + 1) for i, _ in slots for _ in range(2)]
        for pick in itertools.product(*choices):
            # pick[2*k + c]: target within the next level, levels[i+1] meaning none
            lang = 0
            frontier = [(0, 0, 0)]  # level, state in level, word index so far
            while frontier:
                i, s, idx = frontier.pop()
                if i == n:
                    lang |= 1 << idx
                    continue
                k = start[i] + s
                for c in range(2):
                    t = pick[2 * k + c]
                    if t < levels[i + 1]:
                        frontier.append((i + 1, t, 2 * idx + c))
            total = sum(levels)
            if best.get(lang, limit + 1) > total:
                best[lang] = total
    best[0] = 1
    return best


def test_state_complexity_is_minimal_for_n3():
    best = _layered_dfa_minimum(3)
    for m in range(256):
        assert state_complexity(FiniteLanguage(3, m)) == best[m], hex(m)


def test_unary_exact_lengths_examples():
    M = unary_exact_lengths({0, 2}, 2)
    assert [accepts(M, "0" * k) for k in range(4)] == [True, False, True, False]
    assert not any(accepts(unary_exact_lengths(set(), 3), "0" * k) for k in range(5))


def test_unary_exact_lengths_exhaustive():
    for bits in range(64):
        S = {k for k in range(6) if bits >> k & 1}
        M = unary_exact_lengths(S, 5)
        assert {k for k in range(8) if accepts(M, "0" * k)} == S


@settings(max_examples=100, deadline=None)
@given(nfas(max_states=4, alphabet=1), st.integers(1, 6))
def test_unary_automata_never_accept_a_one(M, n):
    B = M.with_alphabet(2)
    assert all("1" not in w for w in trace(B, n).words())


def test_render_universal_dot():
    dot = render(universal(), "dot")
    assert dot.count("0 -> 0") == 2
    assert "style=dashed" in dot and "style=solid" in dot
    assert "doublecircle" in dot and "__start -> 0" in dot


@settings(max_examples=100, deadline=None)
@given(nfas())
def test_json_roundtrip(M):
    text = render(M, "json")
    assert Nfa.from_json(text) == M
    data = json.loads(text)
    assert data["edges"] == sorted(data["edges"])
    assert set(data) == {"q", "alphabet", "start", "accepts", "edges"}


def test_figure4_fixture_dot_styling():
    M = load_fixture("figure4")
    dot = render(M, "dot")
    for s, c, t in M.edges:
        style = "dashed" if c == 0 else "solid"
        assert f'{s} -> {t} [label="{c}", style={style}];' in dot
    assert trace(M, 4).words() == sorted(["0010", "0011", "0100", "0110", "1101", "1100", "1011", "1001"])


def test_invalid_automata_rejected():
    with pytest.raises(ValueError):
        Nfa(0, 0, set(), set())
    with pytest.raises(ValueError):
        Nfa(65, 0, set(), set())
    with pytest.raises(ValueError):
        Nfa(2, 0, {2}, set())
    with pytest.raises(ValueError):
        Nfa(2, 0, set(), {(0, 2, 1)})
    with pytest.raises(ValueError):
        Dfa(2, 0, set(), {(0, 0, 0), (0, 0, 1)})
