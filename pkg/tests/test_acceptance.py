"""Acceptance criteria, one test each; the terminal summary prints PASS/FAIL per criterion."""

import itertools
import json
import random
import time
from pathlib import Path

import pytest

from conftest import load_fixture, traces
from vcnfa import cache
from vcnfa.automata import (
    FiniteLanguage,
    accepts,
    all_words,
    count_accepting_paths,
    minimal_partial_dfa,
    trace,
    unary_exact_lengths,
)
from vcnfa.cache import CacheCorruptError, CacheKey
from vcnfa.constructions import (
    closed_walk_column_sequences,
    cp_bound,
    cph_construct,
    cph_params,
    do_better_n3,
    hyde_witness,
)
from vcnfa.enumeration import SearchBudget, enumerate_traces
from vcnfa.search import (
    an_nondet,
    is_shattered,
    lower_vc,
    max_an_words,
    min_full_shatter_states,
    sep,
    sep_max,
    similarity_profile,
    upper_vc,
)

pytestmark = pytest.mark.acceptance
ARTIFACTS = Path(__file__).resolve().parents[1] / "artifacts"


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


@pytest.mark.criterion("1 Table 1 reproduction")
def test_c01_table1():
    with Clock(1):
        assert [cp_bound(n)[1] for n in range(9)] == [1, 2, 4, 7, 11, 19, 34, 50, 82]


@pytest.mark.criterion("2 Champarnaud-Pin attainment")
def test_c02_champarnaud_pin():
    with Clock(120):
        for n in range(5):
            top = max(minimal_partial_dfa(FiniteLanguage(n, m)).q for m in range(1 << (1 << n)))
            assert top == cp_bound(n)[1], n


@pytest.mark.criterion("3 CP-H construction soundness")
def test_c03_cph_soundness():
    with Clock(300):
        for n in (2, 3, 4):
            bound = cph_params(n).bound
            for m in range(1 << (1 << n)):
                F = FiniteLanguage(n, m)
                out = cph_construct(F, verify=False)
                assert trace(out.nfa, n) == F and out.q <= bound
        rng = random.Random(2024)
        for n in (5, 6):
            bound = cph_params(n).bound
            for _ in range(10_000):
                F = FiniteLanguage(n, rng.getrandbits(1 << n))
                out = cph_construct(F, verify=False)
                assert trace(out.nfa, n) == F and out.q <= bound
    assert [cph_params(n).bound for n in (3, 4, 5, 6)] == [6, 7, 15, 30]


@pytest.mark.criterion("4 Lemma 1 brute force")
def test_c04_lemma1():
    with Clock(60):
        checked = 0
        for t in range(13):
            for a in range(13 - t):
                n = t + 2 * a + 2
                if t >= n // 2:
                    assert len(closed_walk_column_sequences(t, a, n)) == 1, (t, a)
                    checked += 1
        assert checked > 0
        assert len(closed_walk_column_sequences(1, 0, 4)) == 2


@pytest.mark.criterion("5 Hyde")
def test_c05_hyde():
    with Clock(600):
        for n in range(13):
            for x in all_words(n):
                M = hyde_witness(x)
                assert M.q <= n // 2 + 1
                assert count_accepting_paths(M, n) == 1 and accepts(M, x)
        for n in range(7):
            for x in all_words(n):
                assert an_nondet(x) <= n // 2 + 1


@pytest.mark.criterion("6 Remark 2 reproduction")
def test_c06_remark2():
    with Clock(60):
        value, words = max_an_words(4)
    assert value == 3
    assert words == {"0010", "0011", "0100", "0110", "1101", "1100", "1011", "1001"}


TABLE2 = {
    (0, 1): (1, 1), (1, 1): (2, 2), (2, 1): (2, 1), (3, 1): (2, 1), (4, 1): (2, 1), (5, 1): (2, 1), (6, 1): (2, 1),
    (2, 2): (4, 4), (3, 2): (5, 3), (4, 2): (5, 2), (5, 2): (5, 2),
    (2, 3): (4, 4), (3, 3): (8, 8), (4, 3): (9, 5),
}


@pytest.mark.criterion("7 Table 2 cells")
def test_c07_table2():
    with Clock(1800):
        for (n, q), (up, lo) in TABLE2.items():
            T = traces(q, n)
            u, l = upper_vc(n, q, T), lower_vc(n, q, T)
            assert (u.value, l.value) == (up, lo), (n, q)
            assert u.exact and l.exact
        T53 = traces(3, 5)
        u = upper_vc(5, 3, T53, budget=SearchBudget(max_seconds=120))
        assert u.value >= 8
        assert is_shattered([format(i, "05b") for i in u.witness], T53)
        l = lower_vc(5, 3, T53)
        assert l.exact and l.value == 4
        T62 = traces(2, 6)
        assert upper_vc(6, 2, T62).value >= 5
        l = lower_vc(6, 2, T62)
        assert l.exact and l.value == 1


@pytest.mark.criterion("8 (4,2) shattered triple")
def test_c08_remark_triple():
    with Clock(60):
        assert is_shattered(["0000", "0101", "1000"], enumerate_traces(2, 4))


def _avoiding(n, prefix):
    p = int(prefix, 2)
    shift = n - len(prefix)
    return sum(1 << i for i in range(1 << n) if i >> shift != p)


@pytest.mark.criterion("9 Adaptivity")
def test_c09_adaptivity():
    with Clock(120):
        allowed = _avoiding(4, "11")
        sub, count = allowed, 0
        while True:
            out = cph_construct(FiniteLanguage(4, sub))
            assert out.q <= 6 and trace(out.nfa, 4).mask == sub
            count += 1
            if sub == 0:
                break
            sub = (sub - 1) & allowed
        assert count == 4096
        allowed = _avoiding(5, "111")
        rng = random.Random(7)
        for _ in range(1000):
            mask = rng.getrandbits(32) & allowed
            out = cph_construct(FiniteLanguage(5, mask))
            assert out.q <= 14 and trace(out.nfa, 5).mask == mask


@pytest.mark.criterion("10 Theorem 9 and three states")
def test_c10_do_better():
    with Clock(300):
        for m in range(256):
            M = do_better_n3(FiniteLanguage(3, m))
            assert M.q <= 4 and trace(M, 3).mask == m
        assert len(enumerate_traces(3, 3).as_ints()) == 256
        assert len(enumerate_traces(2, 3).as_ints()) < 256


@pytest.mark.criterion("11 Theorem 4 reproduction")
def test_c11_theorem4():
    # the computed claim holds when the automaton's traces must be exactly the chosen words
    X = ["00", "01", "10"]
    with Clock(600):
        values = {
            S: similarity_profile(X, S, q=2, scope="lengths").value
            for S in itertools.combinations(all_words(3), 3)
        }
    best = max(values.values())
    argmax = [S for S, v in values.items() if v == best]
    assert all(v < 8 for v in values.values()), f"similar sets: {[S for S, v in values.items() if v == 8]}"
    assert best == 6
    assert ("000", "001", "100") in argmax


@pytest.mark.criterion("12 Unary properties")
def test_c12_unary():
    with Clock(60):
        for bits in range(64):
            S = {k for k in range(6) if bits >> k & 1}
            M = unary_exact_lengths(S, 5)
            for k in range(6):
                assert accepts(M, "0" * k) == (k in S)
        for q in (1, 2, 3, 4):
            T = enumerate_traces(q, 1, alphabet=1)
            assert not any(m >> 1 & 1 for m in T.as_ints())


# independent pure-Python complete-DFA search, frozen
SEP_MAX = {1: 2, 2: 2, 3: 2, 4: 3}


@pytest.mark.criterion("13 Separating words")
def test_c13_separating_words():
    with Clock(600):
        for n in range(1, 5):
            for w, x in itertools.combinations(all_words(n), 2):
                s = sep(w, x)
                assert s == sep(x, w) and s >= 2
        computed = {n: sep_max(n) for n in range(1, 5)}
    assert computed == SEP_MAX
    recorded = json.loads((ARTIFACTS / "separating_words.json").read_text())
    assert {int(k): v for k, v in recorded["S"].items() if int(k) <= 4} == SEP_MAX


@pytest.mark.criterion("14 Figure 3 fixture")
def test_c14_figure3():
    with Clock(1):
        M = load_fixture("figure3")
        F = trace(M, 5)
    expected = {w for w in all_words(5) if w[1] == w[2] and w[3] != w[4]}
    assert M.q == 7
    assert set(F.words()) == expected and len(expected) == 8


@pytest.mark.criterion("15 Corollary 1 consistency")
def test_c15_corollary1():
    with Clock(300):
        b2, b3 = min_full_shatter_states(2), min_full_shatter_states(3)
    assert (b2.value, b2.exact) == (2, True)
    assert (b3.value, b3.exact) == (3, True)
    assert b2.value <= cph_params(2).bound == 3
    assert b3.value <= cph_params(3).bound == 6


@pytest.mark.criterion("16 Cache")
def test_c16_cache(tmp_path):
    with Clock(60):
        for q in (1, 2):
            for n in range(5):
                for alphabet in (1, 2):
                    T = traces(q, n, alphabet)
                    key = CacheKey.for_traces(T)
                    cache.store(key, T, tmp_path)
                    back = cache.load(key, tmp_path)
                    assert back == T and back.masks.tobytes() == T.masks.tobytes()
        key = CacheKey(2, 4)
        path = tmp_path / key.filename()
        good = path.read_bytes()
        rng = random.Random(1)
        for _ in range(200):
            i = rng.randrange(len(good) * 8)
            bad = bytearray(good)
            bad[i // 8] ^= 1 << (i % 8)
            path.write_bytes(bytes(bad))
            with pytest.raises(CacheCorruptError):
                cache.load(key, tmp_path)
