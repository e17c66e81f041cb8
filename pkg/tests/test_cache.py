import threading

import numpy as np
import pytest

from conftest import traces
from vcnfa import cache
from vcnfa.cache import CacheCorruptError, CacheKey
from vcnfa.enumeration import SearchBudget, TraceSet, enumerate_traces

MATRIX = [(q, n, a) for q in (1, 2) for n in range(5) for a in (1, 2)]


@pytest.mark.parametrize("q, n, alphabet", MATRIX)
def test_roundtrip_matrix(tmp_path, q, n, alphabet):
    T = traces(q, n, alphabet)
    key = CacheKey.for_traces(T)
    path = cache.store(key, T, tmp_path)
    back = cache.load(key, tmp_path)
    assert back == T
    assert back.masks.tobytes() == T.masks.tobytes()
    assert path.read_bytes() == cache.encode(back)


def test_roundtrip_wide_rows(tmp_path):
    T = traces(2, 7)
    cache.store(CacheKey.for_traces(T), T, tmp_path)
    assert cache.load(CacheKey(2, 7), tmp_path) == T


def test_load_matches_fresh_enumeration(tmp_path):
    cache.store(CacheKey(1, 2), enumerate_traces(1, 2), tmp_path)
    assert cache.load(CacheKey(1, 2), tmp_path).as_ints() == {0, 1, 8, 15}


def test_missing_key_is_absent(tmp_path):
    assert cache.load(CacheKey(2, 3), tmp_path) is None
    assert cache.load(CacheKey(2, 3), tmp_path / "nowhere") is None


def test_mismatched_key_rejected(tmp_path):
    T = traces(1, 2)
    for bad in (CacheKey(2, 2), CacheKey(1, 3), CacheKey(1, 2, alphabet=1), CacheKey(1, 2, exact=False)):
        with pytest.raises(ValueError):
            cache.store(bad, T, tmp_path)
    assert cache.entries(tmp_path) == []


def test_stale_model_version_is_absent(tmp_path):
    T = traces(1, 2)
    old = TraceSet(T.q, T.n, T.alphabet, T.masks, model_version="nfa-old-v0")
    path = cache.store(CacheKey.for_traces(old), old, tmp_path)
    # put the stale payload where the current key looks
    path.rename(tmp_path / CacheKey(1, 2).filename())
    assert cache.load(CacheKey(1, 2), tmp_path) is None


def test_wrong_payload_under_key_is_an_error(tmp_path):
    other = traces(2, 2)
    path = cache.store(CacheKey.for_traces(other), other, tmp_path)
    path.rename(tmp_path / CacheKey(1, 2).filename())
    with pytest.raises(CacheCorruptError):
        cache.load(CacheKey(1, 2), tmp_path)


def test_every_single_bit_flip_detected(tmp_path):
    T = traces(1, 3)
    key = CacheKey.for_traces(T)
    path = cache.store(key, T, tmp_path)
    good = path.read_bytes()
    for i in range(len(good) * 8):
        bad = bytearray(good)
        bad[i // 8] ^= 1 << (i % 8)
        path.write_bytes(bytes(bad))
        with pytest.raises(CacheCorruptError):
            cache.load(key, tmp_path)
    path.write_bytes(good[:-1])
    with pytest.raises(CacheCorruptError):
        cache.load(key, tmp_path)
    path.write_bytes(b"")
    with pytest.raises(CacheCorruptError):
        cache.load(key, tmp_path)


def test_sampled_bit_flips_on_large_file(tmp_path):
    T = traces(2, 4)
    key = CacheKey.for_traces(T)
    path = cache.store(key, T, tmp_path)
    good = path.read_bytes()
    rng = np.random.default_rng(3)
    for i in rng.integers(0, len(good) * 8, size=300):
        bad = bytearray(good)
        bad[i // 8] ^= 1 << (i % 8)
        path.write_bytes(bytes(bad))
        with pytest.raises(CacheCorruptError):
            cache.load(key, tmp_path)


def test_concurrent_stores_never_corrupt(tmp_path):
    T = traces(2, 3)
    key = CacheKey.for_traces(T)
    errors = []

    def writer():
        try:
            for _ in range(20):
                cache.store(key, T, tmp_path)
                got = cache.load(key, tmp_path)
                assert got is None or got == T
        except Exception as exc:  # surfaced below
            errors.append(exc)

    threads = [threading.Thread(target=writer) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert cache.load(key, tmp_path) == T
    assert [p.name for p in tmp_path.iterdir()] == [key.filename()]


def test_partial_sets_keyed_separately(tmp_path):
    partial = enumerate_traces(3, 3, budget=SearchBudget(max_seconds=0))
    assert not partial.exact
    cache.store(CacheKey.for_traces(partial), partial, tmp_path)
    assert cache.load(CacheKey(3, 3), tmp_path) is None
    assert cache.load(CacheKey(3, 3, exact=False), tmp_path) == partial


def test_cached_traces_fills_and_reuses(tmp_path, monkeypatch):
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path))
    first = cache.cached_traces(2, 3)
    assert len(cache.entries(tmp_path)) == 1
    assert cache.cached_traces(2, 3) == first
    assert cache.clear(tmp_path) == 1
    assert cache.entries(tmp_path) == []
