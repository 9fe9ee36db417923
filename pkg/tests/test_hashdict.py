import random
from collections import Counter

import pytest

from csdict._io import Reader, Writer
from csdict.codes import END
from csdict.errors import BuildError, ParameterError
from csdict.hashdict import (BERNSTEIN_SEED, DOUBLE, HASH, HASHB, HASHBB, LINEAR, ROTATING_SEED,
                             HashDictionary, expected_probes, hash_bernstein, hash_build,
                             hash_rotating, is_prime, next_prime, probe_step, table_size)

from conftest import SortedOracle, held_out

CONFIGS = [(v, p) for v in (HASH, HASHB, HASHBB) for p in (DOUBLE, LINEAR)]


def random_keys(n, seed):
    rnd = random.Random(seed)
    out = set()
    while len(out) < n:
        out.add(bytes(rnd.randrange(1, 256) for _ in range(rnd.randint(3, 10))))
    return list(out)


def test_primes():
    assert [v for v in range(30) if is_prime(v)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert next_prime(6) == 7 and next_prime(7) == 7 and next_prime(0) == 2
    assert table_size(3, 0.5) == 7
    assert table_size(100, 0.8) == 127


def test_bernstein_recurrence():
    assert hash_bernstein(b"", 101) == BERNSTEIN_SEED % 101
    assert hash_bernstein(b"a", 101) == (BERNSTEIN_SEED * 32769 + 97) % 101
    h = BERNSTEIN_SEED
    for c in b"hello":
        h = (h * 32769 + c) % 1009
    assert hash_bernstein(b"hello", 1009) == h


def test_rotating_recurrence_and_step():
    assert hash_rotating(b"", 97) == ROTATING_SEED % 97
    h = ((ROTATING_SEED << 4) ^ (ROTATING_SEED >> 28) ^ 97) & 0xFFFFFFFF
    assert hash_rotating(b"a", 97) == h % 97
    for key in random_keys(2000, 1):
        assert 1 <= probe_step(key, 1009, DOUBLE) <= 1008
        assert probe_step(key, 1009, LINEAR) == 1


def wilson_hilferty_critical(df, z=3.0902):
    # upper 0.001 quantile of chi-square(df)
    return df * (1 - 2 / (9 * df) + z * (2 / (9 * df)) ** 0.5) ** 3


def test_bernstein_uniformity():
    m = 1009
    keys = random_keys(100_000, 2)
    counts = Counter(hash_bernstein(k, m) for k in keys)
    expected = len(keys) / m
    chi2 = sum((counts.get(c, 0) - expected) ** 2 / expected for c in range(m))
    assert chi2 < wilson_hilferty_critical(m - 1)


def test_bad_parameters():
    with pytest.raises(ParameterError):
        hash_build([b"a"], alpha=1.0)
    with pytest.raises(ParameterError):
        hash_build([b"a"], alpha=0)
    with pytest.raises(ParameterError):
        hash_build([b"a"], variant="HashC")
    with pytest.raises(BuildError):
        hash_build([b"a", b"a"])
    with pytest.raises(BuildError):
        hash_build([])


@pytest.mark.parametrize("variant,policy", CONFIGS)
def test_oracle_agreement(variant, policy, words_small):
    d = hash_build(words_small, variant, policy, 0.8)
    ids = [d.locate(s) for s in words_small]
    assert all(d.extract(i) == s for i, s in zip(ids, words_small))
    assert len(set(ids)) == len(ids)
    if variant == HASH:
        assert all(1 <= i <= d.m for i in ids)
    else:
        assert sorted(ids) == list(range(1, d.n + 1))
    assert all(d.locate(q) == -1 for q in held_out(words_small, 1000))
    assert d.locate(b"\x02unseen\x03") == -1
    assert d.extract(0) is None and d.extract(d.id_space + 1) is None


def test_hash_empty_cell_extract_is_null(words_small):
    d = hash_build(words_small[:100], HASH, DOUBLE, 0.5)
    used = {d.locate(s) for s in words_small[:100]}
    empty = next(c for c in range(1, d.m + 1) if c not in used)
    assert d.extract(empty) is None


def test_store_invariants(words_small):
    d = hash_build(words_small, HASHB, LINEAR, 0.7)
    assert d.m == table_size(d.n, 0.7)
    M = d._M
    assert all(a < b for a, b in zip(M, M[1:]))
    # H[i] = M[rank1(B, i)] for occupied cells
    h = hash_build(words_small, HASH, LINEAR, 0.7)
    for cell in range(1, d.m + 1):
        if d._B.access(cell):
            assert h._H[cell - 1] == M[d._B.rank(1, cell) - 1]
    bb = hash_build(words_small, HASHBB, LINEAR, 0.7)
    assert [bb._Y.select(1, i) - 1 for i in range(1, bb.n + 1)] == M


def test_padded_encodings_distinct():
    # strings that would collide under plain zero padding
    strings = [b"a", b"aa", b"aaa", b"b", b"ab"]
    d = hash_build(strings, HASHB, DOUBLE, 0.5)
    assert END in d.code.lengths
    assert all(d.extract(d.locate(s)) == s for s in strings)
    assert len({d.locate(s) for s in strings}) == len(strings)


def test_linear_probing_ranks_once(words_small):
    d = hash_build(words_small, HASHB, LINEAR, 0.9)
    long_chain = 0
    for s in words_small + held_out(words_small, 500):
        _, t = d.locate_traced(s)
        if not t.probes:
            continue  # a byte outside the code table: rejected before hashing
        assert t.ranks == 1
        long_chain += t.probes > 1
    assert long_chain > 100


def test_double_hashing_ranks_every_probe(words_small):
    d = hash_build(words_small, HASHB, DOUBLE, 0.9)
    for s in words_small[:500]:
        _, t = d.locate_traced(s)
        assert t.ranks == t.probes and t.selects == 0


@pytest.mark.parametrize("policy", [LINEAR, DOUBLE])
def test_hashbb_one_select_per_offset(policy, words_small):
    d = hash_build(words_small, HASHBB, policy, 0.9)
    for s in words_small[:500]:
        i, t = d.locate_traced(s)
        assert i > 0 and t.selects == t.probes
    for q in held_out(words_small, 300):
        i, t = d.locate_traced(q)
        assert i == -1
        if not t.probes:
            continue
        # the final probe lands on an empty cell and reads no offset
        assert t.selects == t.probes - 1


@pytest.mark.parametrize("alpha", [0.5, 0.8])
def test_probe_means_near_formulas(alpha):
    keys = random_keys(20_000, 3)
    present = set(keys)
    misses = [k for k in random_keys(22_000, 4) if k not in present][:2000]
    d = hash_build(keys, HASH, DOUBLE, alpha)
    a = d.n / d.m
    succ = sum(d.locate_traced(k)[1].probes for k in keys) / len(keys)
    assert succ == pytest.approx(expected_probes(a, DOUBLE, True), rel=0.15)
    d = hash_build(keys, HASH, LINEAR, alpha)
    miss = sum(d.locate_traced(k)[1].probes for k in misses) / len(misses)
    assert miss == pytest.approx(expected_probes(a, LINEAR, False), rel=0.25)


def test_expected_probe_values():
    assert expected_probes(0.8, DOUBLE, True) == pytest.approx(2.012, abs=1e-3)
    assert expected_probes(0.8, LINEAR, False) == pytest.approx(13.0)


@pytest.mark.parametrize("variant,policy", CONFIGS)
def test_serialization(variant, policy, urls_small):
    d = hash_build(urls_small[:500], variant, policy, 0.6)
    w = Writer()
    d.write(w)
    data = w.getvalue()
    back = HashDictionary.read(Reader(data))
    out = Writer()
    back.write(out)
    assert out.getvalue() == data
    assert all(back.locate(s) == d.locate(s) for s in urls_small[:500])
