import random

import pytest

from csdict._io import FormatError, Reader, Writer
from csdict.errors import BuildError
from csdict.rpdict import RePairDictionary, expand_symbol, repair_compress, rp_build

from conftest import SortedOracle, held_out, naive_repair

A, B, C, T = 0, 1, 2, -1


def expand_all(rules, seq, sigma):
    out = []
    for s in seq:
        expand_symbol(s, sigma, rules, out) if s >= 0 else out.append(s)
    return out


def test_examples():
    assert repair_compress([A, B, A, B]) == ([(A, B)], [2, 2])
    assert repair_compress([A, B, C]) == ([], [A, B, C])
    assert repair_compress([A, T, A, T, A, T], forbidden=T) == ([], [A, T, A, T, A, T])


def test_overlapping_runs():
    rules, seq = repair_compress([A] * 5)
    assert expand_all(rules, seq, 1) == [A] * 5
    assert (rules, seq) == naive_repair([A] * 5, -1, 1)


def test_matches_naive_oracle():
    rnd = random.Random(5)
    for _ in range(300):
        n = rnd.randint(1, 400)
        k = rnd.randint(1, 5)
        text = [rnd.randrange(k) if rnd.random() > 0.1 else T for _ in range(n)]
        assert repair_compress(text, T, k) == naive_repair(text, T, k)


def test_matches_naive_oracle_on_ten_thousand_symbols(words_small):
    d = rp_build(words_small[:800])
    joined = b"\0".join(words_small[:800]) + b"\0"
    assert len(joined) <= 10_000
    code = {c: k for k, c in enumerate(sorted(set(joined) - {0}))}
    text = [code[c] if c else T for c in joined]
    rules, seq = naive_repair(text, T, len(code))
    assert d.rules == rules
    assert d.runs.total_symbols + d.n == len(seq)


def test_no_repeated_pair_remains(urls_small):
    d = rp_build(urls_small[:500])
    seq = [s for i in range(1, d.n + 1) for s in d.runs.access(i) + [T]]
    pairs = [(a, b) for a, b in zip(seq, seq[1:]) if a != T and b != T]
    assert len(pairs) == len(set(pairs))


def test_grammar_validity(corpora_small):
    for strings in corpora_small.values():
        d = rp_build(strings)
        d.check_grammar()
        for k in range(d.r):
            y = d.expand(d.sigma + k)
            assert len(y) >= 2 and all(0 <= t < d.sigma for t in y)
        # every run expands to exactly its string: no terminator inside a rule
        assert [d.extract(i) for i in range(1, d.n + 1)] == strings
        assert d.width == max(1, (d.sigma + d.r - 1).bit_length())


def test_cyclic_grammar_rejected():
    d = rp_build([b"abab", b"abc"])
    d.rules = [(d.sigma, 0)] + d.rules[1:]
    with pytest.raises(FormatError):
        d.check_grammar()


def test_oracle_agreement(corpora_small):
    for strings in corpora_small.values():
        d = rp_build(strings)
        assert [d.locate(s) for s in strings] == list(range(1, len(strings) + 1))
        assert all(d.locate(q) == -1 for q in held_out(strings, 1000))
        assert d.extract(1) == min(strings)
        assert d.extract(0) is None and d.extract(d.n + 1) is None
        oracle = SortedOracle(strings)
        for q in (strings[3][:6], strings[1500][:3], b"zzz", b""):
            assert list(d.locate_prefix(q)) == list(oracle.prefix_range(q))


def test_comparison_expands_lazily():
    # candidate shares only its first terminal with the pattern
    strings = [b"a" + bytes([98 + k % 20]) * 30 + bytes([65 + k]) for k in range(20)]
    strings.sort()
    d = rp_build(strings)
    codes = d._codes(b"aA")  # "A" occurs, never in second place
    for i in range(1, d.n + 1):
        run = d.runs.access(i)
        first = d.expand(run[0])
        sign, steps = d._compare(i, codes)
        assert sign != 0
        # the first symbol's yield decides, or one more symbol does
        assert steps <= (1 if len(first) > 1 else 2)


def test_build_errors():
    with pytest.raises(BuildError):
        rp_build([b"b", b"a"])
    with pytest.raises(BuildError):
        rp_build([b"a", b""])
    with pytest.raises(BuildError):
        rp_build([])
    with pytest.raises(BuildError):
        rp_build([b"a\0"])


def test_serialization(urls_small):
    d = rp_build(urls_small[:800])
    w = Writer()
    d.write(w)
    data = w.getvalue()
    back = RePairDictionary.read(Reader(data))
    out = Writer()
    back.write(out)
    assert out.getvalue() == data
    assert [back.extract(i) for i in range(1, 801)] == urls_small[:800]
