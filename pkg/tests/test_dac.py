import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csdict._io import Reader, Writer
from csdict.dac import DacArray, dac_access, dac_access_prefix, dac_build
from csdict.errors import FormatError, ParameterError


def test_two_sequence_example():
    d = dac_build([[5], [7, 8]], 4)
    a1, b1 = d.level(1)
    a2, b2 = d.level(2)
    assert a1 == [5, 7] and b1.to_list() == [0, 1]
    assert a2 == [8] and b2.to_list() == [0]
    assert dac_access(d, 1) == [5]
    assert dac_access(d, 2) == [7, 8]


def test_single_level_and_uniform_lengths():
    d = dac_build([[1], [2], [3]], 2)
    assert d.levels == 1 and d.level(1)[1].to_list() == [0, 0, 0]
    d = dac_build([[k, k + 1, k + 2] for k in range(10)], 5)
    assert d.levels == 3
    assert all(len(d.level(k)[0]) == 10 for k in (1, 2, 3))
    assert dac_build([[9, 9, 1]], 4).access(1) == [9, 9, 1]


def test_errors():
    with pytest.raises(ParameterError):
        dac_build([[1], []], 4)
    with pytest.raises(ParameterError):
        dac_build([[16]], 4)
    with pytest.raises(ParameterError):
        dac_build([], 4)
    d = dac_build([[1]], 1)
    with pytest.raises(IndexError):
        d.access(2)
    with pytest.raises(IndexError):
        d.access(0)


@given(st.lists(st.lists(st.integers(0, 255), min_size=1, max_size=12), min_size=1, max_size=60))
@settings(max_examples=200, deadline=None)
def test_round_trip(seqs):
    d = dac_build(seqs, 8)
    assert [d.access(i) for i in range(1, len(seqs) + 1)] == seqs
    assert d.total_symbols == sum(map(len, seqs))
    # |A_{k+1}| = ones(B_k)
    for k in range(1, d.levels):
        assert len(d.level(k + 1)[0]) == d.level(k)[1].ones


def test_access_prefix_against_copy():
    rnd = random.Random(5)
    seqs = [[rnd.randrange(1000) for _ in range(rnd.randint(1, 20))] for _ in range(10_000)]
    d = dac_build(seqs, 10)
    for _ in range(5000):
        i = rnd.randint(1, len(seqs))
        limit = rnd.randint(0, 25)
        assert dac_access_prefix(d, i, limit) == seqs[i - 1][:limit]
    assert d.access_prefix(3, 1) == seqs[2][:1]
    assert d.access_prefix(3, 100) == seqs[2]


def test_bitmap_overhead():
    rnd = random.Random(8)
    seqs = [[rnd.randrange(1 << 16) for _ in range(rnd.choice([1, 1, 2, 3, 5, 9]))] for _ in range(50_000)]
    d = dac_build(seqs, 16)
    # one RG bitmap per level: 1.25 bits per entry plus word and sample rounding
    assert d.bitmap_bits() <= 1.25 * d.total_symbols + 96 * d.levels
    assert d.bitmap_bits() / d.total_symbols <= 1.25 + 0.01


def test_serialization():
    d = dac_build([[3, 1], [2], [7, 7, 7, 7]], 3)
    w = Writer()
    d.write(w)
    data = w.getvalue()
    back = DacArray.read(Reader(data))
    assert [back.access(i) for i in (1, 2, 3)] == [[3, 1], [2], [7, 7, 7, 7]]
    out = Writer()
    back.write(out)
    assert out.getvalue() == data
    with pytest.raises(FormatError):
        DacArray.read(Reader(data[:-5]))
