import pytest

from csdict.corpus import KINDS, QGRAM, generate, mean_adjacent_lcp


@pytest.mark.parametrize("kind", KINDS)
def test_sorted_unique_deterministic(kind):
    a = generate(kind, 3000, 5)
    assert len(a) == 3000 and a == sorted(set(a))
    assert a == generate(kind, 3000, 5)
    assert a != generate(kind, 3000, 6)
    assert all(s and 0 not in s and 10 not in s for s in a)


def test_dna_qgrams():
    a = generate("dna-qgrams", 5000, 1)
    assert all(len(s) == QGRAM and set(s) <= set(b"ACGT") for s in a)


def test_url_prefix_sharing():
    assert mean_adjacent_lcp(generate("urls", 10_000, 2)) > 10


def test_bad_arguments():
    with pytest.raises(ValueError):
        generate("names", 10)
    with pytest.raises(ValueError):
        generate("urls", 0)
