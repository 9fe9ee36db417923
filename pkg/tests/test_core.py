import io
import random

import pytest

from csdict import core
from csdict.core import (BACKEND_NAMES, HASH_ORDER, SORTED_RANK, TABLE_CELL, ReferenceDictionary,
                         build, from_bytes, load, save, space_report)
from csdict.errors import BuildError, FormatError, ParameterError

from conftest import held_out

SORTED = [b for b in BACKEND_NAMES if core.BACKENDS[b].sorted]


def test_registry():
    assert len(BACKEND_NAMES) == 11
    assert sorted(b.tag for b in core.BACKENDS.values()) == list(range(11))
    assert {core.BACKENDS[b].id_semantics for b in BACKEND_NAMES} == {SORTED_RANK, HASH_ORDER, TABLE_CELL}
    assert SORTED == ["PFC", "HTFC", "FMIndexSSA", "FMIndexSSA*", "RePair"]
    with pytest.raises(ParameterError):
        core.get_backend("Trie")


@pytest.mark.parametrize("backend", BACKEND_NAMES)
def test_single_string(backend):
    d = build([b"lonely"], backend)
    i = d.locate(b"lonely")
    assert i >= 1 and d.extract(i) == b"lonely"
    assert d.locate(b"lonel") == -1 and d.locate(b"") == -1
    assert d.n == 1 and d.original_plain_bytes == 7


def test_input_validation():
    with pytest.raises(BuildError):
        build([], "PFC")
    with pytest.raises(BuildError):
        build([b"a", b"b\nc"], "PFC")
    with pytest.raises(BuildError):
        build([b"a\0"], "HashDH")
    with pytest.raises(BuildError):
        build([b"a", b""], "RePair")
    with pytest.raises(ParameterError):
        build([b"a"], "HashDH", {"alpha": 1.5})
    with pytest.raises(ParameterError):
        build([b"a"], "PFC", {"bucket": 1})
    with pytest.raises(ParameterError):
        build([b"a"], "PFC", {"depth": 3})
    with pytest.raises(ParameterError):
        build([b"a"], "FMIndexSSA", {"x": 0})


def test_dedup_and_str_input():
    d = build(["b", "a", "b", "c"], "HTFC")
    assert d.n == 3 and d.extract(1) == b"a" and d.locate("c") == 3
    assert d.original_plain_bytes == 6


def test_cross_backend_equivalence(corpora_small):
    for strings in corpora_small.values():
        ref = ReferenceDictionary(strings)
        queries = random.Random(2).sample(strings, 300) + held_out(strings, 300)
        expected = [ref.locate(q) > 0 for q in queries]
        for backend in BACKEND_NAMES:
            d = build(strings, backend)
            ids = [d.locate(q) for q in queries]
            assert [i > 0 for i in ids] == expected, backend
            assert all(d.extract(i) == q for i, q in zip(ids, queries) if i > 0)
            if d.backend.sorted:
                assert ids == [ref.locate(q) for q in queries]


@pytest.mark.parametrize("backend", ["HashBDH", "HashBLP", "HashBBDH", "HashBBLP", "HashDH"])
def test_hash_ids_bijective(backend, words_small):
    d = build(words_small, backend)
    ids = sorted(d.locate(s) for s in words_small)
    assert len(set(ids)) == len(ids)
    if d.id_semantics == HASH_ORDER:
        assert ids == list(range(1, d.n + 1))
    else:
        assert ids[-1] <= d.structure.m


def test_reference_dictionary(words_small):
    ref = ReferenceDictionary(words_small)
    assert ref.space_report() == (ref.original_plain_bytes, 100.0)
    assert ref.extract(1) == words_small[0] and ref.extract(0) is None
    assert ref.locate(words_small[5]) == 6
    assert list(ref.locate_prefix(b"")) == list(range(1, len(words_small) + 1))


@pytest.mark.parametrize("backend", SORTED)
def test_locate_prefix(backend, urls_small):
    d = build(urls_small, backend)
    ref = ReferenceDictionary(urls_small)
    for q in (b"http://www.", urls_small[100][:30], urls_small[-1], b"ftp:"):
        assert list(d.locate_prefix(q)) == list(ref.locate_prefix(q))


def test_prefix_not_supported_on_hash():
    with pytest.raises(NotImplementedError):
        build([b"a"], "HashBDH").locate_prefix(b"a")


@pytest.mark.parametrize("backend", BACKEND_NAMES)
def test_save_load_round_trip(backend, words_small, tmp_path):
    d = build(words_small, backend)
    data = d.to_bytes()
    path = tmp_path / "d.csd"
    save(d, path)
    assert path.read_bytes() == data
    back = load(path)
    assert back.to_bytes() == data
    assert back.backend is d.backend and back.params == d.params and back.n == d.n
    queries = words_small + held_out(words_small, 500)
    assert [back.locate(q) for q in queries] == [d.locate(q) for q in queries]
    assert [back.extract(i) for i in range(0, 2100, 3)] == [d.extract(i) for i in range(0, 2100, 3)]
    buf = io.BytesIO()
    d.save(buf)
    assert load(io.BytesIO(buf.getvalue())).to_bytes() == data


@pytest.mark.parametrize("backend", BACKEND_NAMES)
def test_deterministic_builds(backend, urls_small):
    shuffled = list(urls_small)
    random.Random(4).shuffle(shuffled)
    assert build(urls_small, backend).to_bytes() == build(shuffled, backend).to_bytes()


def test_space_report(words_small):
    d = build(words_small, "HTFC")
    size, percent = space_report(d)
    assert size == len(d.to_bytes())
    assert percent == pytest.approx(100 * size / sum(len(s) + 1 for s in words_small))


def test_container_corruption(words_small):
    data = build(words_small, "PFC").to_bytes()
    assert data[:4] == b"CSD1" and data[4:6] == b"\x01\x00" and data[6] == 6
    cases = {
        "magic": b"CSD2" + data[4:],
        "version": data[:4] + b"\x07\x00" + data[6:],
        "truncated": data[:-10],
        "crc": data[:100] + bytes([data[100] ^ 0x40]) + data[101:],
        "trailing": data + b"\0",
        "empty": b"",
    }
    offsets = {}
    for name, bad in cases.items():
        with pytest.raises(FormatError) as err:
            from_bytes(bad)
        offsets[name] = err.value.offset
        assert "offset" in str(err.value)
    assert offsets["magic"] == 0 and offsets["version"] == 4
    assert offsets["truncated"] == len(data) - 10


def test_unknown_tag_with_valid_crc(words_small):
    import zlib
    data = bytearray(build(words_small[:10], "PFC").to_bytes()[:-4])
    data[6] = 42
    data += zlib.crc32(bytes(data)).to_bytes(4, "little")
    with pytest.raises(FormatError, match="backend tag"):
        from_bytes(bytes(data))
