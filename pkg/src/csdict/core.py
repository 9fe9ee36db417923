"""Uniform dictionary handle over every backend, plus the file container.

Container layout (little-endian)::

    "CSD1" | version u16 | backend tag u8 | params block | payload | CRC32 u32

The params block holds ``n``, the plain-text baseline size, ``alpha``,
``x``, the bucket size (unused fields are zero) and the payload length,
so a cut-short file is reported as truncated rather than as a CRC
failure. The CRC covers every preceding byte.
"""

import zlib
from bisect import bisect_left
from dataclasses import dataclass, field

from ._io import FormatError, Reader, Writer
from .errors import BuildError, ParameterError
from .fcdict import HTFC, PFC, FrontCodedDictionary, prefix_successor
from .fmdict import SSA, SSA_STAR, FMIndexDictionary
from .hashdict import DOUBLE, HASH, HASHB, HASHBB, LINEAR, HashDictionary
from .rpdict import RePairDictionary

MAGIC = b"CSD1"
FORMAT_VERSION = 1

SORTED_RANK = "sorted-rank"
HASH_ORDER = "hash-order"
TABLE_CELL = "table-cell"

DEFAULT_PARAMS = {"alpha": 0.8, "x": 0.25, "bucket": 8}


@dataclass(frozen=True)
class Backend:
    name: str
    tag: int
    family: str
    id_semantics: str
    params: tuple
    options: dict = field(default_factory=dict)

    @property
    def sorted(self):
        return self.id_semantics == SORTED_RANK


BACKENDS = {}


def _register(*args, **options):
    b = Backend(*args, options=options)
    BACKENDS[b.name] = b


_register("HashDH", 0, "hash", TABLE_CELL, ("alpha",), variant=HASH, policy=DOUBLE)
_register("HashLP", 1, "hash", TABLE_CELL, ("alpha",), variant=HASH, policy=LINEAR)
_register("HashBDH", 2, "hash", HASH_ORDER, ("alpha", "x"), variant=HASHB, policy=DOUBLE)
_register("HashBLP", 3, "hash", HASH_ORDER, ("alpha", "x"), variant=HASHB, policy=LINEAR)
_register("HashBBDH", 4, "hash", HASH_ORDER, ("alpha", "x"), variant=HASHBB, policy=DOUBLE)
_register("HashBBLP", 5, "hash", HASH_ORDER, ("alpha", "x"), variant=HASHBB, policy=LINEAR)
_register("PFC", 6, "fc", SORTED_RANK, ("bucket",), kind=PFC)
_register("HTFC", 7, "fc", SORTED_RANK, ("bucket",), kind=HTFC)
_register("FMIndexSSA", 8, "fm", SORTED_RANK, ("x",), variant=SSA)
_register("FMIndexSSA*", 9, "fm", SORTED_RANK, ("x",), variant=SSA_STAR)
_register("RePair", 10, "rp", SORTED_RANK, ())

BACKEND_NAMES = tuple(BACKENDS)
_BY_TAG = {b.tag: b for b in BACKENDS.values()}
_READERS = {"hash": HashDictionary, "fc": FrontCodedDictionary,
            "fm": FMIndexDictionary, "rp": RePairDictionary}


def get_backend(name):
    try:
        return BACKENDS[name]
    except KeyError:
        raise ParameterError(f"unknown backend {name!r}; choose from {', '.join(BACKEND_NAMES)}")


def plain_size(strings):
    """Bytes of the strings concatenated with one terminator each."""
    return sum(len(s) + 1 for s in strings)


def prepare_strings(source):
    """Validate, deduplicate and sort the input strings."""
    out = set()
    for k, s in enumerate(source):
        if isinstance(s, str):
            s = s.encode("utf-8")
        s = bytes(s)
        if not s:
            raise BuildError(f"string {k + 1} is empty")
        if 0 in s or 10 in s:
            raise BuildError(f"string {k + 1} contains a reserved byte (0x00 or 0x0A)")
        out.add(s)
    if not out:
        raise BuildError("cannot build a dictionary over zero strings")
    return sorted(out)


class ReferenceDictionary:
    """Sorted array with binary search; the oracle for every backend."""

    def __init__(self, source):
        self.strings = prepare_strings(source)
        self.n = len(self.strings)
        self.original_plain_bytes = plain_size(self.strings)

    def locate(self, p):
        k = bisect_left(self.strings, p)
        return k + 1 if k < self.n and self.strings[k] == p else -1

    def extract(self, i):
        return self.strings[i - 1] if isinstance(i, int) and 1 <= i <= self.n else None

    def locate_prefix(self, q):
        lo = bisect_left(self.strings, q) + 1
        succ = prefix_successor(q)
        hi = self.n if succ is None else bisect_left(self.strings, succ)
        return range(lo, max(lo, hi + 1))

    def __contains__(self, p):
        return self.locate(p) > 0

    def size_bytes(self):
        return self.original_plain_bytes

    def space_report(self):
        return self.size_bytes(), 100.0


def _resolve_params(backend, params):
    params = dict(params or {})
    unknown = set(params) - set(DEFAULT_PARAMS)
    if unknown:
        raise ParameterError(f"unknown parameters: {', '.join(sorted(unknown))}")
    resolved = {k: params.get(k, DEFAULT_PARAMS[k]) for k in backend.params}
    if "alpha" in resolved:
        resolved["alpha"] = float(resolved["alpha"])
    if "x" in resolved:
        resolved["x"] = float(resolved["x"])
    if "bucket" in resolved:
        b = resolved["bucket"]
        if isinstance(b, float) and b.is_integer():
            b = int(b)
        resolved["bucket"] = b
    return resolved


def _construct(backend, strings, params):
    o = backend.options
    if backend.family == "hash":
        return HashDictionary(strings, o["variant"], o["policy"], params["alpha"],
                              params.get("x", DEFAULT_PARAMS["x"]))
    if backend.family == "fc":
        return FrontCodedDictionary(strings, o["kind"], params["bucket"])
    if backend.family == "fm":
        return FMIndexDictionary(strings, o["variant"], params["x"])
    return RePairDictionary(strings)


class DictionaryHandle:
    """A built, immutable dictionary answering locate/extract."""

    def __init__(self, backend, params, structure, n, original_plain_bytes):
        self.backend = backend
        self.params = params
        self.structure = structure
        self.n = n
        self.original_plain_bytes = original_plain_bytes

    @property
    def name(self):
        return self.backend.name

    @property
    def id_semantics(self):
        return self.backend.id_semantics

    @property
    def supports_prefix(self):
        return self.backend.sorted

    def locate(self, p):
        if isinstance(p, str):
            p = p.encode("utf-8")
        return self.structure.locate(bytes(p))

    def extract(self, i):
        return self.structure.extract(i)

    def locate_prefix(self, q):
        """Contiguous id range of strings starting with ``q`` (sorted backends)."""
        if not self.supports_prefix:
            raise NotImplementedError(f"{self.name} does not support prefix search")
        if isinstance(q, str):
            q = q.encode("utf-8")
        return self.structure.locate_prefix(bytes(q))

    def to_bytes(self):
        w = Writer()
        w.raw(MAGIC)
        w.u16(FORMAT_VERSION)
        w.u8(self.backend.tag)
        w.u64(self.n)
        w.u64(self.original_plain_bytes)
        w.f64(self.params.get("alpha", 0.0))
        w.f64(self.params.get("x", 0.0))
        w.u64(self.params.get("bucket", 0))
        payload = Writer()
        self.structure.write(payload)
        payload = payload.getvalue()
        w.u64(len(payload))
        w.raw(payload)
        body = w.getvalue()
        return body + zlib.crc32(body).to_bytes(4, "little")

    def size_bytes(self):
        return len(self.to_bytes())

    def space_report(self):
        size = self.size_bytes()
        return size, 100.0 * size / self.original_plain_bytes

    def save(self, sink):
        data = self.to_bytes()
        if hasattr(sink, "write"):
            sink.write(data)
        else:
            with open(sink, "wb") as fh:
                fh.write(data)

    def __repr__(self):
        return f"DictionaryHandle({self.name}, n={self.n}, params={self.params})"


def build(source, backend, params=None):
    """Build a dictionary over ``source`` with the named backend."""
    b = get_backend(backend) if isinstance(backend, str) else backend
    resolved = _resolve_params(b, params)
    strings = prepare_strings(source)
    structure = _construct(b, strings, resolved)
    return DictionaryHandle(b, resolved, structure, len(strings), plain_size(strings))


def space_report(handle):
    return handle.space_report()


_HEADER_SIZE = 4 + 2 + 1 + 6 * 8


def from_bytes(data):
    data = bytes(data)
    if not MAGIC.startswith(data[:4]):
        raise FormatError(f"bad magic {data[:4]!r}", 0)
    if len(data) >= 6 and int.from_bytes(data[4:6], "little") != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {int.from_bytes(data[4:6], 'little')}", 4)
    if len(data) < _HEADER_SIZE + 4:
        raise FormatError(f"truncated container: {len(data)} bytes is shorter than the header", len(data))
    r = Reader(data, 6)
    tag = r.u8()
    n, plain = r.u64(), r.u64()
    alpha, x, bucket = r.f64(), r.f64(), r.u64()
    size = r.u64()
    expected = _HEADER_SIZE + size + 4
    if len(data) < expected:
        raise FormatError(f"truncated container: expected {expected} bytes, got {len(data)}", len(data))
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes after the checksum", expected)
    body, crc = data[:-4], int.from_bytes(data[-4:], "little")
    if zlib.crc32(body) != crc:
        raise FormatError("CRC32 mismatch", len(body))
    if tag not in _BY_TAG:
        raise FormatError(f"unknown backend tag {tag}", 6)
    b = _BY_TAG[tag]
    r = Reader(body, _HEADER_SIZE)
    stored = {"alpha": alpha, "x": x, "bucket": bucket}
    params = {k: stored[k] for k in b.params}
    at = r.pos
    structure = _READERS[b.family].read(r)
    if not r.at_end():
        raise FormatError("trailing bytes after payload", r.pos)
    if getattr(structure, "n", n) != n:
        raise FormatError("payload string count disagrees with header", at)
    return DictionaryHandle(b, params, structure, n, plain)


def load(source):
    """Load a handle from a path, a binary file object, or bytes."""
    if isinstance(source, (bytes, bytearray, memoryview)):
        return from_bytes(source)
    if hasattr(source, "read"):
        return from_bytes(source.read())
    with open(source, "rb") as fh:
        return from_bytes(fh.read())


def save(handle, sink):
    handle.save(sink)
