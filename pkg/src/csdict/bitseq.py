"""Bitmaps with rank and select.

Two layouts are provided:

``RG``
    The plain bitmap plus a 32-bit absolute rank counter every
    ``K = ceil(32/x)`` bits, for ``(1+x)n`` bits in total.
``RRR``
    15-bit blocks, each stored as a 4-bit class (its popcount) and an
    enumerative offset of ``ceil(log2 C(15, class))`` bits, with a rank
    sample and an offset pointer every few blocks.

Positions are 1-based (``B[1..n]``); ``rank(b, i)`` counts bit ``b`` in the
prefix of length ``i``, so ``rank(b, 0) == 0``.
"""

from bisect import bisect_left
from fractions import Fraction
from math import ceil, comb

import numpy as np

from ._io import FormatError, Reader, Writer, pack_ints, packed_size, unpack_ints
from .errors import ParameterError

RG = 0
RRR = 1
LAYOUT_NAMES = {RG: "RG", RRR: "RRR"}

RRR_BLOCK = 15
_SAMPLE_BITS = 32


def _fraction(x):
    try:
        fx = Fraction(x).limit_denominator(1_000_000)
    except (TypeError, ValueError):
        raise ParameterError(f"overhead parameter x must be a number, got {x!r}")
    if not 0 < fx <= 1:
        raise ParameterError(f"overhead parameter x must lie in (0, 1], got {x}")
    return fx


def _as_bits(bits):
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(bits)
    arr = arr.astype(np.uint8, copy=False).ravel()
    if arr.size == 0:
        raise ParameterError("cannot build a bit sequence over zero bits")
    if arr.max(initial=0) > 1:
        raise ParameterError("bit values must be 0 or 1")
    return arr


def _kth_one(word, k):
    """0-based index of the k-th (1-based) set bit of ``word``."""
    for _ in range(k - 1):
        word &= word - 1
    return (word & -word).bit_length() - 1


class BitSequence:
    """Common query surface; concrete layouts implement the primitives."""

    layout = None
    n = 0
    ones = 0
    x = 1.0

    def __len__(self):
        return self.n

    def rank(self, b, i):
        if not 0 <= i <= self.n:
            raise IndexError(f"rank position {i} outside [0, {self.n}]")
        r1 = self.rank1(i)
        return r1 if b else i - r1

    def select(self, b, j):
        total = self.ones if b else self.n - self.ones
        if not 1 <= j <= total:
            raise IndexError(f"no {j}-th occurrence of bit {b} (have {total})")
        return self.select1(j) if b else self.select0(j)

    def access(self, i):
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} outside [1, {self.n}]")
        return self.access_rank(i)[0]

    def __getitem__(self, i):
        return self.access(i)

    def to_list(self):
        return [self.access_rank(i)[0] for i in range(1, self.n + 1)]

    def _write_header(self, w):
        w.u8(self.layout)
        w.u64(self.n)
        w.u64(self.ones)
        w.f64(float(self.x))

    def serialize(self):
        w = Writer()
        self.write(w)
        return w.getvalue()


class RGBitSequence(BitSequence):
    layout = RG

    def __init__(self, bits, x=0.25):
        fx = _fraction(x)
        arr = _as_bits(bits)
        self.x = float(fx)
        self.n = int(arr.size)
        self.block_bits = ceil(_SAMPLE_BITS / fx)
        self._init_blocks(arr)
        counts = [blk.bit_count() for blk in self._blocks]
        self._samples = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64).tolist()
        self.ones = int(sum(counts))

    def _init_blocks(self, arr):
        k = self.block_bits
        nblocks = -(-self.n // k)
        padded = np.zeros(nblocks * k, dtype=np.uint8)
        padded[:self.n] = arr
        rows = np.packbits(padded.reshape(nblocks, k), axis=1, bitorder="little")
        self._blocks = [int.from_bytes(row.tobytes(), "little") for row in rows]
        self._masks = [(1 << r) - 1 for r in range(k + 1)]
        self._raw_bits = arr

    def rank1(self, i):
        if i >= self.n:
            return self.ones
        s, r = divmod(i, self.block_bits)
        return self._samples[s] + (self._blocks[s] & self._masks[r]).bit_count()

    def access(self, i):
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} outside [1, {self.n}]")
        s, r = divmod(i - 1, self.block_bits)
        return (self._blocks[s] >> r) & 1

    def access_rank(self, i):
        """Return ``(B[i], rank_{B[i]}(B, i))`` in a single block visit."""
        s, r = divmod(i - 1, self.block_bits)
        blk = self._blocks[s]
        ones = self._samples[s] + (blk & self._masks[r + 1]).bit_count()
        if (blk >> r) & 1:
            return 1, ones
        return 0, i - ones

    def select1(self, j):
        s = bisect_left(self._samples, j) - 1
        return s * self.block_bits + _kth_one(self._blocks[s], j - self._samples[s]) + 1

    def select0(self, j):
        k = self.block_bits
        samples = self._samples
        s = bisect_left(range(len(samples)), j, key=lambda t: t * k - samples[t]) - 1
        inverted = ~self._blocks[s] & self._masks[k]
        return s * k + _kth_one(inverted, j - (s * k - samples[s])) + 1

    def size_in_bits(self):
        """Payload bits: the bitmap in 64-bit words plus the rank samples."""
        return 64 * (-(-self.n // 64)) + _SAMPLE_BITS * len(self._blocks)

    def write(self, w):
        self._write_header(w)
        words = np.zeros(64 * (-(-self.n // 64)), dtype=np.uint8)
        words[:self.n] = self._raw_bits
        w.raw(np.packbits(words, bitorder="little").tobytes())
        w.raw(np.asarray(self._samples, dtype="<u4").tobytes())

    @classmethod
    def _read_body(cls, r, n, ones, x):
        self = cls.__new__(cls)
        fx = _fraction(x)
        self.x = float(fx)
        self.n = n
        self.block_bits = ceil(_SAMPLE_BITS / fx)
        raw = r.raw(8 * (-(-n // 64)))
        arr = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), count=n, bitorder="little")
        self._init_blocks(arr)
        start = r.pos
        samples = np.frombuffer(r.raw(4 * len(self._blocks)), dtype="<u4")
        self._samples = samples.astype(np.int64).tolist()
        self.ones = ones
        if int(arr.sum()) != ones:
            raise FormatError("RG bitmap popcount disagrees with header", start)
        return self


def _rrr_tables():
    patterns = [[] for _ in range(RRR_BLOCK + 1)]
    index = np.zeros(1 << RRR_BLOCK, dtype=np.int64)
    for v in range(1 << RRR_BLOCK):
        c = v.bit_count()
        index[v] = len(patterns[c])
        patterns[c].append(v)
    offlen = [(comb(RRR_BLOCK, c) - 1).bit_length() for c in range(RRR_BLOCK + 1)]
    return patterns, index, offlen


_PATTERNS, _PATTERN_INDEX, _OFFLEN = _rrr_tables()
_OFFLEN_TABLE = bytes(_OFFLEN + [0] * (256 - len(_OFFLEN)))
_ZEROS_TABLE = bytes([RRR_BLOCK - c for c in range(RRR_BLOCK + 1)] + [0] * (256 - RRR_BLOCK - 1))


class RRRBitSequence(BitSequence):
    layout = RRR

    def __init__(self, bits, x=0.25):
        fx = _fraction(x)
        arr = _as_bits(bits)
        self.x = float(fx)
        self.n = int(arr.size)
        self.blocks_per_sample = self._sample_rate(fx)
        nblocks = -(-self.n // RRR_BLOCK)
        padded = np.zeros(nblocks * RRR_BLOCK, dtype=np.int64)
        padded[:self.n] = arr
        mat = padded.reshape(nblocks, RRR_BLOCK)
        classes = mat.sum(axis=1)
        values = mat @ (1 << np.arange(RRR_BLOCK, dtype=np.int64))
        offsets = _PATTERN_INDEX[values]
        lens = np.asarray(_OFFLEN, dtype=np.int64)[classes]
        total = int(lens.sum())
        starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
        owner = np.repeat(np.arange(nblocks), lens)
        within = np.arange(total) - np.repeat(starts, lens)
        stream = ((offsets[owner] >> within) & 1).astype(np.uint8)
        self._set_payload(classes.astype(np.uint8).tobytes(),
                          np.packbits(stream, bitorder="little").tobytes(), total)

    @staticmethod
    def _sample_rate(fx):
        # one 64-bit sample (rank + offset pointer) per S blocks keeps samples <= x*n
        return max(1, ceil(2 * _SAMPLE_BITS / (RRR_BLOCK * fx)))

    def _set_payload(self, classes, offbytes, offbits):
        self._classes = classes
        self._offbits = offbits
        self._off = offbytes + b"\0\0\0"
        s = self.blocks_per_sample
        cls = np.frombuffer(classes, dtype=np.uint8).astype(np.int64)
        lens = np.asarray(_OFFLEN, dtype=np.int64)[cls]
        cum_ones = np.concatenate(([0], np.cumsum(cls)))
        cum_ptr = np.concatenate(([0], np.cumsum(lens)))
        nblocks = len(classes)
        idx = np.arange(0, nblocks, s)
        self._rsamp = cum_ones[idx].tolist()
        self._psamp = cum_ptr[idx].tolist()
        self.ones = int(cum_ones[-1])
        self._masks = [(1 << r) - 1 for r in range(RRR_BLOCK + 1)]

    def _pattern(self, c, ptr):
        if c == 0:
            return 0
        if c == RRR_BLOCK:
            return (1 << RRR_BLOCK) - 1
        raw = int.from_bytes(self._off[ptr >> 3:(ptr >> 3) + 3], "little")
        return _PATTERNS[c][(raw >> (ptr & 7)) & ((1 << _OFFLEN[c]) - 1)]

    def _locate_block(self, b):
        """Ones before block ``b`` and the bit pointer of its offset."""
        sb = b // self.blocks_per_sample
        a = sb * self.blocks_per_sample
        span = self._classes[a:b]
        return (self._rsamp[sb] + sum(span),
                self._psamp[sb] + sum(span.translate(_OFFLEN_TABLE)))

    def rank1(self, i):
        if i >= self.n:
            return self.ones
        b, r = divmod(i, RRR_BLOCK)
        sb = b // self.blocks_per_sample
        a = sb * self.blocks_per_sample
        span = self._classes[a:b]
        ones = self._rsamp[sb] + sum(span)
        c = self._classes[b]
        if r == 0 or c == 0:
            return ones
        if c == RRR_BLOCK:
            return ones + r
        ptr = self._psamp[sb] + sum(span.translate(_OFFLEN_TABLE))
        return ones + (self._pattern(c, ptr) & self._masks[r]).bit_count()

    def access_rank(self, i):
        b, r = divmod(i - 1, RRR_BLOCK)
        ones, ptr = self._locate_block(b)
        pat = self._pattern(self._classes[b], ptr)
        ones += (pat & self._masks[r + 1]).bit_count()
        if (pat >> r) & 1:
            return 1, ones
        return 0, i - ones

    def _select(self, j, bit):
        s = self.blocks_per_sample
        if bit:
            nsb = bisect_left(self._rsamp, j) - 1
            before = self._rsamp[nsb]
        else:
            per = s * RRR_BLOCK
            nsb = bisect_left(range(len(self._rsamp)), j,
                              key=lambda t: t * per - self._rsamp[t]) - 1
            before = nsb * per - self._rsamp[nsb]
        b = nsb * s
        ptr = self._psamp[nsb]
        table = None if bit else _ZEROS_TABLE
        while True:
            c = self._classes[b]
            cnt = c if bit else table[c]
            if before + cnt >= j:
                break
            before += cnt
            ptr += _OFFLEN[c]
            b += 1
        pat = self._pattern(c, ptr)
        if not bit:
            pat = ~pat & self._masks[RRR_BLOCK]
        return b * RRR_BLOCK + _kth_one(pat, j - before) + 1

    def select1(self, j):
        return self._select(j, 1)

    def select0(self, j):
        return self._select(j, 0)

    def size_in_bits(self):
        """Classes (4 bits/block), offsets, and 2x32-bit samples."""
        return (4 * len(self._classes) + self._offbits
                + 2 * _SAMPLE_BITS * len(self._rsamp))

    def write(self, w):
        self._write_header(w)
        w.u64(self._offbits)
        w.raw(pack_ints(np.frombuffer(self._classes, dtype=np.uint8), 4))
        w.raw(self._off[:(self._offbits + 7) // 8])
        w.raw(np.asarray(self._rsamp, dtype="<u4").tobytes())
        w.raw(np.asarray(self._psamp, dtype="<u4").tobytes())

    @classmethod
    def _read_body(cls, r, n, ones, x):
        self = cls.__new__(cls)
        fx = _fraction(x)
        self.x = float(fx)
        self.n = n
        self.blocks_per_sample = self._sample_rate(fx)
        nblocks = -(-n // RRR_BLOCK)
        offbits = r.u64()
        start = r.pos
        classes = unpack_ints(r.raw(packed_size(4, nblocks)), 4, nblocks)
        if classes.size and classes.max() > RRR_BLOCK:
            raise FormatError("RRR class above block size", start)
        offbytes = r.raw((offbits + 7) // 8)
        self._set_payload(classes.astype(np.uint8).tobytes(), offbytes, offbits)
        nsamp = len(self._rsamp)
        r.raw(8 * nsamp)  # samples are recomputed; skip the stored copy
        if self.ones != ones:
            raise FormatError("RRR popcount disagrees with header", start)
        return self


_LAYOUTS = {RG: RGBitSequence, RRR: RRRBitSequence}


def build_bits(bits, layout=RG, x=0.25):
    """Build a rank/select structure over ``bits`` in the given layout.

    ``layout`` is ``RG``/``RRR`` or their names; ``x`` is the sampling
    overhead knob in ``(0, 1]``.
    """
    if isinstance(layout, str):
        try:
            layout = {"RG": RG, "RRR": RRR}[layout.upper()]
        except KeyError:
            raise ParameterError(f"unknown bitmap layout {layout!r}")
    if layout not in _LAYOUTS:
        raise ParameterError(f"unknown bitmap layout {layout!r}")
    return _LAYOUTS[layout](bits, x)


def read_bits(r):
    """Deserialize a bit sequence written by ``BitSequence.write``."""
    start = r.pos
    layout = r.u8()
    if layout not in _LAYOUTS:
        raise FormatError(f"unknown bitmap layout tag {layout}", start)
    n, ones, x = r.u64(), r.u64(), r.f64()
    if n == 0:
        raise FormatError("empty bit sequence", start)
    try:
        return _LAYOUTS[layout]._read_body(r, n, ones, x)
    except ParameterError as exc:
        raise FormatError(str(exc), start)


def load_bits(data):
    return read_bits(Reader(data))


def rrr_bound_bits(n, m, x):
    """``log2 C(n, m) + (4/15 + x) n``: the practical RRR space bound."""
    from math import lgamma, log
    log2_binom = (lgamma(n + 1) - lgamma(m + 1) - lgamma(n - m + 1)) / log(2)
    return log2_binom + (4 / 15 + x) * n
