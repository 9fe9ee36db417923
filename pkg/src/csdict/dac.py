"""Directly addressable codes over variable-length symbol sequences.

Level ``k`` stores the ``k``-th symbol of every sequence that has one, in
input order, and a bitmap marking which of those sequences continue.
Following a continuation costs one ``rank1`` on the level bitmap.
"""

import numpy as np

from ._io import FormatError
from .bitseq import RG, build_bits, read_bits
from .errors import ParameterError

DAC_X = 0.25


class DacArray:
    def __init__(self, sequences, width):
        if width < 1 or width > 64:
            raise ParameterError(f"symbol width must be in 1..64, got {width}")
        if len(sequences) == 0:
            raise ParameterError("DacArray needs at least one sequence")
        lens = np.fromiter((len(s) for s in sequences), dtype=np.int64, count=len(sequences))
        if lens.min() == 0:
            k = int(np.argmin(lens))
            raise ParameterError(f"sequence {k + 1} is empty")
        flat = np.fromiter((v for s in sequences for v in s), dtype=np.int64, count=int(lens.sum()))
        if flat.min() < 0 or (width < 64 and flat.max() >= 1 << width):
            raise ParameterError(f"symbol does not fit in {width} bits")
        starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
        self.width = width
        self.n = len(sequences)
        arrays, bitmaps = [], []
        alive = np.arange(self.n)
        k = 0
        while alive.size:
            arrays.append(flat[starts[alive] + k].tolist())
            more = lens[alive] > k + 1
            bitmaps.append(build_bits(more.astype(np.uint8), RG, DAC_X))
            alive = alive[more]
            k += 1
        self._arrays = arrays
        self._bitmaps = bitmaps

    @property
    def levels(self):
        return len(self._arrays)

    def level(self, k):
        """``(A_k, B_k)`` for 1-based level ``k``."""
        return self._arrays[k - 1], self._bitmaps[k - 1]

    def __len__(self):
        return self.n

    @property
    def total_symbols(self):
        return sum(len(a) for a in self._arrays)

    def iter_symbols(self, i):
        """Lazily yield the symbols of sequence ``i`` (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"sequence {i} outside [1, {self.n}]")
        arrays, bitmaps = self._arrays, self._bitmaps
        pos = i
        for k in range(len(arrays)):
            yield arrays[k][pos - 1]
            bit, r = bitmaps[k].access_rank(pos)
            if not bit:
                return
            pos = r

    def access(self, i):
        return list(self.iter_symbols(i))

    def access_prefix(self, i, limit):
        out = []
        if limit <= 0:
            if not 1 <= i <= self.n:
                raise IndexError(f"sequence {i} outside [1, {self.n}]")
            return out
        for v in self.iter_symbols(i):
            out.append(v)
            if len(out) >= limit:
                break
        return out

    def bitmap_bits(self):
        return sum(b.size_in_bits() for b in self._bitmaps)

    def symbol_bits(self):
        return self.width * self.total_symbols

    def write(self, w):
        w.u64(self.levels)
        w.u8(self.width)
        for a, b in zip(self._arrays, self._bitmaps):
            w.ints(a, self.width)
            b.write(w)

    @classmethod
    def read(cls, r):
        start = r.pos
        self = cls.__new__(cls)
        levels = r.u64()
        self.width = r.u8()
        self._arrays, self._bitmaps = [], []
        expected = None
        for _ in range(levels):
            at = r.pos
            arr = r.ints().tolist()
            bm = read_bits(r)
            if len(arr) != bm.n or (expected is not None and len(arr) != expected):
                raise FormatError("DAC level sizes are inconsistent", at)
            expected = bm.ones
            self._arrays.append(arr)
            self._bitmaps.append(bm)
        if not levels or expected != 0:
            raise FormatError("DAC has no levels or a dangling continuation", start)
        self.n = len(self._arrays[0])
        return self


def dac_build(sequences, width):
    return DacArray(sequences, width)


def dac_access(d, i):
    return d.access(i)


def dac_access_prefix(d, i, limit):
    return d.access_prefix(i, limit)
