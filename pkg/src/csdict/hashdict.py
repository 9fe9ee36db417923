"""Closed hashing over Huffman-compressed strings.

Every string is Huffman-encoded (with an end-of-string codeword), padded
to bytes, and the encodings are concatenated in the order of the cells they
finally occupy. Three table representations are offered:

``Hash``    an offset per cell, ``H[1..m]``; ids are cell numbers.
``HashB``   compact offsets ``M[1..n]`` plus an occupancy bitmap ``B`` (RG);
            ids are ``rank1(B, cell)`` and therefore contiguous in 1..n.
``HashBB``  ``B`` plus a bitmap ``Y`` (RRR) marking where each encoding
            starts in the payload, so ``M[i] = select1(Y, i)``.

Each combines with linear probing (``lp``) or double hashing (``dh``).
"""

from collections import namedtuple
from fractions import Fraction
from math import ceil

import numpy as np

from ._io import FormatError, bit_width
from .bitseq import RG, RRR, build_bits, read_bits
from .codes import PrefixCodeTable, build_huffman, byte_frequencies, decode_string, encode_string
from .errors import BuildError, ParameterError

HASH, HASHB, HASHBB = "Hash", "HashB", "HashBB"
LINEAR, DOUBLE = "lp", "dh"
VARIANTS = (HASH, HASHB, HASHBB)
POLICIES = (LINEAR, DOUBLE)

# Seeds of the two hash functions; any large primes would do.
BERNSTEIN_SEED = 1048583
ROTATING_SEED = 2097169
BERNSTEIN_MULT = (1 << 15) + 1

Trace = namedtuple("Trace", "probes ranks selects")


def is_prime(v):
    if v < 2:
        return False
    if v % 2 == 0:
        return v == 2
    f = 3
    while f * f <= v:
        if v % f == 0:
            return False
        f += 2
    return True


def next_prime(v):
    v = max(2, v)
    while not is_prime(v):
        v += 1
    return v


def table_size(n, alpha):
    """Smallest prime ``m >= n / alpha``."""
    return next_prime(ceil(Fraction(n) / Fraction(alpha).limit_denominator(1_000_000)))


def hash_bernstein(key, m):
    """Bernstein's hash with multiplier 2^15+1, reduced mod ``m`` per byte."""
    h = BERNSTEIN_SEED
    for c in key:
        h = (h * BERNSTEIN_MULT + c) % m
    return h % m


def hash_rotating(key, m):
    """Knuth's rotating hash on 32-bit words, reduced mod ``m`` at the end."""
    h = ROTATING_SEED
    for c in key:
        h = ((h << 4) ^ (h >> 28) ^ c) & 0xFFFFFFFF
    return h % m


def probe_step(key, m, policy):
    if policy == LINEAR or m < 3:
        return 1
    return 1 + hash_rotating(key, m) % (m - 1)


class HashDictionary:
    """Static string dictionary answering ``locate`` / ``extract``."""

    def __init__(self, strings, variant=HASH, policy=DOUBLE, alpha=0.5, x=0.25):
        if variant not in VARIANTS:
            raise ParameterError(f"unknown hash variant {variant!r}")
        if policy not in POLICIES:
            raise ParameterError(f"unknown probing policy {policy!r}")
        try:
            alpha_ok = 0 < alpha < 1
        except TypeError:
            alpha_ok = False
        if not alpha_ok:
            raise ParameterError(f"load factor must lie in (0, 1), got {alpha!r}")
        strings = list(strings)
        if not strings:
            raise BuildError("cannot build a hash dictionary over zero strings")
        if len(set(strings)) != len(strings):
            raise BuildError("hash dictionary input contains duplicate strings")
        self.variant, self.policy = variant, policy
        self.alpha, self.x = float(alpha), float(x)
        self.n = len(strings)
        self.m = table_size(self.n, alpha)
        self.code = build_huffman(byte_frequencies(strings))
        keys = [encode_string(s, self.code)[0] for s in strings]

        cells = [-1] * self.m
        m = self.m
        for k, key in enumerate(keys):
            c = hash_bernstein(key, m)
            step = probe_step(key, m, policy)
            while cells[c] >= 0:
                c = (c + step) % m
            cells[c] = k
        order = [k for k in cells if k >= 0]
        payload = b"".join(keys[k] for k in order)
        offsets = np.concatenate(([0], np.cumsum([len(keys[k]) for k in order])[:-1]))
        occupied = np.fromiter((k >= 0 for k in cells), dtype=np.uint8, count=m)
        self._set_structure(payload, offsets.tolist(), occupied)

    def _set_structure(self, payload, offsets, occupied):
        self.payload = payload
        self.N = len(payload)
        self.empty = self.N
        self._H = self._M = self._B = self._Y = None
        if self.variant == HASH:
            H = [self.empty] * self.m
            for cell, off in zip(np.flatnonzero(occupied).tolist(), offsets):
                H[cell] = off
            self._H = H
        else:
            self._B = build_bits(occupied, RG, self.x)
            if self.variant == HASHB:
                self._M = offsets
            else:
                starts = np.zeros(self.N, dtype=np.uint8)
                starts[offsets] = 1
                self._Y = build_bits(starts, RRR, self.x)
        lens = np.diff(np.append(np.asarray(offsets, dtype=np.int64), self.N))
        self._maxlen = int(lens.max())

    @property
    def id_space(self):
        return self.m if self.variant == HASH else self.n

    def _encode_query(self, p):
        lengths = self.code._len
        for c in p:
            if not lengths[c]:
                return None
        return encode_string(p, self.code)[0]

    def _offset(self, idx):
        """Payload offset of the ``idx``-th (1-based) stored string."""
        if self._M is not None:
            return self._M[idx - 1]
        return self._Y.select1(idx) - 1

    def locate_traced(self, p):
        """``locate`` plus the number of probes, ranks and selects it took."""
        key = self._encode_query(p)
        if key is None:
            return -1, Trace(0, 0, 0)
        m = self.m
        klen = len(key)
        payload = self.payload
        cell = hash_bernstein(key, m)
        step = probe_step(key, m, self.policy)
        probes = ranks = selects = 0
        if self.variant == HASH:
            H, empty = self._H, self.empty
            while True:
                probes += 1
                off = H[cell]
                if off == empty:
                    return -1, Trace(probes, 0, 0)
                if payload[off:off + klen] == key:
                    return cell + 1, Trace(probes, 0, 0)
                cell = (cell + step) % m
        B = self._B
        use_select = self._Y is not None
        idx = None
        while True:
            probes += 1
            if idx is not None and self.policy == LINEAR:
                # successive occupied cells are successive entries of M
                if not B.access(cell + 1):
                    return -1, Trace(probes, ranks, selects)
                idx = 1 if cell == 0 else idx + 1
            else:
                bit, r = B.access_rank(cell + 1)
                ranks += 1
                if not bit:
                    return -1, Trace(probes, ranks, selects)
                idx = r
            off = self._offset(idx)
            selects += use_select
            if payload[off:off + klen] == key:
                return idx, Trace(probes, ranks, selects)
            cell = (cell + step) % m

    def locate(self, p):
        return self.locate_traced(p)[0]

    def extract(self, i):
        if not isinstance(i, (int, np.integer)) or not 1 <= i <= self.id_space:
            return None
        if self.variant == HASH:
            off = self._H[i - 1]
            if off == self.empty:
                return None
        else:
            off = self._offset(i)
        return decode_string(self.payload[off:off + self._maxlen], None, self.code)

    def write(self, w):
        w.u8(VARIANTS.index(self.variant))
        w.u8(POLICIES.index(self.policy))
        w.u64(self.m)
        w.u64(self.n)
        w.f64(self.alpha)
        w.f64(self.x)
        self.code.write(w)
        w.blob(self.payload)
        width = bit_width(self.N)
        if self.variant == HASH:
            w.ints(self._H, width)
        else:
            self._B.write(w)
            if self.variant == HASHB:
                w.ints(self._M, width)
            else:
                self._Y.write(w)

    @classmethod
    def read(cls, r):
        start = r.pos
        self = cls.__new__(cls)
        v, p = r.u8(), r.u8()
        if v >= len(VARIANTS) or p >= len(POLICIES):
            raise FormatError(f"bad hash variant/policy tags {v}/{p}", start)
        self.variant, self.policy = VARIANTS[v], POLICIES[p]
        self.m, self.n = r.u64(), r.u64()
        self.alpha, self.x = r.f64(), r.f64()
        self.code = PrefixCodeTable.read(r)
        payload = r.raw(r.u64())
        at = r.pos
        if self.variant == HASH:
            H = r.ints()
            if H.size != self.m:
                raise FormatError("offset table size differs from m", at)
            occupied = (H != len(payload)).astype(np.uint8)
            offsets = H[occupied.astype(bool)].tolist()
        else:
            B = read_bits(r)
            if B.n != self.m or B.ones != self.n:
                raise FormatError("occupancy bitmap disagrees with m/n", at)
            occupied = np.asarray(B.to_list(), dtype=np.uint8)
            if self.variant == HASHB:
                offsets = r.ints().tolist()
            else:
                Y = read_bits(r)
                offsets = [Y.select1(j) - 1 for j in range(1, Y.ones + 1)]
        if len(offsets) != self.n or int(occupied.sum()) != self.n:
            raise FormatError("stored string count disagrees with n", at)
        self._set_structure(payload, offsets, occupied)
        return self


def hash_build(strings, variant=HASH, policy=DOUBLE, alpha=0.5, x=0.25):
    return HashDictionary(strings, variant, policy, alpha, x)


def expected_probes(alpha, policy, successful):
    """Textbook expected probe counts under uniform hashing."""
    from math import log
    if policy == DOUBLE:
        if successful:
            return (1 / alpha) * log(1 / (1 - alpha))
        return 1 / (1 - alpha)
    if successful:
        return 0.5 * (1 + 1 / (1 - alpha))
    return 0.5 * (1 + 1 / (1 - alpha) ** 2)
