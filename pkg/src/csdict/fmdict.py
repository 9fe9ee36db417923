"""FM-index dictionary over ``T = $s1$s2$...$sn$``.

With ``$`` (byte 0) smaller than every other symbol, the ``n + 1`` suffixes
starting with ``$`` occupy BWT rows ``1..n+1``: row 1 is the final ``$`` and
row ``i + 1`` is the ``$`` preceding string ``i``. Hence the last character
of string ``i`` sits at row ``i + 2`` (``i < n``) and of string ``n`` at
row 1. ``locate`` backward-searches ``$p$``; ``extract`` walks LF-steps.

The BWT is held in a balanced wavelet tree whose node bitmaps are RG
(``SSA``) or RRR (``SSA*``).
"""

from bisect import bisect_left

import numpy as np

from ._io import FormatError
from .bitseq import RG, RRR, build_bits, read_bits
from .errors import BuildError, ParameterError
from .fcdict import check_sorted_unique

SSA, SSA_STAR = "SSA", "SSA*"
VARIANTS = (SSA, SSA_STAR)
TERMINATOR = 0


def suffix_array(text):
    """Suffix array of a byte/int sequence by prefix doubling (0-based)."""
    if isinstance(text, (bytes, bytearray, memoryview)):
        text = np.frombuffer(text, dtype=np.uint8)
    t = np.asarray(text, dtype=np.int64)
    n = t.size
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    # initial ranks: dense symbol ids
    _, rank = np.unique(t, return_inverse=True)
    rank = rank.astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[:n - k] = rank[k:]
        key = rank * (n + 1) + (second + 1)
        sa = np.argsort(key, kind="stable")
        sk = key[sa]
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.concatenate(([0], np.cumsum(sk[1:] != sk[:-1])))
        rank = new
        if rank.max() == n - 1 or k >= n:
            return sa
        k *= 2


def dictionary_text(strings):
    """``$s1$s2$...$sn$`` as a uint8 array."""
    joined = b"\0" + b"".join(s + b"\0" for s in strings)
    return np.frombuffer(joined, dtype=np.uint8)


def bwt_from_sa(text, sa):
    t = np.asarray(text)
    return t[(sa - 1) % t.size]


class WaveletTree:
    """Balanced wavelet tree over symbol codes ``0..sigma-1``."""

    def __init__(self, codes, sigma, layout=RG, x=0.25):
        self.sigma = sigma
        self.n = len(codes)
        self.layout, self.x = layout, x
        self._bitmaps = []
        self._shape = []  # per node: (mid, left, right); child < 0 encodes leaf -1-code
        codes = np.asarray(codes, dtype=np.int64)
        if sigma >= 2:
            self._build(codes, 0, sigma)
        self._finish()

    def _build(self, seq, lo, hi):
        node = len(self._bitmaps)
        mid = (lo + hi) // 2
        bits = seq >= mid
        self._bitmaps.append(build_bits(bits.astype(np.uint8), self.layout, self.x))
        self._shape.append(None)
        left = self._build(seq[~bits], lo, mid) if mid - lo > 1 else -1 - lo
        right = self._build(seq[bits], mid, hi) if hi - mid > 1 else -1 - mid
        self._shape[node] = (mid, left, right)
        return node

    def _finish(self):
        # per-symbol root-to-leaf path of (bitmap, bit)
        self._paths = []
        for c in range(self.sigma):
            path = []
            if self.sigma >= 2:
                node = 0
                while node >= 0:
                    mid, left, right = self._shape[node]
                    bit = 1 if c >= mid else 0
                    path.append((self._bitmaps[node], bit))
                    node = right if bit else left
            self._paths.append(path)
        self._nodes = [(bm, left, right) for bm, (_, left, right) in zip(self._bitmaps, self._shape)]

    def rank(self, c, j):
        """Occurrences of code ``c`` among the first ``j`` symbols."""
        for bm, bit in self._paths[c]:
            r = bm.rank1(j)
            j = r if bit else j - r
        return j

    def rank_pair(self, c, a, b):
        for bm, bit in self._paths[c]:
            ra, rb = bm.rank1(a), bm.rank1(b)
            if bit:
                a, b = ra, rb
            else:
                a, b = a - ra, b - rb
        return a, b

    def access_rank(self, j):
        """``(S[j], rank_{S[j]}(S, j))`` for 1-based ``j``, one descent."""
        if self.sigma < 2:
            return 0, j
        nodes = self._nodes
        node = 0
        while True:
            bm, left, right = nodes[node]
            bit, j = bm.access_rank(j)
            node = right if bit else left
            if node < 0:
                return -1 - node, j

    def access(self, j):
        return self.access_rank(j)[0]

    def size_in_bits(self):
        return sum(b.size_in_bits() for b in self._bitmaps)

    def write(self, w):
        w.u16(self.sigma)
        w.u64(self.n)
        w.u64(len(self._bitmaps))
        for bm in self._bitmaps:
            bm.write(w)

    @classmethod
    def read(cls, r):
        start = r.pos
        self = cls.__new__(cls)
        self.sigma = r.u16()
        self.n = r.u64()
        count = r.u64()
        if count != max(0, self.sigma - 1):
            raise FormatError(f"wavelet tree over {self.sigma} symbols cannot have {count} nodes", start)
        bitmaps = [read_bits(r) for _ in range(count)]
        self._bitmaps, self._shape = [], []
        it = iter(bitmaps)

        def rebuild(lo, hi):
            node = len(self._bitmaps)
            self._bitmaps.append(next(it))
            self._shape.append(None)
            mid = (lo + hi) // 2
            left = rebuild(lo, mid) if mid - lo > 1 else -1 - lo
            right = rebuild(mid, hi) if hi - mid > 1 else -1 - mid
            self._shape[node] = (mid, left, right)
            return node

        if self.sigma >= 2:
            rebuild(0, self.sigma)
            self.layout = self._bitmaps[0].layout
            self.x = self._bitmaps[0].x
        self._finish()
        return self


class FMIndexDictionary:
    def __init__(self, strings, variant=SSA, x=0.25):
        if variant not in VARIANTS:
            raise ParameterError(f"unknown FM-index variant {variant!r}")
        strings = list(strings)
        if not strings:
            raise BuildError("cannot index zero strings")
        check_sorted_unique(strings)
        for k, s in enumerate(strings):
            if TERMINATOR in s:
                raise BuildError(f"string {k + 1} contains a zero byte")
            if not s:
                raise BuildError(f"string {k + 1} is empty")
        self.variant, self.x = variant, float(x)
        self.n = len(strings)
        text = dictionary_text(strings)
        self.N = int(text.size)
        bwt = bwt_from_sa(text, suffix_array(text))
        alphabet = np.unique(text)
        codes = np.searchsorted(alphabet, bwt)
        counts = np.bincount(codes, minlength=alphabet.size)
        wt = WaveletTree(codes, int(alphabet.size), RG if variant == SSA else RRR, x)
        self._set(alphabet.tolist(), counts.tolist(), wt)

    def _set(self, alphabet, counts, wt):
        self.alphabet = alphabet
        self.sigma = len(alphabet)
        self._code_of = [-1] * 256
        for k, a in enumerate(alphabet):
            self._code_of[a] = k
        self.C = [0] * (self.sigma + 1)
        for k, cnt in enumerate(counts):
            self.C[k + 1] = self.C[k] + cnt
        self.wavelet = wt

    # -- FM primitives (1-based rows) -------------------------------------

    def bwt_char(self, j):
        return self.alphabet[self.wavelet.access(j)]

    def lf(self, j):
        if not 1 <= j <= self.N:
            raise IndexError(f"BWT row {j} outside [1, {self.N}]")
        c, r = self.wavelet.access_rank(j)
        return self.C[c] + r

    def backward_step(self, sp, ep, c):
        """Interval of suffixes ``c + X`` given the interval of ``X``."""
        code = self._code_of[c] if 0 <= c < 256 else -1
        if code < 0:
            return 1, 0
        a, b = self.wavelet.rank_pair(code, sp - 1, ep)
        base = self.C[code]
        return base + a + 1, base + b

    def _row_of_last_char(self, i):
        """BWT row holding the final character of string ``i``."""
        return i + 2 if i < self.n else 1

    def _search(self, pattern, sp, ep):
        for c in reversed(pattern):
            sp, ep = self.backward_step(sp, ep, c)
            if sp > ep:
                break
        return sp, ep

    # -- dictionary operations ----------------------------------------------

    def locate(self, p):
        # an empty pattern would match the cyclic wrap $|$ at row 1
        if not p or TERMINATOR in p:
            return -1
        # rows 1..n+1 are exactly the suffixes starting with $
        sp, ep = self._search(p, 1, self.n + 1)
        if sp > ep:
            return -1
        sp, ep = self.backward_step(sp, ep, TERMINATOR)
        return sp - 1 if sp == ep else -1

    def extract(self, i):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            return None
        j = self._row_of_last_char(i)
        out = bytearray()
        wt, C, alphabet = self.wavelet, self.C, self.alphabet
        while True:
            c, r = wt.access_rank(j)
            if c == 0:
                break
            out.append(alphabet[c])
            j = C[c] + r
        out.reverse()
        return bytes(out)

    def locate_prefix(self, q):
        if TERMINATOR in q:
            return range(1, 1)
        sp, ep = self._search(q, 1, self.N)
        if sp > ep:
            return range(1, 1)
        sp, ep = self.backward_step(sp, ep, TERMINATOR)
        lo, hi = max(sp - 1, 1), ep - 1
        return range(lo, max(lo, hi + 1))

    def size_in_bits(self):
        return self.wavelet.size_in_bits()

    def write(self, w):
        w.u8(VARIANTS.index(self.variant))
        w.f64(self.x)
        w.u64(self.N)
        w.u64(self.n)
        w.u16(self.sigma)
        w.raw(bytes(self.alphabet))
        for k in range(self.sigma):
            w.u64(self.C[k + 1] - self.C[k])
        self.wavelet.write(w)

    @classmethod
    def read(cls, r):
        start = r.pos
        self = cls.__new__(cls)
        v = r.u8()
        if v >= len(VARIANTS):
            raise FormatError(f"unknown FM-index variant tag {v}", start)
        self.variant = VARIANTS[v]
        self.x = r.f64()
        self.N, self.n = r.u64(), r.u64()
        sigma = r.u16()
        alphabet = list(r.raw(sigma))
        counts = [r.u64() for _ in range(sigma)]
        at = r.pos
        wt = WaveletTree.read(r)
        if wt.sigma != sigma or wt.n != self.N or sum(counts) != self.N:
            raise FormatError("wavelet tree disagrees with the C table", at)
        if not alphabet or alphabet[0] != TERMINATOR or counts[0] != self.n + 1:
            raise FormatError("terminator count must be n + 1", at)
        self._set(alphabet, counts, wt)
        return self


def fm_build(strings, variant=SSA, x=0.25):
    return FMIndexDictionary(strings, variant, x)
