"""Bucketed Front-Coding over sorted strings.

``PFC`` stores each bucket head verbatim followed by a zero byte, and every
other entry as ``Vbyte(lcp) + suffix + 0``. ``HTFC`` takes exactly that byte
stream and Hu-Tucker encodes it: the head is encoded on its own, padded to a
byte and prefixed with its encoded byte length in Vbyte; the remaining
entries of the bucket follow as one bit-aligned stream.

Because the Hu-Tucker code preserves order, HTFC heads are binary-searched
by comparing encoded bytes, without decoding them.
"""

from bisect import bisect_left, bisect_right
from collections import Counter

from ._io import FormatError, bit_width
from .codes import (PrefixCodeTable, bits_to_bytes, build_hutucker, decode_symbols,
                    encode_bits, vbyte_decode, vbyte_encode)
from .errors import BuildError, ParameterError

PFC, HTFC = "PFC", "HTFC"
KINDS = (PFC, HTFC)


def common_prefix_length(a, b):
    n = min(len(a), len(b))
    k = 0
    while k < n and a[k] == b[k]:
        k += 1
    return k


def check_sorted_unique(strings):
    for k in range(1, len(strings)):
        if not strings[k - 1] < strings[k]:
            what = "duplicate" if strings[k - 1] == strings[k] else "unsorted"
            raise BuildError(f"input is not strictly sorted: {what} string at position {k + 1}")


def prefix_successor(q):
    """Smallest string greater than every string starting with ``q``."""
    q = bytearray(q)
    while q and q[-1] == 0xFF:
        q.pop()
    if not q:
        return None
    q[-1] += 1
    return bytes(q)


def _pfc_buckets(strings, b):
    """PFC byte image of each bucket."""
    buckets = []
    for start in range(0, len(strings), b):
        head = strings[start]
        parts = [head, b"\0"]
        prev = head
        for s in strings[start + 1:start + b]:
            lcp = common_prefix_length(prev, s)
            parts += [vbyte_encode(lcp), s[lcp:], b"\0"]
            prev = s
        buckets.append(b"".join(parts))
    return buckets


class FrontCodedDictionary:
    def __init__(self, strings, kind=PFC, bucket_size=8):
        if kind not in KINDS:
            raise ParameterError(f"unknown front-coding kind {kind!r}")
        if not isinstance(bucket_size, int) or bucket_size < 2:
            raise ParameterError(f"bucket size must be an integer >= 2, got {bucket_size!r}")
        strings = list(strings)
        if not strings:
            raise BuildError("cannot front-code zero strings")
        check_sorted_unique(strings)
        for k, s in enumerate(strings):
            if 0 in s:
                raise BuildError(f"string {k + 1} contains a zero byte")
        self.kind, self.b, self.n = kind, bucket_size, len(strings)
        images = _pfc_buckets(strings, bucket_size)
        self.code = None
        if kind == HTFC:
            freq = Counter()
            for img in images:
                freq.update(img)
            self.code = build_hutucker(freq)
            images = [self._encode_bucket(img) for img in images]
        offsets = []
        pos = 0
        for img in images:
            offsets.append(pos)
            pos += len(img)
        self._set(b"".join(images), offsets)

    def _encode_bucket(self, img):
        cut = img.index(0) + 1
        head = bits_to_bytes(*encode_bits(img[:cut], self.code))
        rest = bits_to_bytes(*encode_bits(img[cut:], self.code))
        return vbyte_encode(len(head)) + head + rest

    def _set(self, blob, offsets):
        self.blob = blob
        self._offsets = offsets
        self.nbuckets = len(offsets)
        if self.kind == PFC:
            self._keys = [blob[o:blob.index(0, o)] for o in offsets]
        else:
            keys = []
            for o in offsets:
                L, used = vbyte_decode(blob, o)
                keys.append(blob[o + used:o + used + L])
            self._keys = keys

    def _bucket_count(self, k):
        return min(self.b, self.n - k * self.b)

    def _iter_bucket(self, k):
        """Yield the strings of bucket ``k`` (0-based) in order."""
        count = self._bucket_count(k)
        blob = self.blob
        off = self._offsets[k]
        if self.kind == PFC:
            e = blob.index(0, off)
            cur = blob[off:e]
            yield cur
            pos = e + 1
            for _ in range(count - 1):
                lcp, used = vbyte_decode(blob, pos)
                pos += used
                e = blob.index(0, pos)
                cur = cur[:lcp] + blob[pos:e]
                pos = e + 1
                yield cur
            return
        L, used = vbyte_decode(blob, off)
        start = off + used
        head = bytearray()
        for sym, _ in decode_symbols(blob[start:start + L], self.code, stop=0):
            if sym == 0:
                break
            head.append(sym)
        cur = bytes(head)
        yield cur
        if count == 1:
            return
        end = self._offsets[k + 1] if k + 1 < self.nbuckets else len(self.blob)
        symbols = decode_symbols(blob[start + L:end], self.code, stop=None)
        for _ in range(count - 1):
            lcp = shift = 0
            for sym, _ in symbols:
                lcp |= (sym & 0x7F) << shift
                shift += 7
                if sym & 0x80:
                    break
            suffix = bytearray()
            for sym, _ in symbols:
                if sym == 0:
                    break
                suffix.append(sym)
            cur = cur[:lcp] + bytes(suffix)
            yield cur

    def _head_key(self, p):
        """Query in the form stored heads are compared in; None if impossible."""
        if self.kind == PFC:
            return p
        lengths = self.code._len
        if any(not lengths[c] for c in p):
            return None
        return bits_to_bytes(*encode_bits(list(p) + [0], self.code))

    def locate(self, p):
        if 0 in p:
            return -1
        key = self._head_key(p)
        if key is None:
            return -1
        k = bisect_right(self._keys, key) - 1
        if k < 0:
            return -1
        for j, s in enumerate(self._iter_bucket(k)):
            if s == p:
                return k * self.b + j + 1
            if s > p:
                break
        return -1

    def extract(self, i):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            return None
        k, j = divmod(i - 1, self.b)
        for t, s in enumerate(self._iter_bucket(k)):
            if t == j:
                return s

    def head(self, k):
        return next(self._iter_bucket(k))

    def lower_bound(self, q):
        """Id of the first string ``>= q`` (``n + 1`` if none)."""
        k = bisect_left(range(self.nbuckets), q, key=self.head) - 1
        if k < 0:
            return 1
        for j, s in enumerate(self._iter_bucket(k)):
            if s >= q:
                return k * self.b + j + 1
        return min(self.n, (k + 1) * self.b) + 1

    def locate_prefix(self, q):
        """Ids of all strings starting with ``q``, as a ``range``."""
        lo = self.lower_bound(q)
        succ = prefix_successor(q)
        hi = self.n if succ is None else self.lower_bound(succ) - 1
        return range(lo, max(lo, hi + 1))

    def write(self, w):
        w.u8(KINDS.index(self.kind))
        w.u64(self.b)
        w.u64(self.n)
        w.ints(self._offsets, bit_width(len(self.blob)))
        w.blob(self.blob)
        if self.code is not None:
            self.code.write(w)

    @classmethod
    def read(cls, r):
        start = r.pos
        self = cls.__new__(cls)
        kind = r.u8()
        if kind >= len(KINDS):
            raise FormatError(f"unknown front-coding kind tag {kind}", start)
        self.kind = KINDS[kind]
        self.b, self.n = r.u64(), r.u64()
        at = r.pos
        offsets = r.ints().tolist()
        blob = r.blob()
        if self.b < 2 or len(offsets) != -(-self.n // self.b):
            raise FormatError("bucket table disagrees with n and bucket size", at)
        if offsets and (offsets != sorted(offsets) or offsets[-1] >= max(1, len(blob))):
            raise FormatError("bucket offsets are not increasing within the blob", at)
        self.code = PrefixCodeTable.read(r) if self.kind == HTFC else None
        try:
            self._set(blob, offsets)
        except ValueError as exc:
            raise FormatError(f"corrupt bucket data: {exc}", at)
        return self


def fc_build(strings, kind=PFC, bucket_size=8):
    return FrontCodedDictionary(strings, kind, bucket_size)
