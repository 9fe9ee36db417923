"""Prefix codes over bytes: canonical Huffman, Hu-Tucker, plus Vbyte.

Codewords are integers read MSB-first; a string's encoding is the
concatenation of its codewords, optionally zero-padded to a byte boundary.
Symbol ``END`` (256) sits outside the byte range so that zero-padded
payloads stay self-delimiting.
"""

import heapq
from collections import Counter
from dataclasses import dataclass, field

from .errors import EncodingError, ParameterError, FormatError

END = 256
HUFFMAN = 0
HU_TUCKER = 1
KIND_NAMES = {HUFFMAN: "Huffman", HU_TUCKER: "HuTucker"}

VBYTE_MAX_BYTES = 10

_BYTE_BITS = [tuple((b >> (7 - k)) & 1 for k in range(8)) for b in range(256)]


def _check_freqs(freqs):
    freqs = dict(freqs)
    if not freqs:
        raise ParameterError("frequency table is empty")
    for sym, f in freqs.items():
        if not 0 <= sym <= END:
            raise ParameterError(f"symbol {sym} outside 0..{END}")
        if f <= 0:
            raise ParameterError(f"symbol {sym} has non-positive frequency {f}")
    return freqs


@dataclass
class PrefixCodeTable:
    """Symbol -> (codeword, length) mapping with decode support."""

    kind: int
    lengths: dict
    codes: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.codes:
            self.codes = (_canonical_codes(self.lengths) if self.kind == HUFFMAN
                          else _ordered_codes(self.lengths))
        elif self.kind == HUFFMAN and self.codes != _canonical_codes(self.lengths):
            # the table-driven decoder relies on canonical numbering
            raise ParameterError("Huffman tables must use canonical codewords")
        size = END + 1
        self._code = [0] * size
        self._len = [0] * size
        for s, c in self.codes.items():
            self._code[s] = c
            self._len[s] = self.lengths[s]
        self._build_tree()
        if self.kind == HUFFMAN:
            self._build_canonical()

    def __contains__(self, symbol):
        return symbol in self.lengths

    @property
    def symbols(self):
        return sorted(self.lengths)

    def codeword(self, symbol):
        """Codeword as a '0'/'1' string."""
        return format(self.codes[symbol], f"0{self.lengths[symbol]}b")

    def kraft_sum(self):
        from fractions import Fraction
        return sum(Fraction(1, 2 ** l) for l in self.lengths.values())

    def total_length(self, freqs):
        return sum(f * self.lengths[s] for s, f in freqs.items())

    def is_prefix_free(self):
        words = sorted(self.codeword(s) for s in self.lengths)
        return all(not b.startswith(a) for a, b in zip(words, words[1:]))

    def _build_tree(self):
        # node 0 is the root; child entries >= 0 are nodes, < 0 are leaves (-1 - symbol)
        left, right = [None], [None]
        for s in self.lengths:
            node = 0
            code, n = self.codes[s], self.lengths[s]
            for k in range(n - 1, -1, -1):
                side = right if (code >> k) & 1 else left
                if k == 0:
                    side[node] = -1 - s
                    break
                nxt = side[node]
                if nxt is None:
                    nxt = len(left)
                    left.append(None)
                    right.append(None)
                    side[node] = nxt
                node = nxt
        self.tree = (left, right)

    def _build_canonical(self):
        maxlen = max(self.lengths.values())
        ordered = sorted(self.lengths, key=lambda s: (self.lengths[s], s))
        self._sorted_symbols = ordered
        count = [0] * (maxlen + 1)
        for s in ordered:
            count[self.lengths[s]] += 1
        first_code = [0] * (maxlen + 1)
        first_index = [0] * (maxlen + 1)
        code = idx = 0
        for l in range(1, maxlen + 1):
            code = (code + count[l - 1]) << 1 if l > 1 else 0
            first_code[l] = code
            first_index[l] = idx
            idx += count[l]
        self._count = count
        self._first_code = first_code
        self._first_index = first_index

    def write(self, w):
        w.u8(self.kind)
        w.u16(len(self.lengths))
        for s in sorted(self.lengths):
            w.u16(s)
            w.u16(self.lengths[s])

    @classmethod
    def read(cls, r):
        start = r.pos
        kind = r.u8()
        if kind not in KIND_NAMES:
            raise FormatError(f"unknown code kind {kind}", start)
        size = r.u16()
        lengths = {}
        for _ in range(size):
            s, l = r.u16(), r.u16()
            if s > END or l == 0:
                raise FormatError(f"bad code entry ({s}, {l})", r.pos - 4)
            lengths[s] = l
        table = cls(kind, lengths)
        if not table.is_prefix_free():
            raise FormatError("code lengths do not form a prefix code", start)
        return table


def _canonical_codes(lengths):
    """Shorter codes are numerically smaller; equal lengths ordered by symbol."""
    codes = {}
    code = 0
    prev = None
    for s in sorted(lengths, key=lambda s: (lengths[s], s)):
        l = lengths[s]
        if prev is not None:
            code = (code + 1) << (l - prev)
        codes[s] = code
        prev = l
    return codes


def _ordered_codes(lengths):
    """Assign codewords left-to-right in symbol order from leaf depths."""
    codes = {}
    code = 0
    prev = None
    for s in sorted(lengths):
        l = lengths[s]
        if prev is not None:
            code += 1
            code = code << (l - prev) if l >= prev else code >> (prev - l)
        codes[s] = code
        prev = l
    return codes


def build_huffman(freqs):
    """Optimal prefix code with canonical codeword assignment."""
    freqs = _check_freqs(freqs)
    if len(freqs) == 1:
        return PrefixCodeTable(HUFFMAN, {next(iter(freqs)): 1})
    # heap items: (weight, order, symbols-in-subtree)
    heap = [(f, s, [s]) for s, f in sorted(freqs.items())]
    heapq.heapify(heap)
    depth = dict.fromkeys(freqs, 0)
    order = END + 1
    while len(heap) > 1:
        w1, _, a = heapq.heappop(heap)
        w2, _, b = heapq.heappop(heap)
        for s in a:
            depth[s] += 1
        for s in b:
            depth[s] += 1
        heapq.heappush(heap, (w1 + w2, order, a + b))
        order += 1
    return PrefixCodeTable(HUFFMAN, depth)


def hu_tucker_lengths(weights):
    """Leaf depths of the optimal alphabetic tree for ``weights`` (in order).

    Combination phase of Hu-Tucker: repeatedly merge the compatible pair
    (no original leaf strictly between them) of least total weight, ties
    to the leftmost pair; the merged node takes the left slot.
    """
    n = len(weights)
    if n == 1:
        return [1]
    weight = list(weights)
    terminal = [True] * n
    members = [[k] for k in range(n)]
    depth = [0] * n
    for _ in range(n - 1):
        best = None
        size = len(weight)
        start = 0
        while start < size - 1:
            # block: nodes start..end where end is the next terminal after start
            end = start + 1
            while end < size - 1 and not terminal[end]:
                end += 1
            p1 = min(range(start, end + 1), key=lambda k: (weight[k], k))
            q = min((k for k in range(start, end + 1) if k != p1),
                    key=lambda k: (weight[k], k))
            i, j = (p1, q) if p1 < q else (q, p1)
            cand = (weight[i] + weight[j], i, j)
            if best is None or cand < best:
                best = cand
            # the next block starts at the first terminal at or after start+1
            nxt = start + 1
            while nxt < size - 1 and not terminal[nxt]:
                nxt += 1
            start = nxt
        total, i, j = best
        for leaf in members[i]:
            depth[leaf] += 1
        for leaf in members[j]:
            depth[leaf] += 1
        weight[i] = total
        terminal[i] = False
        members[i] = members[i] + members[j]
        del weight[j], terminal[j], members[j]
    return depth


def build_hutucker(freqs):
    """Optimal order-preserving prefix code over the symbol order."""
    freqs = _check_freqs(freqs)
    symbols = sorted(freqs)
    depth = hu_tucker_lengths([freqs[s] for s in symbols])
    return PrefixCodeTable(HU_TUCKER, dict(zip(symbols, depth)))


def encode_bits(symbols, table):
    """Concatenated codewords as ``(int, nbits)``, MSB-first."""
    code, length = table._code, table._len
    acc = 0
    nbits = 0
    for c in symbols:
        l = length[c]
        if not l:
            raise EncodingError(f"symbol {c} has no codeword")
        acc = (acc << l) | code[c]
        nbits += l
    return acc, nbits


def bits_to_bytes(acc, nbits):
    """Left-align ``nbits`` bits into whole bytes, zero-padded."""
    nbytes = (nbits + 7) // 8
    return (acc << (8 * nbytes - nbits)).to_bytes(nbytes, "big")


def encode_string(s, table, pad=True):
    """Encode byte string ``s``; ``END`` is appended when the table has it.

    Returns ``(payload, bit_length)``; ``bit_length`` excludes padding. With
    ``pad=False`` the payload is the bit-length-exact integer instead.
    """
    syms = list(s)
    if END in table.lengths:
        syms.append(END)
    acc, nbits = encode_bits(syms, table)
    if not pad:
        return acc, nbits
    return bits_to_bytes(acc, nbits), nbits


def iter_bits(data, start_bit=0):
    first, off = divmod(start_bit, 8)
    for k in range(first, len(data)):
        bits = _BYTE_BITS[data[k]]
        for b in (bits[off:] if off else bits):
            yield b
        off = 0


def decode_symbols(data, table, start_bit=0, bit_length=None, stop=END):
    """Walk the code tree over the bits of ``data``.

    Yields ``(symbol, bit_position_after)``. Stops after ``stop`` is
    emitted or when ``bit_length`` bits (counted from ``start_bit``) are used.
    """
    left, right = table.tree
    node = 0
    pos = start_bit
    limit = None if bit_length is None else start_bit + bit_length
    for b in iter_bits(data, start_bit):
        if limit is not None and pos >= limit:
            break
        nxt = right[node] if b else left[node]
        pos += 1
        if nxt is None:
            raise EncodingError(f"bit pattern ending at bit {pos} is not a codeword")
        if nxt < 0:
            sym = -1 - nxt
            yield sym, pos
            if sym == stop:
                return
            node = 0
        else:
            node = nxt
    if node != 0:
        raise EncodingError("stream ends inside a codeword")


def _decode_canonical(data, table, bit_length):
    first_code, first_index, count = table._first_code, table._first_index, table._count
    ordered = table._sorted_symbols
    maxlen = len(count) - 1
    out = []
    code = l = 0
    used = 0
    for b in iter_bits(data):
        if bit_length is not None and used >= bit_length:
            break
        used += 1
        code = (code << 1) | b
        l += 1
        if l > maxlen:
            raise EncodingError(f"bit pattern ending at bit {used} is not a codeword")
        k = code - first_code[l]
        if 0 <= k < count[l]:
            sym = ordered[first_index[l] + k]
            if sym == END:
                return bytes(out)
            out.append(sym)
            code = l = 0
    if l:
        raise EncodingError("stream ends inside a codeword")
    return bytes(out)


def decode_string(data, bit_length, table):
    """Decode a payload back into bytes.

    Stops at ``bit_length`` bits or at ``END``, whichever comes first;
    ``bit_length=None`` decodes until ``END`` or the end of ``data``.
    """
    if table.kind == HUFFMAN:
        return _decode_canonical(data, table, bit_length)
    out = bytearray()
    for sym, _ in decode_symbols(data, table, 0, bit_length):
        if sym == END:
            break
        out.append(sym)
    return bytes(out)


def vbyte_encode(v):
    """7-bit groups, least significant first; the final byte has bit 7 set."""
    if v < 0:
        raise ParameterError(f"Vbyte encodes non-negative integers, got {v}")
    out = bytearray()
    while v >= 0x80:
        out.append(v & 0x7F)
        v >>= 7
    out.append(v | 0x80)
    return bytes(out)


def vbyte_decode(data, pos=0):
    """Return ``(value, bytes consumed)`` for the Vbyte code at ``data[pos:]``."""
    v = 0
    shift = 0
    for k in range(VBYTE_MAX_BYTES):
        if pos + k >= len(data):
            raise EncodingError(f"Vbyte code truncated at byte {pos + k}")
        b = data[pos + k]
        v |= (b & 0x7F) << shift
        if b & 0x80:
            return v, k + 1
        shift += 7
    raise EncodingError(f"no Vbyte stop bit within {VBYTE_MAX_BYTES} bytes at {pos}")


def byte_frequencies(strings, terminator=END):
    """Byte counts over ``strings`` plus one ``terminator`` per string."""
    freq = Counter()
    for s in strings:
        freq.update(s)
    if terminator is not None:
        freq[terminator] += len(strings)
    return freq
