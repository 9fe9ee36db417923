"""Re-Pair grammar compression and the dictionary built on it.

The sorted strings are joined with a terminator and Re-Pair runs over the
join, never forming a pair that contains the terminator. Each string thus
becomes a whole number of grammar symbols; those per-string runs are
stored in a :class:`~csdict.dac.DacArray` for direct access.

Pair frequencies count every adjacent occurrence; the most frequent pair
(ties: smallest ``(left, right)``) is replaced left to right until no pair
occurs twice.
"""

import heapq
from array import array

import numpy as np

from ._io import FormatError, bit_width, pack_ints, packed_size, unpack_ints
from .dac import DacArray
from .errors import BuildError, ParameterError
from .fcdict import check_sorted_unique, prefix_successor

_SHIFT = 32
_MASK = (1 << _SHIFT) - 1
_DELETED = -2


def repair_compress(text, forbidden=None, first_rule=None):
    """Return ``(rules, sequence)``; rule ``k`` defines symbol ``first_rule + k``."""
    seq = array("q", text)
    n = len(seq)
    if n == 0:
        raise ParameterError("Re-Pair needs a non-empty text")
    if forbidden is None:
        forbidden = -1
    if first_rule is None:
        first_rule = max((s for s in seq if s != forbidden), default=-1) + 1
    if min(seq) < -1 or max(seq) > _MASK:
        raise ParameterError("symbols must fit in 32 bits")
    nxt = array("q", range(1, n + 1))
    nxt[n - 1] = -1
    prv = array("q", range(-1, n - 1))

    counts = {}
    occ = {}
    if n > 1:
        t = np.asarray(seq, dtype=np.int64)
        left, right = t[:-1], t[1:]
        keep = (left != forbidden) & (right != forbidden)
        pos = np.flatnonzero(keep)
        keys = (left[pos] << _SHIFT) | right[pos]
        order = np.argsort(keys, kind="stable")
        keys, pos = keys[order], pos[order]
        uniq, starts, cnt = np.unique(keys, return_index=True, return_counts=True)
        for key, s, c in zip(uniq.tolist(), starts.tolist(), cnt.tolist()):
            counts[key] = c
            occ[key] = array("q", pos[s:s + c].tobytes())
    heap = [(-c, key) for key, c in counts.items() if c >= 2]
    heapq.heapify(heap)

    rules = []
    symbol = first_rule
    push, pop = heapq.heappush, heapq.heappop
    # dec/inc of neighbouring pair counts are inlined: this loop dominates build time.
    # Every pair created in a round contains the new symbol, so counts never grow
    # after their round; one push per new pair at round end keeps stale entries high.
    while heap:
        negc, key = pop(heap)
        c = counts.get(key, 0)
        if c != -negc:
            if 2 <= c < -negc:
                push(heap, (-c, key))
            continue
        a, b = key >> _SHIFT, key & _MASK
        rules.append((a, b))
        positions = occ.pop(key)
        fresh = set()
        if a == b:
            positions = sorted(positions)
        for p in positions:
            if seq[p] != a:
                continue
            q = nxt[p]
            if q < 0 or seq[q] != b:
                continue
            l, r = prv[p], nxt[q]
            x = seq[l] if l >= 0 else forbidden
            y = seq[r] if r >= 0 else forbidden
            if x != forbidden:
                k = (x << _SHIFT) | a
                c = counts[k] - 1
                if c:
                    counts[k] = c
                else:
                    del counts[k]
                    occ.pop(k, None)
            if y != forbidden:
                k = (b << _SHIFT) | y
                c = counts[k] - 1
                if c:
                    counts[k] = c
                else:
                    del counts[k]
                    occ.pop(k, None)
            seq[p] = symbol
            seq[q] = _DELETED
            nxt[p] = r
            if r >= 0:
                prv[r] = p
            if x != forbidden:
                k = (x << _SHIFT) | symbol
                c = counts.get(k, 0) + 1
                counts[k] = c
                if c == 1:
                    occ[k] = array("q", (l,))
                    fresh.add(k)
                else:
                    occ[k].append(l)
            if y != forbidden:
                k = (symbol << _SHIFT) | y
                c = counts.get(k, 0) + 1
                counts[k] = c
                if c == 1:
                    occ[k] = array("q", (p,))
                    fresh.add(k)
                else:
                    occ[k].append(p)
        counts.pop(key, None)
        occ.pop(key, None)
        for k in fresh:
            c = counts.get(k, 0)
            if c >= 2:
                push(heap, (-c, k))
        symbol += 1
    out = np.asarray(seq, dtype=np.int64)
    return rules, out[out != _DELETED].tolist()


def expand_symbol(sym, sigma, rules, out):
    """Append the terminal yield of ``sym`` to ``out`` (explicit stack)."""
    if sym < sigma:
        out.append(sym)
        return
    stack = [sym]
    while stack:
        s = stack.pop()
        if s < sigma:
            out.append(s)
        else:
            left, right = rules[s - sigma]
            stack.append(right)
            stack.append(left)


class RePairDictionary:
    def __init__(self, strings):
        strings = list(strings)
        if not strings:
            raise BuildError("cannot compress zero strings")
        check_sorted_unique(strings)
        for k, s in enumerate(strings):
            if not s:
                raise BuildError(f"string {k + 1} is empty; Re-Pair runs must be non-empty")
            if 0 in s:
                raise BuildError(f"string {k + 1} contains a zero byte")
        joined = b"\0".join(strings) + b"\0"
        raw = np.frombuffer(joined, dtype=np.uint8)
        terminals = np.unique(raw[raw != 0])
        self.terminals = terminals.tolist()
        self.sigma = len(self.terminals)
        lut = np.full(256, -1, dtype=np.int64)
        lut[terminals] = np.arange(self.sigma)
        text = lut[raw]  # terminator maps to -1
        rules, seq = repair_compress(text.tolist(), forbidden=-1, first_rule=self.sigma)
        seq = np.asarray(seq, dtype=np.int64)
        cuts = np.flatnonzero(seq == -1)
        runs = [chunk.tolist() for chunk in np.split(seq, cuts[:-1] + 1)]
        runs = [r[:-1] for r in runs]
        self.n = len(strings)
        if len(runs) != self.n:
            raise BuildError("terminator split produced the wrong number of runs")
        self.rules = rules
        self.width = bit_width(max(1, self.sigma + len(rules) - 1))
        self.runs = DacArray(runs, self.width)
        self._finish()

    def _finish(self):
        self._sym_byte = self.terminals
        self._code = [-1] * 256
        for k, t in enumerate(self.terminals):
            self._code[t] = k
        self.compare_steps = 0

    @property
    def r(self):
        return len(self.rules)

    def expand(self, sym):
        out = []
        expand_symbol(sym, self.sigma, self.rules, out)
        return out

    def _compare(self, i, p):
        """Sign of ``string_i`` vs ``p`` (terminal codes), expanding lazily.

        Returns ``(sign, symbols_expanded)``.
        """
        k = 0
        steps = 0
        plen = len(p)
        buf = []
        for sym in self.runs.iter_symbols(i):
            steps += 1
            buf.clear()
            expand_symbol(sym, self.sigma, self.rules, buf)
            for t in buf:
                if k == plen:
                    return 1, steps
                if t != p[k]:
                    return (-1 if t < p[k] else 1), steps
                k += 1
        return (0 if k == plen else -1), steps

    def _codes(self, p):
        code = self._code
        out = []
        for c in p:
            v = code[c]
            if v < 0:
                return None
            out.append(v)
        return out

    def locate(self, p):
        codes = self._codes(p)
        if codes is None or not codes:
            return -1
        lo, hi = 1, self.n
        while lo <= hi:
            mid = (lo + hi) // 2
            sign, _ = self._compare(mid, codes)
            if sign == 0:
                return mid
            if sign < 0:
                lo = mid + 1
            else:
                hi = mid - 1
        return -1

    def extract(self, i):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            return None
        out = []
        for sym in self.runs.iter_symbols(i):
            expand_symbol(sym, self.sigma, self.rules, out)
        tb = self._sym_byte
        return bytes(tb[t] for t in out)

    def lower_bound(self, q):
        """First id whose string is ``>= q``."""
        lo, hi = 1, self.n + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self.extract(mid) < q:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def locate_prefix(self, q):
        lo = self.lower_bound(q)
        succ = prefix_successor(q)
        hi = self.n if succ is None else self.lower_bound(succ) - 1
        return range(lo, max(lo, hi + 1))

    def check_grammar(self):
        """Raise if some rule is cyclic or refers outside ``[0, sigma + r)``."""
        limit = self.sigma + len(self.rules)
        for k, (a, b) in enumerate(self.rules):
            sym = self.sigma + k
            if not (0 <= a < sym and 0 <= b < sym):
                # rules only reference strictly older symbols, which rules out cycles
                raise FormatError(f"rule {sym} -> ({a}, {b}) is not acyclic within [0, {limit})")

    def write(self, w):
        w.u16(self.sigma)
        w.raw(bytes(self.terminals))
        w.u64(len(self.rules))
        w.u64(self.n)
        flat = [v for pair in self.rules for v in pair]
        w.u8(self.width)
        w.raw(pack_ints(flat, self.width))
        self.runs.write(w)

    @classmethod
    def read(cls, r):
        start = r.pos
        self = cls.__new__(cls)
        self.sigma = r.u16()
        self.terminals = list(r.raw(self.sigma))
        nrules, self.n = r.u64(), r.u64()
        self.width = r.u8()
        if not 1 <= self.width <= 64:
            raise FormatError(f"bad symbol width {self.width}", r.pos - 1)
        flat = unpack_ints(r.raw(packed_size(self.width, 2 * nrules)), self.width, 2 * nrules).tolist()
        self.rules = list(zip(flat[0::2], flat[1::2]))
        at = r.pos
        self.runs = DacArray.read(r)
        if self.runs.n != self.n or self.runs.width != self.width:
            raise FormatError("symbol runs disagree with the header", at)
        self.check_grammar()
        self._finish()
        return self


def rp_build(strings):
    return RePairDictionary(strings)
