import random
from bisect import bisect_left
from collections import Counter

import pytest

from csdict.corpus import generate

# filled by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


class SortedOracle:
    """Sorted list + bisect, written independently of the library."""

    def __init__(self, strings):
        self.strings = sorted(set(strings))

    def rank(self, s):
        k = bisect_left(self.strings, s)
        return k + 1 if k < len(self.strings) and self.strings[k] == s else -1

    def prefix_range(self, q):
        ids = [k + 1 for k, s in enumerate(self.strings) if s.startswith(q)]
        return range(ids[0], ids[-1] + 1) if ids else range(0)


def naive_repair(text, forbidden, first):
    """Rescan-everything Re-Pair: most frequent pair, ties to the smallest pair."""
    seq = list(text)
    rules = []
    sym = first
    while True:
        cnt = Counter((a, b) for a, b in zip(seq, seq[1:]) if a != forbidden and b != forbidden)
        if not cnt or max(cnt.values()) < 2:
            return rules, seq
        best = max(cnt.values())
        pair = min(p for p, c in cnt.items() if c == best)
        rules.append(pair)
        out = []
        i = 0
        while i < len(seq):
            if i + 1 < len(seq) and (seq[i], seq[i + 1]) == pair:
                out.append(sym)
                i += 2
            else:
                out.append(seq[i])
                i += 1
        seq = out
        sym += 1


def brute_bwt(text):
    sa = sorted(range(len(text)), key=lambda i: text[i:])
    return bytes(text[i - 1] for i in sa)


def held_out(strings, k, seed=0):
    """``k`` strings guaranteed absent from ``strings``."""
    rnd = random.Random(seed)
    present = set(strings)
    out = set()
    pool = list(strings)
    while len(out) < k:
        s = bytearray(rnd.choice(pool))
        op = rnd.randrange(3)
        if op == 0:
            s.append(rnd.choice(b"abcxyz"))
        elif op == 1 and len(s) > 1:
            s.pop()
        else:
            s[rnd.randrange(len(s))] = rnd.choice(b"ACGTacgtz/.")
        s = bytes(s)
        if s and s not in present:
            out.add(s)
    return sorted(out)


@pytest.fixture(scope="session")
def words_small():
    return generate("words-zipf", 2000, 11)


@pytest.fixture(scope="session")
def urls_small():
    return generate("urls", 2000, 11)


@pytest.fixture(scope="session")
def dna_small():
    return generate("dna-qgrams", 2000, 11)


@pytest.fixture(scope="session")
def corpora_small(words_small, urls_small, dna_small):
    return {"words-zipf": words_small, "urls": urls_small, "dna-qgrams": dna_small}
