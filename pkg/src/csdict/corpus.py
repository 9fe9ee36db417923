"""Deterministic synthetic corpora standing in for real dictionaries.

``words-zipf``  web-vocabulary-like words built from Zipf-distributed syllables
``dna-qgrams``  distinct 12-mers of a random nucleotide sequence
``urls``        URLs from a host/directory hierarchy with reused path segments
"""

import random
from bisect import bisect_left
from itertools import accumulate

KINDS = ("words-zipf", "dna-qgrams", "urls")
QGRAM = 12

_ONSETS = ["", "b", "c", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t",
           "v", "w", "st", "tr", "ch", "sh", "th", "pr", "br", "gr", "cl", "pl", "qu"]
_VOWELS = ["a", "e", "i", "o", "u", "ea", "ou", "io", "y", "ai"]
_CODAS = ["", "", "", "n", "r", "s", "t", "l", "m", "ng", "st", "ck", "x", "d"]


class _Zipf:
    def __init__(self, items, s, rnd):
        self.items = items
        self.cum = list(accumulate(1.0 / (k + 1) ** s for k in range(len(items))))
        self.rnd = rnd

    def __call__(self):
        u = self.rnd.random() * self.cum[-1]
        return self.items[bisect_left(self.cum, u)]


def _syllables(rnd):
    syl = sorted({o + v + c for o in _ONSETS for v in _VOWELS for c in _CODAS})
    rnd.shuffle(syl)
    return syl


def words_zipf(n, seed=0):
    rnd = random.Random(seed)
    pick = _Zipf(_syllables(rnd), 1.05, rnd)
    out = set()
    while len(out) < n:
        k = rnd.choice((1, 2, 2, 2, 3, 3, 3, 4))
        w = "".join(pick() for _ in range(k))
        r = rnd.random()
        if r < 0.03:
            w += str(rnd.randint(0, 999))
        elif r < 0.05:
            w = w.capitalize()
        out.add(w.encode("ascii"))
    return sorted(out)


def dna_qgrams(n, seed=0):
    if n > 4 ** QGRAM:
        raise ValueError(f"at most {4 ** QGRAM} distinct {QGRAM}-mers exist")
    rnd = random.Random(seed)
    out = set()
    window = "".join(rnd.choice("ACGT") for _ in range(QGRAM))
    while len(out) < n:
        out.add(window.encode("ascii"))
        window = window[1:] + rnd.choice("ACGT")
    return sorted(out)


_TLDS = [".co.uk", ".org.uk", ".ac.uk", ".gov.uk", ".ltd.uk", ".net.uk"]
_FILES = ["index.html", "default.asp", "home.htm", "contact.html", "about.html",
          "news.php", "search.cgi", "view.jsp", "page.shtml"]
_DIRS = ["news", "sport", "images", "archive", "products", "services", "about", "docs",
         "en", "cgi-bin", "pub", "content", "articles", "events", "research", "staff",
         "departments", "library", "shop", "gallery", "media", "2001", "2002", "press"]


def urls(n, seed=0):
    rnd = random.Random(seed)
    words = words_zipf(4000, seed + 1)
    words = [w.decode("ascii").lower() for w in words if w.isalpha()]
    rnd.shuffle(words)
    word = _Zipf(words, 0.9, rnd)
    common_dir = _Zipf(_DIRS, 1.0, rnd)
    out = set()
    while len(out) < n:
        sub = "www." if rnd.random() < 0.8 else rnd.choice(["web.", "news.", "shop.", ""]) + word() + "."
        host = "http://" + sub + word() + rnd.choice(("", "", "-" + word())) + rnd.choice(_TLDS) + "/"
        # per-host directory vocabulary
        local = [common_dir() if rnd.random() < 0.5 else word() for _ in range(rnd.randint(2, 8))]
        pages = max(1, int(rnd.paretovariate(1.2) * 8))
        for _ in range(pages):
            parts = [rnd.choice(local) for _ in range(rnd.choice((0, 1, 1, 2, 2, 3, 4)))]
            r = rnd.random()
            if r < 0.45:
                leaf = rnd.choice(_FILES)
            elif r < 0.75:
                leaf = word() + rnd.choice((".html", ".htm", ".php", ".pdf", "/"))
            elif r < 0.9:
                leaf = rnd.choice(_FILES) + "?id=" + str(rnd.randint(1, 5000))
            else:
                leaf = ""
            out.add((host + "".join(p + "/" for p in parts) + leaf).encode("ascii"))
            if len(out) >= n:
                break
    return sorted(out)


def generate(kind, n, seed=0):
    """Sorted unique corpus of ``n`` strings of the given kind."""
    if n < 1:
        raise ValueError("corpus size must be at least 1")
    if kind == "words-zipf":
        return words_zipf(n, seed)
    if kind == "dna-qgrams":
        return dna_qgrams(n, seed)
    if kind == "urls":
        return urls(n, seed)
    raise ValueError(f"unknown corpus kind {kind!r}; choose from {', '.join(KINDS)}")


def mean_adjacent_lcp(strings):
    from .fcdict import common_prefix_length
    if len(strings) < 2:
        return 0.0
    return sum(common_prefix_length(a, b) for a, b in zip(strings, strings[1:])) / (len(strings) - 1)
