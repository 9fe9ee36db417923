"""Probe counts for closed hashing against the textbook averages.

Build at several load factors, count probes for members and for strings
that are absent, and compare with the expected values for double hashing
and linear probing.
"""
# %%
import random

import numpy as np

from csdict.hashdict import DOUBLE, HASH, LINEAR, expected_probes, hash_build

rnd = random.Random(0)
keys = sorted({bytes(rnd.randrange(1, 256) for _ in range(8)) for _ in range(22_000)})
rnd.shuffle(keys)
members, absent = keys[:20_000], keys[20_000:]

# %%
for probing, label in ((DOUBLE, "dh"), (LINEAR, "lp")):
    for alpha in (0.5, 0.7, 0.8, 0.9):
        d = hash_build(members, HASH, probing, alpha)
        a = d.n / d.m
        hit = np.mean([d.locate_traced(s)[1].probes for s in members])
        miss = np.mean([d.locate_traced(s)[1].probes for s in absent])
        print(f"{label} a={a:.3f}  hit {hit:5.2f} (expect {expected_probes(a, probing, True):5.2f})"
              f"  miss {miss:6.2f} (expect {expected_probes(a, probing, False):6.2f})")
