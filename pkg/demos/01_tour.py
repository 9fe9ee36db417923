"""A first look at the dictionary interface.

Every backend answers the same two questions: which id does a string have,
and which string sits at an id. Run with ``python3 demos/01_tour.py``.
"""
# %%
import csdict

words = [b"alpha", b"beta", b"gamma", b"delta", b"beta"]
d = csdict.build(words, "PFC")
print(d.name, "n =", d.n)          # duplicates collapse, n = 4

# %% sorted backends hand out ids in lexicographic order
for s in sorted(set(words)):
    print(d.locate(s), s)
print("missing ->", d.locate(b"omega"))
print("id 0    ->", d.extract(0))   # out of range gives None

# %% hash backends give each string a table cell instead of a rank
h = csdict.build(words, "HashDH", {"alpha": 0.5})
print(h.id_semantics, [h.locate(s) for s in sorted(set(words))])
assert all(h.extract(h.locate(s)) == s for s in words)

# %% the same strings through all eleven backends
corpus = csdict.generate("words-zipf", 5000, seed=3)
for name in csdict.BACKEND_NAMES:
    d = csdict.build(corpus, name)
    size, pct = d.space_report()
    print(f"{name:12s} {size:8d} bytes  {pct:6.1f}% of {d.original_plain_bytes}")
