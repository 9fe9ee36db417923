"""Which backend wins depends on the strings.

URLs share long prefixes, so front coding and Re-Pair shrink them a lot.
Short DNA q-grams have little to share and Re-Pair mostly pays for its
grammar. The numbers printed here are percent of the plain concatenation.
"""
# %%
import numpy as np

import csdict

kinds = ["words-zipf", "urls", "dna-qgrams"]
names = list(csdict.BACKEND_NAMES)
table = np.zeros((len(names), len(kinds)))

for j, kind in enumerate(kinds):
    strings = csdict.generate(kind, 20_000, seed=1)
    for i, name in enumerate(names):
        table[i, j] = csdict.build(strings, name).space_report()[1]

# %%
print(f"{'':12s}" + "".join(f"{k:>12s}" for k in kinds))
for name, row in zip(names, table):
    print(f"{name:12s}" + "".join(f"{v:11.1f}%" for v in row))

# %% best backend per corpus
for j, kind in enumerate(kinds):
    print(kind, "->", names[int(np.argmin(table[:, j]))])
