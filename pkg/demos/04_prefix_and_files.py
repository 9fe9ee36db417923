"""Prefix ranges on sorted backends, and dictionaries on disk.

Sorted backends can report the id range of all strings starting with a
pattern. Any dictionary saves to a single checksummed file.
"""
# %%
import os
import tempfile

import csdict

urls = csdict.generate("urls", 10_000, seed=5)
d = csdict.build(urls, "HTFC")
pattern = urls[1234][:20]
ids = d.locate_prefix(pattern)
print(pattern, "->", ids)
print([d.extract(i) for i in list(ids)[:3]])

# %%
path = os.path.join(tempfile.mkdtemp(), "urls.csd")
d.save(path)
back = csdict.load(path)
print(os.path.getsize(path), "bytes on disk")
assert back.to_bytes() == d.to_bytes()
assert back.locate(urls[42]) == d.locate(urls[42]) == 43

# %% a flipped byte is caught by the checksum
data = bytearray(d.to_bytes())
data[100] ^= 1
try:
    csdict.from_bytes(bytes(data))
except csdict.FormatError as e:
    print("rejected:", e)
