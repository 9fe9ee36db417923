"""Binary stream helpers shared by every serializable structure.

All integers are little-endian. Fixed-width integer arrays are bit-packed
LSB-first so a field of ``w`` bits costs exactly ``w`` bits plus padding
to the next byte.
"""

import struct

import numpy as np


class FormatError(ValueError):
    """Raised when a serialized stream is malformed or truncated."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


def bit_width(value):
    """Bits needed to store integers in ``[0, value]``, at least 1."""
    return max(1, int(value).bit_length())


def pack_ints(values, width):
    """Pack non-negative integers into ``width``-bit fields."""
    arr = np.asarray(values, dtype=np.uint64)
    if arr.size == 0:
        return b""
    if width > 64:
        raise ValueError("field width above 64 bits")
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((arr[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return np.packbits(bits.ravel(), bitorder="little").tobytes()


def unpack_ints(data, width, count):
    """Inverse of :func:`pack_ints`; returns a numpy uint64 array."""
    if count == 0:
        return np.zeros(0, dtype=np.uint64)
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8),
                         count=count * width, bitorder="little")
    bits = bits.reshape(count, width).astype(np.uint64)
    weights = np.uint64(1) << np.arange(width, dtype=np.uint64)
    return (bits * weights).sum(axis=1, dtype=np.uint64)


def packed_size(width, count):
    return (width * count + 7) // 8


class Writer:
    def __init__(self):
        self._parts = []
        self.size = 0

    def raw(self, data):
        data = bytes(data)
        self._parts.append(data)
        self.size += len(data)

    def u8(self, v):
        self.raw(struct.pack("<B", v))

    def u16(self, v):
        self.raw(struct.pack("<H", v))

    def u32(self, v):
        self.raw(struct.pack("<I", v))

    def u64(self, v):
        self.raw(struct.pack("<Q", v))

    def f64(self, v):
        self.raw(struct.pack("<d", v))

    def blob(self, data):
        """Length-prefixed byte string."""
        self.u64(len(data))
        self.raw(data)

    def ints(self, values, width):
        """Count, width, then the packed fields."""
        self.u64(len(values))
        self.u8(width)
        self.raw(pack_ints(values, width))

    def getvalue(self):
        return b"".join(self._parts)


class Reader:
    def __init__(self, data, offset=0):
        self.data = memoryview(data)
        self.pos = offset

    def raw(self, n):
        if n < 0 or self.pos + n > len(self.data):
            raise FormatError(f"truncated stream: need {n} bytes", self.pos)
        out = bytes(self.data[self.pos:self.pos + n])
        self.pos += n
        return out

    def _unpack(self, fmt, n):
        return struct.unpack(fmt, self.raw(n))[0]

    def u8(self):
        return self._unpack("<B", 1)

    def u16(self):
        return self._unpack("<H", 2)

    def u32(self):
        return self._unpack("<I", 4)

    def u64(self):
        return self._unpack("<Q", 8)

    def f64(self):
        return self._unpack("<d", 8)

    def blob(self):
        return self.raw(self.u64())

    def ints(self):
        count = self.u64()
        width = self.u8()
        if width == 0 or width > 64:
            raise FormatError(f"bad field width {width}", self.pos - 1)
        return unpack_ints(self.raw(packed_size(width, count)), width, count)

    def at_end(self):
        return self.pos == len(self.data)
