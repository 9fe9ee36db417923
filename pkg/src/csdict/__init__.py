"""Compressed string dictionaries with ``locate`` (string -> id) and ``extract`` (id -> string).

>>> from csdict import build
>>> d = build([b"apple", b"banana", b"cherry"], "HTFC")
>>> d.locate(b"banana"), d.extract(3)
(2, b'cherry')
"""

from .core import (BACKEND_NAMES, BACKENDS, DictionaryHandle, ReferenceDictionary, build, from_bytes,
                   load, save, space_report)
from .corpus import generate
from .errors import BuildError, EncodingError, FormatError, ParameterError

__all__ = [
    "BACKEND_NAMES", "BACKENDS", "DictionaryHandle", "ReferenceDictionary", "build", "from_bytes",
    "load", "save", "space_report", "generate",
    "BuildError", "EncodingError", "FormatError", "ParameterError",
]
__version__ = "0.1.0"
