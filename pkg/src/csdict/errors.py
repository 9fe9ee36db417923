from ._io import FormatError

__all__ = ["ParameterError", "BuildError", "EncodingError", "FormatError"]


class ParameterError(ValueError):
    """An argument is outside the range a structure accepts."""


class BuildError(ValueError):
    """The input cannot be turned into the requested structure."""


class EncodingError(ValueError):
    """A symbol has no codeword, or an encoded stream is corrupt."""
