"""Exception hierarchy shared by all logosearch modules."""


class LogoSearchError(Exception):
    """Base class for every error raised by this package."""


class DecodeError(LogoSearchError):
    """Image stream is recognized but malformed or truncated."""


class UnsupportedFormat(LogoSearchError):
    """Image stream is not JPEG or PNG."""


class InvalidParam(LogoSearchError):
    """A parameter is outside its documented domain."""


class ImageTooSmall(LogoSearchError):
    """Image is too small for the requested operation."""


class InsufficientEdges(LogoSearchError):
    """Fewer edge pixels than sample points requested."""


class DimMismatch(LogoSearchError):
    """Vector/matrix dimensions disagree."""


class TooFewSamples(LogoSearchError):
    """Fewer training samples than clusters requested."""


class DuplicateDoc(LogoSearchError):
    """The same document id was added twice to an index."""


class FormatError(LogoSearchError):
    """A serialized artifact does not match its declared format."""


class UniverseMismatch(LogoSearchError):
    """Rankings to be fused cover different document sets."""


class GroupTooSmall(LogoSearchError):
    """A query group has fewer than two members."""
