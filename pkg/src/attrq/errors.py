"""Exception hierarchy shared by every module of the package."""


class AttrqError(Exception):
    """Base class for all errors raised by attrq."""


class CapExceeded(AttrqError):
    """An exhaustive routine was asked to work above its configured size cap."""


class EmptySet(AttrqError, ValueError):
    pass


class InvalidAttractor(AttrqError, ValueError):
    pass


class PointerNotFound(InvalidAttractor):
    """A block has no occurrence crossing an attractor position."""


class SumOverflow(AttrqError, OverflowError):
    pass


class OutOfRange(AttrqError, IndexError):
    pass


class RankOutOfRange(OutOfRange):
    pass


class NoMatch(AttrqError, LookupError):
    pass


class FormatError(AttrqError, ValueError):
    """Malformed, truncated or corrupted serialized data."""
