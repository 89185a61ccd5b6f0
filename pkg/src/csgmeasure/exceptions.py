"""Exception hierarchy shared by every module."""


class CSGError(Exception):
    """Base class for all errors raised by csgmeasure."""


class DataError(CSGError, ValueError):
    """Malformed input: unreadable files, invalid labels, bad parameters."""


class NumericalError(CSGError, ArithmeticError):
    """A computation left its valid numerical regime."""
