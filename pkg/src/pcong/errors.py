"""Exception hierarchy shared by all pcong modules."""


class PcongError(Exception):
    """Base class for all engine errors."""


class ModulusMismatch(PcongError):
    """Two series with different prime moduli were combined."""


class OffsetError(PcongError):
    """Support-class (mod 24) bookkeeping was violated."""


class PrecisionError(PcongError):
    """A computation needs more known coefficients than are available."""


class DivisionError(PcongError):
    """Series division with a non-invertible or too-short divisor."""


class PreconditionError(PcongError):
    """An operation's documented precondition does not hold."""


class ConstructionContradiction(PcongError):
    """A built object violates an identity it is guaranteed to satisfy.

    Raised loudly: this indicates a bug in the engine (or corrupted
    inputs), never a legitimate run-time condition.
    """


class DataFormatError(PcongError):
    """A newform data file is malformed or inconsistent."""
