"""Exception hierarchy shared by all modules."""


class ChannelError(Exception):
    """Base class for every error raised by this package."""


class InvalidMachine(ChannelError, ValueError):
    """A channel machine violates one of its structural invariants."""


class NotStronglyConnected(InvalidMachine):
    pass


class DuplicateNoiseEdge(InvalidMachine):
    pass


class DanglingState(InvalidMachine):
    pass


class NoiseOutOfRange(InvalidMachine):
    pass


class NotIrreducible(ChannelError, ValueError):
    pass


class NoConvergence(ChannelError, RuntimeError):
    pass


class SizeCap(ChannelError, RuntimeError):
    """An enumeration would exceed its configured size cap."""


class NoSuchNoiseEdge(ChannelError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "no such noise edge"


class KindMismatch(ChannelError, TypeError):
    """An operation was called on a channel of the wrong kind."""


class TooManyErasures(ChannelError, ValueError):
    pass


class QuantizerSaturation(ChannelError, ArithmeticError):
    pass


class PolicyViolation(ChannelError, ValueError):
    """A noise policy emitted a symbol the channel machine does not allow."""
