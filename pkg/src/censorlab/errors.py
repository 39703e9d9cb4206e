"""Exception hierarchy shared by all censorlab modules."""


class CensorlabError(Exception):
    """Base class for every error raised by censorlab."""


class DimensionError(CensorlabError, ValueError):
    """Shapes, profiles or subsystem indices do not fit together."""


class InvalidStateError(CensorlabError, ValueError):
    """A matrix fails the density-operator invariants."""


class NotHermitianError(CensorlabError, ValueError):
    pass


class ChannelError(CensorlabError, ValueError):
    """A Kraus list does not describe a valid channel."""


class GroupAxiomError(CensorlabError, ValueError):
    pass


class UnsupportedError(CensorlabError):
    """The requested analysis has no decision procedure for this input."""
