"""Exception hierarchy shared by every module of the package."""


class VilenkinError(ValueError):
    """Base class for all domain errors raised by :mod:`vilenkin`."""


class IndexOutOfRange(VilenkinError):
    """A frequency or index exceeds the truncation depth."""


class InvalidDigit(VilenkinError):
    pass


class DepthExceeded(VilenkinError):
    pass


class UnsupportedNorm(VilenkinError):
    pass


class CannotCoarsen(VilenkinError):
    pass


class InvalidArgument(VilenkinError):
    pass


class InvalidRadix(VilenkinError):
    pass


class InvalidAtom(VilenkinError):
    pass


class InvalidCheckpoint(VilenkinError):
    pass


class InvalidConfig(VilenkinError):
    pass
