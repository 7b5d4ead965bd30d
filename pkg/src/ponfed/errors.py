"""Exception types raised by the simulator."""


class PonFedError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(PonFedError):
    pass


class NonFiniteWeight(PonFedError):
    pass


class ZeroSamples(PonFedError):
    pass


class EmptyInput(PonFedError):
    pass


class MixedOnu(PonFedError):
    pass


class EmptyBatch(PonFedError):
    pass


class InvalidConfig(PonFedError):
    pass


class EmptySelection(PonFedError):
    pass


class InvalidCounts(PonFedError):
    pass


class TooManyRequested(PonFedError):
    pass


class IoError(PonFedError):
    pass


class SchemaError(PonFedError):
    pass
