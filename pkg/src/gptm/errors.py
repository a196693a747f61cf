"""Exception hierarchy shared by every module of the package."""


class GPTError(Exception):
    """Base class for all errors raised by :mod:`gptm`."""


class SystemMismatch(GPTError, ValueError):
    """Objects living on different systems were combined."""


class InvalidDimension(GPTError, ValueError):
    pass


class IndexOutOfRange(GPTError, IndexError):
    pass


class NotClassical(GPTError, TypeError):
    """An operation that needs a simplex (classical) system got something else.

    Raised by the resolution of the identity and therefore by the LOCC
    decomposition of a mediated circuit whose field is not classical.
    """


class NotPositive(GPTError, ValueError):
    pass


class NotCP(GPTError, ValueError):
    pass


class InvalidCircuit(GPTError, ValueError):
    pass


class TrajectoryBlowup(GPTError, RuntimeError):
    pass


class ArityMismatch(GPTError, ValueError):
    pass


class UnsupportedMethod(GPTError, ValueError):
    pass


class WitnessNotFound(GPTError, LookupError):
    pass


class InvalidGeometry(GPTError, ValueError):
    pass
