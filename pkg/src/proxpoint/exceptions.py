"""Exception types raised by input validation and the numerical routines."""


class ProxPointError(ValueError):
    """Base class for every error raised by this package."""


class DimensionMismatch(ProxPointError):
    pass


class SupportViolation(ProxPointError):
    """Raised when ``p_i > 0`` but the reference distribution has ``q_i = 0``."""


class NotStochastic(ProxPointError):
    pass


class NegativeEntry(ProxPointError):
    pass


class InvalidParams(ProxPointError):
    pass


class TooLarge(ProxPointError):
    pass


class AllZero(ProxPointError):
    """Every log-coordinate is ``-inf``: the distribution has empty support."""


class InvalidCode(ProxPointError):
    pass


class SizeMismatch(ProxPointError):
    pass
