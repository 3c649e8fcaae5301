"""Exception hierarchy shared by all modules."""


class TwoCompError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(TwoCompError, ValueError):
    pass


class DimensionError(TwoCompError, ValueError):
    pass


class ValidationError(TwoCompError, ValueError):
    pass


class DomainError(TwoCompError, ValueError):
    pass


class NumericalOverflowError(TwoCompError, FloatingPointError):
    """A non-finite value appeared while assembling a named term."""

    def __init__(self, term, t=None):
        self.term = term
        self.t = t
        where = "" if t is None else f" at t={t:.6g}"
        super().__init__(f"non-finite values in term {term!r}{where}")


class BlowUpSuspected(TwoCompError, RuntimeError):
    """Raised when a step trips the gradient guard or produces non-finite output."""

    def __init__(self, t, diagnostic, value):
        self.t = t
        self.diagnostic = diagnostic
        self.value = value
        super().__init__(f"blow-up suspected at t={t:.6g}: {diagnostic}={value:.6g}")


class CFLViolation(TwoCompError, ValueError):
    def __init__(self, dt, limit):
        self.dt = dt
        self.limit = limit
        super().__init__(f"dt={dt:.6g} exceeds the CFL limit {limit:.6g}")


class WindowEscapeError(TwoCompError, ValueError):
    pass


class InsufficientTailData(TwoCompError, ValueError):
    pass


class WeightOverflowError(TwoCompError, OverflowError):
    pass
