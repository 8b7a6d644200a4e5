"""Exception types raised by the library."""


class FourierModuliError(Exception):
    """Base class for all library errors."""


class DomainError(FourierModuliError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonFiniteError(FourierModuliError, ValueError):
    """Sampled values or coefficients contain NaN or Inf."""

    def __init__(self, index):
        self.index = tuple(int(i) for i in index)
        super().__init__(f"non-finite value at index {self.index}")


class BandLimitError(FourierModuliError, ValueError):
    """A frequency threshold exceeds the usable band of a grid."""

    def __init__(self, t, limit, nyquist):
        self.t = t
        self.limit = limit
        self.nyquist = nyquist
        super().__init__(
            f"t={t:g} exceeds the usable band {limit:g} "
            f"(Nyquist frequency {nyquist:g})"
        )


class FitError(FourierModuliError, ValueError):
    """A decay profile cannot be fitted."""


class RefusedCase(FourierModuliError, ValueError):
    """A verification case was requested outside its range of validity."""
