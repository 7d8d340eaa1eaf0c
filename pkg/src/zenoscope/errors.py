"""Exception types shared across the package."""


class ZenoscopeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ZenoscopeError, ValueError):
    """An argument is outside the mathematical or physical domain of an operation."""


class DegenerateTransitionError(DomainError):
    """The leading coupling coefficient of a transition vanishes.

    When the lowest-multipole, lowest-order coupling amplitude is zero
    (which happens e.g. for electric dipole transitions between levels that
    share the same principal quantum number), the free decay rate that
    normalizes the modified/free rate ratio is no longer set by that term,
    and the closed-form ratio is undefined.  Such inputs are rejected
    rather than silently falling back to another normalization.
    """


class NumericalError(ZenoscopeError, RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""
