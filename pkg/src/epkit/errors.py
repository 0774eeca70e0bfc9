"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class TruncationError(ArithmeticError):
    """A truncated series could not be certified to the requested tolerance."""


class DegenerateStatsError(ValueError):
    """The partition statistics admit no interior likelihood root (need 1 < K_n < n)."""


class SamplingError(RuntimeError):
    """A rejection sampler exceeded its iteration cap."""
