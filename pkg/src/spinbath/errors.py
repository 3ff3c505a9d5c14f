"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented invariant (normalization, range, shape)."""


class DimensionMismatchError(ValueError):
    """Coupled containers disagree on the number of environment spins."""


class CapacityError(RuntimeError):
    """A requested enumeration exceeds the configured size cap."""


class DegenerateDistributionError(ValueError):
    """A statistical operation is undefined for a zero-width distribution."""
