"""Exception types shared across the package."""


class InvalidDomainError(ValueError):
    """A polygon failed Jordan-domain validation (too few vertices,
    repeated points, self-intersection, zero area)."""


class BudgetError(RuntimeError):
    """A requested grid exceeds the configured cell budget."""


class EmptyRegionError(ValueError):
    """An operation requires a nonempty region mask."""


class NeckViolationError(RuntimeError):
    """The eroded set splits into several components at the requested
    radius, so the constant-curvature construction is refused."""
