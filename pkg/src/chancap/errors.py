"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Operands have incompatible Hilbert-space dimensions."""


class CPViolationError(ValueError):
    """A channel parameter falls outside the completely positive range."""

    def __init__(self, d: int, lam: float):
        self.d = d
        self.lam = lam
        lo = -1.0 / (d * d - 1)
        super().__init__(
            f"lambda={lam} is not completely positive for d={d}; "
            f"admissible interval is [{lo:.6f}, 1]"
        )


class CapabilityError(ValueError):
    """Requested size exceeds the desk-scale cap this package supports."""
