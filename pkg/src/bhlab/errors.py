"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A requested computation exceeds a configured size budget.

    Raised instead of attempting an enumeration or allocation that would not
    finish at desk scale (subset enumeration past 2^24, dense tensors past the
    scalar budget, vertex enumeration past the bit budget).
    """


class NormOverflowError(ArithmeticError):
    """A norm computation left the representable floating-point range.

    Power sums with exponents below 1 grow quickly; rather than silently
    returning inf, the offending stage is reported.
    """
