"""Exception hierarchy shared by every ppdorbit module."""

from __future__ import annotations


class OrbitError(Exception):
    """Base class for all ppdorbit errors."""


class DigitCapExceeded(OrbitError):
    """A requested term would exceed the configured decimal digit cap."""

    def __init__(self, index: int, projected_digits: int, cap: int):
        self.index = index
        self.projected_digits = projected_digits
        self.cap = cap
        super().__init__(
            f"term {index} projected at ~{projected_digits} digits, cap is {cap}"
        )


class PreperiodicOrbit(OrbitError):
    """Zero is preperiodic for the requested map, so the operation does not apply."""

    def __init__(self, c: int, d: int, case: str | None = None):
        self.c = c
        self.d = d
        self.case = case
        msg = f"zero is preperiodic for z^{d} + ({c})"
        if case:
            msg += f" ({case})"
        super().__init__(msg)


class ZeroValuationUndefined(OrbitError, ValueError):
    pass


class NotPrime(OrbitError, ValueError):
    pass


class IndexOutOfRange(OrbitError, IndexError):
    pass


class PreconditionViolated(OrbitError, ValueError):
    pass


class RigidityViolation(OrbitError, ArithmeticError):
    """N_n failed to divide |b_n| exactly.

    This can only happen through a bug or corrupted input; it is never
    swallowed.
    """
