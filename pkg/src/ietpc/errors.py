"""Exception types shared across the package."""

from __future__ import annotations


class IetpcError(Exception):
    """Base class for every error raised by this library."""


# ---------------------------------------------------------------- numeric

class DivisionByZero(IetpcError):
    pass


class IncompatibleRadicands(IetpcError):
    """Arithmetic or comparison mixing two distinct irrational radicands."""


# ---------------------------------------------------------------- words

class KTooLarge(IetpcError):
    pass


class LengthMismatch(IetpcError):
    pass


class PrefixTooShort(IetpcError):
    pass


class BadAlphabet(IetpcError):
    pass


# ---------------------------------------------------------------- iet

class BadPartition(IetpcError):
    pass


class NotBijective(IetpcError):
    pass


class OutOfDomain(IetpcError):
    pass


class OrbitHitsBreakpoint(IetpcError):
    """A forward orbit landed exactly on a partition breakpoint."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"orbit hits a breakpoint at step {step}")


# ---------------------------------------------------------------- pc

class NotInjective(IetpcError):
    pass


class NotContracting(IetpcError):
    pass


class ImageEscapes(IetpcError):
    pass


class DenominatorBlowup(IetpcError):
    """Exact orbit arithmetic exceeded the configured bit budget."""

    def __init__(self, step: int, bits: int, budget: int):
        self.step = step
        self.bits = bits
        self.budget = budget
        super().__init__(
            f"exact orbit needs {bits} bits at step {step}, budget is {budget}"
        )


class CodingUndecidable(IetpcError):
    """A ball-mode orbit straddles a breakpoint, so the next letter is unknown."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"piece membership undecidable at step {step}")


class PeriodicOrbit(IetpcError):
    pass


class InsufficientVisits(IetpcError):
    pass


# ---------------------------------------------------------------- construct

class NotTransitiveEvidence(IetpcError):
    """The sampled orbit cannot serve as evidence of a dense orbit."""


class InterceptMismatch(IetpcError):
    """Two gap pairs in one piece disagree about the affine intercept."""


class InvalidSeed(IetpcError):
    pass


# ---------------------------------------------------------------- io

class MapFormatError(IetpcError):
    pass
