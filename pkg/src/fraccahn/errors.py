"""Exception hierarchy shared by every fraccahn module."""


class FracCahnError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FracCahnError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(FracCahnError, ValueError):
    """Invalid or inconsistent solver, grid or CLI configuration."""


class StructuralError(FracCahnError, ValueError):
    """Operands that cannot be combined (different alpha or different space)."""


class SamplingError(FracCahnError, ValueError):
    """A sampled function returned a non-finite value."""


class ContractError(FracCahnError, ValueError):
    """A caller broke an operation's precondition."""


class NumericalFailure(FracCahnError, ArithmeticError):
    """NaN or overflow detected in a computed coefficient field."""
