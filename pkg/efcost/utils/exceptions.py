__all__ = [
    "EntanglementError",
    "DomainError",
    "DimensionError",
    "SizeError",
    "ContractViolation",
    "StateFormatError",
]


class EntanglementError(Exception):
    """Base class of every error raised by efcost."""


class DomainError(EntanglementError, ValueError):
    """A parameter, identifier or range outside what the operation accepts."""


class DimensionError(DomainError):
    """A matrix shape or bipartite split that does not match."""


class SizeError(DomainError):
    """A dimension above one of the configured caps."""


class ContractViolation(EntanglementError, ArithmeticError):
    """A numerical invariant (Hermiticity, positivity, trace, ...) does not hold."""


class StateFormatError(DomainError):
    """A state or Choi document that cannot be parsed."""
