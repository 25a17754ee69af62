"""Exception types raised across the package."""


class DiscordLabError(ValueError):
    """Base class for all argument and contract errors."""


class DimensionError(DiscordLabError):
    """Operands have incompatible shapes."""


class DomainError(DiscordLabError):
    """An argument lies outside the domain of a function."""


class ContractError(DiscordLabError):
    """An input violates a documented precondition (e.g. not normalized)."""


class CapacityError(DiscordLabError):
    """A message size exceeds the factorial guard."""


class DegenerateInputError(DiscordLabError):
    """An input makes the requested quantity undefined."""


class SingularPointError(DomainError):
    """Evaluation at a point where the expression is not defined."""
