"""Exception hierarchy for catcoh"""


class CatcohError(Exception):
    """Base class for all catcoh errors"""


class InvalidParameterError(CatcohError, ValueError):
    """A physical parameter is outside the values an operation accepts"""


class DomainError(CatcohError, ValueError):
    """A closed form or bound was evaluated outside its validity domain"""


class StateValidationError(CatcohError, ValueError):
    """A state, matrix or unitary violates its defining invariants"""


class CapacityError(CatcohError, RuntimeError):
    """The joint state ran out of ladder window"""


class DimensionMismatchError(CatcohError, ValueError):
    """Operands live on spaces of different dimension"""


class MissingLabelsError(CatcohError, ValueError):
    """A density matrix carries no total-number labels"""


class OracleMismatchError(CatcohError, AssertionError):
    """Two independent evaluations of the same quantity disagree"""


class ConfigError(CatcohError):
    """Invalid run configuration"""
