from asymphoton.linalg import ContractViolation


class InvalidConfiguration(ValueError):
    """Physical parameters violate a normalization or range constraint."""


class UnsupportedConfiguration(ValueError):
    """The requested formula is only defined for a narrower configuration."""


class ClosedFormInapplicable(ValueError):
    """The closed form was asked for outside the regime it was derived in."""


class OutsideFrontierDomain(ValueError):
    """A frontier curve was evaluated outside its x-range."""


class SolverFailure(RuntimeError):
    """Root bracketing failed to converge."""


__all__ = [
    "ContractViolation",
    "InvalidConfiguration",
    "UnsupportedConfiguration",
    "ClosedFormInapplicable",
    "OutsideFrontierDomain",
    "SolverFailure",
]
