"""Exception hierarchy shared by the library and the CLI."""


class PfuError(Exception):
    """Base class for all library errors."""


class AlgebraError(PfuError):
    pass


class UnknownStructure(AlgebraError):
    pass


class UndefinedConditioning(AlgebraError):
    """Conditioning on a zero plausibility."""


class ConditioningDomainError(AlgebraError):
    """Numerator not below denominator, or structure not conditionable."""


class NetworkError(PfuError):
    pass


class CapExceeded(PfuError):
    """A table or state space is larger than the configured cap."""


class QueryValidationError(PfuError):
    """Raised by query validation. ``violations`` holds (condition, variables) pairs."""

    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(f"{cond}: {', '.join(vs) if vs else '-'}" for cond, vs in self.violations)
        super().__init__(text)

    @property
    def conditions(self):
        return [cond for cond, _ in self.violations]


class SolverPreconditionError(PfuError):
    """Solver used on a structure it does not support."""


class OracleConsistencyError(PfuError):
    """A restricted fold in the semantic oracle came out empty."""


class ParseError(PfuError):
    pass


class EncodingError(PfuError):
    pass
