class OracleError(Exception):
    """Base class of every error raised by this package."""


class GraphFormatError(OracleError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class WorkloadError(OracleError):
    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(f"command {index}: {message}")


class BudgetExceededError(OracleError):
    """More failed vertices than the oracle was built for."""


class DecompositionBudgetExceeded(OracleError):
    """The witness search ran out of its configured work limit."""


class ContractViolation(OracleError):
    """A documented precondition was not met by the caller."""
