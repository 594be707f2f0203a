from typing import Optional


class MaghomError(Exception):
    """Base class for every error raised by the package."""


class GraphParseError(MaghomError, ValueError):
    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GraphValidationError(MaghomError, ValueError):
    pass


class ArgumentError(MaghomError, ValueError):
    pass


class PreconditionError(MaghomError, ValueError):
    pass


class ContractViolation(MaghomError, RuntimeError):
    pass


class DomainError(MaghomError, ValueError):
    pass


class BudgetExceeded(MaghomError):
    def __init__(self, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(f"basis size {size} exceeds budget {budget}")


class OracleMismatch(MaghomError, RuntimeError):
    pass
