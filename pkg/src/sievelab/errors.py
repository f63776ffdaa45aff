"""Error taxonomy shared by the core modules, the service and the CLI.

Exit-code / HTTP mapping:
    InvalidArgumentError -> exit 2 / HTTP 422
    ResourceLimitError   -> exit 3 / HTTP 413
    ConvergenceError     -> exit 4 / HTTP 500
"""


class SieveLabError(Exception):
    kind = "error"


class InvalidArgumentError(SieveLabError, ValueError):
    kind = "invalid-argument"


class ResourceLimitError(SieveLabError, RuntimeError):
    """Raised before starting work that would blow a configured budget."""

    kind = "resource-limit"

    def __init__(self, message, predicted=None, budget=None):
        super().__init__(message)
        self.predicted = predicted
        self.budget = budget


class ConvergenceError(SieveLabError, RuntimeError):
    """Iteration hit max_iters before the residual target; carries the best estimate."""

    kind = "convergence"

    def __init__(self, message, estimate=None, residual=None, iterations=None):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual
        self.iterations = iterations
