"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter or configuration value violates its constraints."""


class ContractViolation(RuntimeError):
    """An array was handed to an operation with the wrong axis labels."""


class IntegrationDivergedError(RuntimeError):
    """Time integration produced non-finite values.

    Carries the simulation time at which the failure was detected.
    """

    def __init__(self, time: float, message: str | None = None):
        self.time = time
        super().__init__(message or f"integration diverged at t = {time:.6g}")
