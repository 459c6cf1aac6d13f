"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input failed a structural or numerical check."""


class NotPSDError(ValidationError):
    """Matrix has an eigenvalue below the round-off tolerance."""

    def __init__(self, eigenvalue, tol=1e-10):
        self.eigenvalue = float(eigenvalue)
        super().__init__(f"matrix is not PSD: eigenvalue {self.eigenvalue:.3e} < -{tol:g}")


class OptimizationError(RuntimeError):
    """No restart of a local search reached its convergence criterion."""

    def __init__(self, message, best_value=None):
        self.best_value = best_value
        super().__init__(message)
