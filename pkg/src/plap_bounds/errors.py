"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class QuadratureError(ArithmeticError):
    """An integrand produced a non-finite value at a quadrature node."""


class IntegrabilityError(ArithmeticError):
    """Refinement of a Jacobian norm does not converge."""


class IntegrabilityWarning(RuntimeWarning):
    """Successive refinement levels of a norm keep growing by more than 1%."""


class ResolutionError(ValueError):
    """The raster grid is too coarse to resolve the domain interior."""


class DegenerateInputError(ValueError):
    """A Rayleigh quotient was requested for an identically zero function."""


class StagnationError(ArithmeticError):
    """Gradient descent stopped making progress.

    The best value reached so far is kept on the exception so callers can
    still report it.
    """

    def __init__(self, message, best_value, iterations):
        super().__init__(message)
        self.best_value = best_value
        self.iterations = iterations
