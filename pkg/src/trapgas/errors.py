"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the physical or mathematical domain."""


class FeasibilityError(DomainError):
    """Condensation was requested for a geometry that cannot condense."""


class QuadratureError(RuntimeError):
    """A numerical integral did not reach the requested tolerance."""


class ConvergenceError(RuntimeError):
    """A root search exhausted its iteration budget."""


class NoSolutionError(RuntimeError):
    """No chemical potential reproduces the requested particle number."""
