"""Exception types shared across the package."""


class SpecError(ValueError):
    """An environment spec, policy, or parameter violates its contract."""


class InfeasibleError(RuntimeError):
    """The requested operation cannot run on this input (stochastic
    environment where enumeration is required, enumeration cap exceeded,
    incomplete trajectory space where completeness is required)."""
