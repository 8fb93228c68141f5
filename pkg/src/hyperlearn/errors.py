"""Exception types shared across the package."""


class HyperlearnError(Exception):
    pass


class ConfigurationError(HyperlearnError, ValueError):
    """Invalid or incomplete parameters."""


class RegimeError(HyperlearnError, ValueError):
    """Parameters fall outside the sparsity regime a formula needs."""


class RegimeWarning(UserWarning):
    """Finite-n parameters violate an asymptotic assumption; runs may still succeed."""


class ContractError(HyperlearnError, ValueError):
    """Mismatched dimensions or misaligned inputs."""
