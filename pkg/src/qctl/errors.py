"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter is outside the domain a routine is defined on."""


class ConfigError(ValueError):
    """An experiment configuration document is invalid.

    ``path`` identifies the offending field, e.g. ``"trajectories.dt"``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class LowDensityError(RuntimeError):
    """The velocity field was requested where the density is below the floor."""


class NumericalGuardError(RuntimeError):
    """A numerical sanity guard tripped (truncation, normalization, realness)."""
