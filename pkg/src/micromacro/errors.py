"""Error types shared across the solver."""


class ConfigurationError(ValueError):
    """A run configuration or model parameter is invalid."""


class InvalidStateError(RuntimeError):
    """A macroscopic state became non-physical (rho <= 0, T <= 0, or a
    non-SPD pressure tensor).

    Carries the offending cell index so failed runs can be diagnosed;
    solvers abort instead of clipping, since silent clipping would corrupt
    convergence studies.
    """

    def __init__(self, message, cell=None, value=None):
        if cell is not None:
            message = f"{message} at cell {cell}"
        if value is not None:
            message = f"{message} (value {value})"
        super().__init__(message)
        self.cell = cell
        self.value = value
