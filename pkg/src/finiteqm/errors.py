"""Exception types raised by finiteqm."""


class ConfigError(ValueError):
    """Invalid lattice or run configuration."""


class BoundaryError(ConfigError):
    """An operation was called with the wrong boundary kind."""


class QuantumNumberError(ConfigError):
    """Quantum number, parity or mode index outside the admissible range."""


class EigensolverError(RuntimeError):
    """The iterative eigensolver hit its iteration cap."""

    def __init__(self, message, d=None):
        super().__init__(message if d is None else f"{message} (d={d})")
        self.d = d


class SpectrumMismatchError(RuntimeError):
    """Analytic and numeric degeneracy structures disagree."""
