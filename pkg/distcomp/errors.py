"""Exception hierarchy for distcomp.

Every error carries the process exit code the command line reports for it.
"""


class DistCompError(Exception):
    """Base class for all distcomp errors."""

    exit_code = 1


class ParameterError(DistCompError, ValueError):
    """Invalid arguments: bad flags, degenerate chords, broken invariants."""

    exit_code = 2


class ConfigError(DistCompError):
    """Unreadable or malformed configuration file."""

    exit_code = 2


class InfeasibleChordError(DistCompError):
    """Boundary data that no comparison function of the requested k realizes."""

    exit_code = 3


class DomainError(DistCompError, ValueError):
    """A value outside the domain of a closed form or a guard."""

    exit_code = 4


class SingularityError(DomainError):
    """A dividing factor vanished (point on the geodesic, g = 0, antipodes)."""


class GridError(DomainError):
    """Sample grid unusable for finite differences."""


class BracketError(DistCompError):
    """Threshold bisection endpoints classify identically."""

    exit_code = 5
