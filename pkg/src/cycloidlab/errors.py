"""Exception hierarchy.

Input problems derive from :class:`DomainError` (a ``ValueError``). When the
input is valid but the physics forbids the construction, the error derives
from :class:`PhysicalRegimeError`. The command-line front end maps the two
groups to exit codes 2 and 3.
"""


class CycloidLabError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CycloidLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class RegularityError(DomainError):
    """A curve has a vanishing derivative where a regular curve is required."""


class CurvatureSingularError(DomainError):
    """Curvature vanishes, so the curvature radius is infinite."""


class NotDescendingError(DomainError):
    """A slide rises to or above its starting height."""


class EndpointError(DomainError):
    """A slide does not connect the prescribed endpoints."""


class PerturbationError(DomainError):
    """No admissible random perturbation was found."""


class UnsupportedTargetError(DomainError):
    """The target point lies outside the regime an operation supports."""


class ShootingError(CycloidLabError):
    """The shooting iteration could not bracket or converge on a solution."""


class PhysicalRegimeError(CycloidLabError):
    """The configuration is valid but its physics leaves the modelled regime."""


class TotalInternalReflectionError(PhysicalRegimeError):
    """Snell's relation demands a sine larger than one."""

    def __init__(self, sine: float):
        super().__init__(f"total internal reflection: refracted sine would be {sine:.9g}")
        self.sine = sine


class TurningPointError(PhysicalRegimeError):
    """A layered ray reaches horizontal before the bottom of the medium."""

    def __init__(self, critical_depth: float):
        super().__init__(
            f"ray turns horizontal at depth {critical_depth:.9g} before reaching the bottom"
        )
        self.critical_depth = critical_depth


class CausticError(PhysicalRegimeError):
    """Propagation time reaches the local curvature radius of the front."""
