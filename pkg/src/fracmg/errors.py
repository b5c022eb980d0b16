"""Exception types raised across the package."""


class FracmgError(Exception):
    """Base class for all package-specific errors."""


class OverlappingFractures(FracmgError):
    """Two collinear fracture segments share a sub-interval."""


class SegmentOutsideDomain(FracmgError):
    """A fracture segment does not lie inside the closed domain rectangle."""


class UnsupportedValence(FracmgError):
    """An intersection point with 2 or more than 4 incident fracture ends."""


class ConfigMismatch(FracmgError):
    """A coefficient field is not defined on some cell or element."""


class DimensionMismatch(FracmgError):
    """Vector length does not match the DOF layout it is used with."""


class SingularBlock(FracmgError):
    """A local Vanka block matrix is numerically singular."""


class SingularSystem(FracmgError):
    """The assembled global system is singular (e.g. pure-Neumann problem)."""


class NoConvergence(FracmgError):
    """Iteration limit reached before the residual tolerance was met."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnknownPreset(FracmgError):
    """Requested experiment preset name does not exist."""


class ConfigError(FracmgError):
    """Experiment configuration file failed validation."""
