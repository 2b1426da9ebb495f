"""Exception types shared across the package.

Every error carries a short machine-readable name (the class name) so the
CLI can report it verbatim and map it to an exit code: configuration and
input problems exit 1, failures during a run exit 2.
"""


class AnisoflowError(Exception):
    """Base class for all package errors."""


# -- anisotropy construction ------------------------------------------------

class NonPositiveSupport(AnisoflowError):
    """The anisotropy function is not strictly positive on the grid."""


class NonConvexAnisotropy(AnisoflowError):
    """The convexity density ptilde'' + ptilde is not positive."""


class AsymmetricAnisotropy(AnisoflowError):
    """Odd harmonics present although point symmetry was required."""


# -- curve / flow runtime ----------------------------------------------------

class ConvexityLost(AnisoflowError):
    """The curvature density p + p'' dropped to or below the tolerance."""


class NonFiniteState(AnisoflowError):
    """A support-function sample became NaN or infinite."""


# -- diagnostics --------------------------------------------------------------

class NegativeDiscriminant(AnisoflowError):
    """L^2 < 4*pi*A beyond tolerance; the quadratures are inconsistent."""


class EnvelopeViolated(AnisoflowError):
    """A recorded deficit escaped the exponential decay envelope."""


# -- configuration and output --------------------------------------------------

class ParseError(AnisoflowError):
    """The config document is not well formed."""


class ValidationError(AnisoflowError):
    """The config parsed but violates an invariant; message names it."""


class IoError(AnisoflowError):
    """Writing an output file failed."""
