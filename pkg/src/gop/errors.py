"""Exception hierarchy shared across the package."""


class GOPError(Exception):
    """Base class for every error raised by :mod:`gop`."""


class RankDeficient(GOPError, ValueError):
    """A matrix does not have the rank the computation relies on."""


class DegenerateNormalization(GOPError, ValueError):
    """The kernel vector cannot be rescaled to a monic polynomial."""


class ZeroPolynomial(GOPError, ValueError):
    pass


class DomainViolation(GOPError, ValueError):
    """A point lies outside the domain of an eigenfunction family."""


class RegionViolation(GOPError, ValueError):
    """An eigen-parameter lies outside the admissible region."""


class BranchViolation(GOPError, ValueError):
    """A value has no preimage under a spectral map.

    The offending value is kept on ``.value``.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class DomainEscape(GOPError, ValueError):
    """A sampling grid leaves the domain where the iteration operator is defined."""


class QuadratureFailure(GOPError, RuntimeError):
    pass


class BoundaryViolation(GOPError, ValueError):
    """A kernel does not vanish at the integration limits to the required order."""


class AdmissibilityFailure(GOPError, ValueError):
    pass


class MissingMeasurement(GOPError, KeyError):
    pass


class SchemeError(GOPError, ValueError):
    """A functional/iteration combination that cannot be realized on samples."""


class ConfigError(GOPError, ValueError):
    """Invalid experiment configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
