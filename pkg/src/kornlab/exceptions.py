"""Exception hierarchy for kornlab."""


class KornLabError(Exception):
    """Base class for every error raised by kornlab."""


class GeometryError(KornLabError):
    """Bad surface construction or a non-finite evaluator value."""


class ValidationError(KornLabError):
    """A thin-domain profile or 2D domain violates its thickness bounds."""


class SingularityError(KornLabError):
    """The normal Jacobian factor 1 + t*kappa dropped below 1/2."""


class EvaluationError(KornLabError):
    """A non-finite integrand or field value was encountered."""


class DomainError(KornLabError):
    """A field does not fit into the patch it is defined on."""


class DegenerateFieldError(KornLabError):
    """A ratio has a zero denominator (the field is zero in a relevant norm)."""


class EigenSolveError(KornLabError):
    """The generalized eigen-iteration stagnated."""

    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)


class QuadratureError(KornLabError):
    """Adaptive quadrature failed on some subinterval."""


class ResolutionError(KornLabError):
    """A quadrature piece ended up without grid cells."""


class ConfigError(KornLabError):
    """Invalid experiment configuration; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
