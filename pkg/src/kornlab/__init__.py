"""Numerical verification of Korn inequalities on thin shells."""

from .ansatz import (
    AnsatzProfile,
    RatioReport,
    bump_profile,
    default_profile,
    make_ansatz,
    ratio_report,
    sharpness_sweep,
)
from .exceptions import (
    ConfigError,
    DegenerateFieldError,
    DomainError,
    EigenSolveError,
    EvaluationError,
    GeometryError,
    KornLabError,
    QuadratureError,
    ResolutionError,
    SingularityError,
    ValidationError,
)
from .geometry import (
    DomainParams,
    MidSurface,
    ThinDomain,
    domain_params,
    h_max,
    make_surface,
    make_thin_domain,
)
from .harmonic2d import (
    ThinDomain2D,
    check_lemma41,
    check_lemma42,
    check_lemma43,
    check_lemma44,
    conjugate_field,
    make_domain2d,
    optimal_shift,
    solve_harmonic,
    strip_chain,
)
from .korn_constants import (
    FieldSpace,
    Korn2ConstantEstimator,
    NestedBoxPair,
    PowerLawRegressor,
    ScalingFit,
    extension_check,
    fit_scaling,
    interpolation_constant,
    korn2_constant_p2,
    subdivision_run,
)
from .shellfield import (
    QuadratureGrid,
    ShellField,
    eval_gradient,
    eval_simplified_gradient,
    field_gradient,
    lp_norm,
    random_bump_field,
    rigid_field,
    strain,
)

__version__ = "0.1.0"
