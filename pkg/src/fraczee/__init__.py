"""Riemann-Liouville fractional calculus toolkit.

Symbolic power-term algebra with closed-form fractional derivatives, an
independent quadrature oracle, a fractional operator laboratory
(gauge connection, angular momentum, spin decomposition), and the
fractional-Zeeman level formula fitted to the built-in hadron table.
"""

from .specfun import GammaPoleError, frac_binomial, gamma, rgamma
from .monomial import (
    AXES,
    DomainError,
    ExprSyntaxError,
    PolyExpr,
    PowerTerm,
    parse_expr,
    rl_derive,
    term,
)
from .rlquad import leibniz_series, rl_derivative_quad
from .operators import (
    GaugeField,
    OperatorExpr,
    OperatorTerm,
    PhasedPoly,
    build_H,
    build_Jx,
    build_Jy,
    build_Jz,
    build_Kx,
    build_Ky,
    build_Kz,
    build_Lz,
    build_Sz,
    build_p,
    check_constant_field,
    commutator,
    curl_frac,
    gamma_connection,
    gauge_field_A,
    omega_connection,
    verify_J_algebra,
)
from .spectrum import (
    REFERENCE_PARAMS,
    FitParams,
    Multiplet,
    casimir_L2,
    casimir_Lz,
    mass,
    spectrum,
)
from .dataset import DatasetError, ParticleRecord, builtin_table, load_records
from .fitting import (
    DEFAULT_EXCLUDE,
    DEFAULT_SEED,
    FitConfig,
    FitError,
    FitResult,
    fit,
    loss_rms_mev,
    objective,
    predict,
    select_records,
)

__version__ = "0.1.0"
