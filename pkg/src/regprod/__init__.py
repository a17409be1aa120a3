"""Zeta-regularized products of geometrically growing sequences.

For a sequence a_n = C r**n (1 + o(1)) with a certified correction envelope,
the generalized zeta function sum a_n**-s has a double pole at s = 0; once
the principal part is removed, exp(-zeta'(0)) defines the regularized product.
The package evaluates it by independent routes (closed form, theta identity
for the golden-ratio case, direct summation plus extrapolation) with
certified error bounds, and ships a CLI (`regprod`) on top.
"""

__version__ = "0.1.0"

from .errors import (
    BoundViolationError,
    BranchConsistencyError,
    ComputationError,
    DomainError,
    ImpracticalPrecisionError,
    InsufficientTermsError,
    InvalidSequenceError,
    NonconvergenceError,
    NonpositiveTermError,
    PoleError,
    RegprodError,
    RouteDisagreementError,
    RouteInapplicableError,
    SpecFileError,
)
from .precision import (
    BigComplex,
    BigReal,
    PrecisionBudget,
    as_budget,
    working_digits,
)
from .sequences import (
    LucasParams,
    SequenceSpec,
    binet_term,
    correction_factor,
    fibonacci_spec,
    geometric_spec,
    lucas_family_spec,
    lucas_spec,
    lucas_term,
    table_spec,
)
from .engine import (
    LaurentData,
    ROUTE_CLOSED_FORM,
    ROUTE_EXTRAPOLATION,
    ROUTE_THETA,
    RegularizedResult,
    laurent_constant,
    meromorphic_term,
    regularized_product,
    regularized_zeta_prime_0,
    tail_log_sum,
)
from .special import (
    delta_via_theta,
    fibonacci_factorial_constant,
    principal_power,
    q_pochhammer,
    q_pochhammer_inf,
    q_pochhammer_pentagonal,
    riemann_zeta_prime_zero,
    theta1_prime_zero,
    theta_product_identity_gap,
)
from .oracles import (
    ExtrapolationReport,
    RouteOutcome,
    VerificationReport,
    applicable_routes,
    compute_route,
    corrected_sum,
    cross_route_verify,
    extrapolate_meromorphic_constant,
    extrapolation_route,
    neville_to_zero,
    regularized_constant_by_extrapolation,
    theta_route,
    zeta_prime_direct,
)
from .specfile import (
    SequenceSpecFile,
    build_sequence,
    is_plain_decimal,
    parse_spec_file,
    read_spec_file,
)

__all__ = [
    "__version__",
    "BoundViolationError",
    "BranchConsistencyError",
    "ComputationError",
    "DomainError",
    "ImpracticalPrecisionError",
    "InsufficientTermsError",
    "InvalidSequenceError",
    "NonconvergenceError",
    "NonpositiveTermError",
    "PoleError",
    "RegprodError",
    "RouteDisagreementError",
    "RouteInapplicableError",
    "SpecFileError",
    "BigComplex",
    "BigReal",
    "PrecisionBudget",
    "as_budget",
    "working_digits",
    "LucasParams",
    "SequenceSpec",
    "binet_term",
    "correction_factor",
    "fibonacci_spec",
    "geometric_spec",
    "lucas_family_spec",
    "lucas_spec",
    "lucas_term",
    "table_spec",
    "LaurentData",
    "ROUTE_CLOSED_FORM",
    "ROUTE_EXTRAPOLATION",
    "ROUTE_THETA",
    "RegularizedResult",
    "laurent_constant",
    "meromorphic_term",
    "regularized_product",
    "regularized_zeta_prime_0",
    "tail_log_sum",
    "delta_via_theta",
    "fibonacci_factorial_constant",
    "principal_power",
    "q_pochhammer",
    "q_pochhammer_inf",
    "q_pochhammer_pentagonal",
    "riemann_zeta_prime_zero",
    "theta1_prime_zero",
    "theta_product_identity_gap",
    "ExtrapolationReport",
    "RouteOutcome",
    "VerificationReport",
    "applicable_routes",
    "compute_route",
    "corrected_sum",
    "cross_route_verify",
    "extrapolate_meromorphic_constant",
    "extrapolation_route",
    "neville_to_zero",
    "regularized_constant_by_extrapolation",
    "theta_route",
    "zeta_prime_direct",
    "SequenceSpecFile",
    "build_sequence",
    "is_plain_decimal",
    "parse_spec_file",
    "read_spec_file",
]
