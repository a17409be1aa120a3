"""Independent numerical routes used to validate the closed-form engine.

zeta_prime_direct sums the derivative series on the convergence half-plane
with a certified tail bound.  The extrapolation route samples
h(s) = zeta'(s) + 1/(L s**2) on a halving schedule and Neville-extrapolates
to s = 0, where h tends to the regularized zeta'(0).  cross_route_verify runs
every route that applies to a sequence and compares the products against the
combined certified bounds.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Tuple

from mpmath import exp, expm1, fabs, log, log1p, mp, mpf

from .engine import (
    ROUTE_CLOSED_FORM,
    ROUTE_EXTRAPOLATION,
    ROUTE_THETA,
    RegularizedResult,
    _smallest_cutoff,
    meromorphic_term,
    regularized_product,
)
from .errors import (
    DomainError,
    ImpracticalPrecisionError,
    InsufficientTermsError,
    NonconvergenceError,
    RegprodError,
    RouteInapplicableError,
)
from .precision import BigReal, PrecisionBudget, as_budget
from .sequences import SequenceSpec
from .special import _delta_via_theta_detail

_DEFAULT_TERM_CAP = 10 ** 6
# The extrapolation route is a structural check held to 1e-6, so its samples
# run at a fixed modest precision regardless of the requested budget.
_SAMPLE_DIGITS = 16
_SCHEDULE_START = (1, 4)  # s0 = 1/4
_MAX_LEVELS = 12


def _term_cap(explicit: Optional[int]) -> int:
    if explicit is not None:
        if explicit < 1:
            raise DomainError("term cap must be positive")
        return explicit
    raw = os.environ.get("REGPROD_MAX_TERMS")
    if raw is None:
        return _DEFAULT_TERM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError("REGPROD_MAX_TERMS must be an integer, got %r" % raw)
    if cap < 1:
        raise DomainError("REGPROD_MAX_TERMS must be positive")
    return cap


def _direct_tail_bound(big_l, big_b, k, rho, s, n):
    """Certified bound on |sum_{m>n} ln(a_m) a_m**-s|.

    Uses |ln delta_m| <= d := -ln(1 - K rho**(n+1)) for all m > n, so
    ln a_m <= m L + |B| + d and a_m**-s <= e**(-s(mL + B - d)); the resulting
    geometric-with-linear-factor series sums in closed form.
    """
    x_envelope = k * rho ** (n + 1)
    if x_envelope >= 1:
        return mpf("inf")
    d = -log1p(-x_envelope)
    x = exp(-s * big_l)
    one_minus_x = -expm1(-s * big_l)
    geo = x ** (n + 1)
    linear_part = big_l * geo * ((n + 1) - n * x) / one_minus_x ** 2
    const_part = (fabs(big_b) + d) * geo / one_minus_x
    return exp(-s * (big_b - d)) * (linear_part + const_part)


def _zeta_prime_direct_detail(spec: SequenceSpec, s, budget, max_terms=None):
    budget = as_budget(budget)
    with budget.workdps():
        s = mpf(s)
        if not s > 0:
            raise DomainError("direct summation of zeta' requires s > 0")
        big_l = log(spec.growth_ratio())
        big_b = log(spec.amplitude())
        k = spec.bound_K()
        rho = spec.bound_rho()
        cap = _term_cap(max_terms)
        if spec.max_index is not None and spec.max_index < cap:
            cap, exc = spec.max_index, InsufficientTermsError
        else:
            exc = ImpracticalPrecisionError
        cutoff = _smallest_cutoff(
            lambda n: _direct_tail_bound(big_l, big_b, k, rho, s, n),
            budget.truncation_target, cap, exc,
            "zeta' direct sum at s=%s" % s)
        total = mpf(0)
        logs = spec.log_term_iter()
        for _ in range(cutoff):
            log_a = next(logs)
            total -= log_a * exp(-s * log_a)
        bound = _direct_tail_bound(big_l, big_b, k, rho, s, cutoff)
        slack = (fabs(total) + 1) * max(cutoff, 1) * mpf(10) ** (2 - mp.dps)
        return BigReal(total, bound + slack), cutoff


def zeta_prime_direct(spec: SequenceSpec, s, budget, max_terms=None) -> BigReal:
    """-sum_n ln(a_n) a_n**-s for real s > 0, with certified truncation.

    The cutoff never exceeds max_terms (default 10**6, or the
    REGPROD_MAX_TERMS environment override); an unreachable target raises
    instead of returning an uncertified value.
    """
    value, _ = _zeta_prime_direct_detail(spec, s, budget, max_terms)
    return value


def _corrected_tail_bound(big_l, big_b, k, rho, s, n):
    # |ln delta_m| <= c1 K rho**m for m > n, with c1 = -ln(1-X)/X at
    # X = K rho**(n+1); each summand is then bounded through the mean value
    # theorem by c1 K rho**m e**(s d) e**(-s(mL+B)) (1 + s(mL+|B|) + s d).
    x_envelope = k * rho ** (n + 1)
    if x_envelope >= 1:
        return mpf("inf")
    d = -log1p(-x_envelope)
    c1 = d / x_envelope
    y = exp(-s * big_l) * rho
    one_minus_y = 1 - y
    if one_minus_y <= 0:
        return mpf("inf")
    geo = y ** (n + 1)
    sum_m_y = geo * ((n + 1) - n * y) / one_minus_y ** 2
    sum_y = geo / one_minus_y
    return (exp(s * d) * exp(-s * big_b) * c1 * k
            * (s * big_l * sum_m_y + (1 + s * fabs(big_b) + s * d) * sum_y))


def corrected_sum(spec: SequenceSpec, s, budget) -> BigReal:
    """The entire part of the add-and-subtract split at real s > 0:
    -sum_n [ln(a_n) a_n**-s - (nL+B) e**(-s(nL+B))].

    zeta_prime_direct(s) equals meromorphic_term(L, B, s) + corrected_sum(s);
    the identity is what the cross-checks assert at finite s.
    """
    budget = as_budget(budget)
    with budget.workdps():
        s = mpf(s)
        if not s > 0:
            raise DomainError("the corrected sum requires s > 0")
        big_l = log(spec.growth_ratio())
        big_b = log(spec.amplitude())
        k = spec.bound_K()
        rho = spec.bound_rho()
        cap = spec.max_index if spec.max_index is not None else _DEFAULT_TERM_CAP
        exc = InsufficientTermsError if spec.max_index is not None else ImpracticalPrecisionError
        cutoff = _smallest_cutoff(
            lambda n: _corrected_tail_bound(big_l, big_b, k, rho, s, n),
            budget.truncation_target, cap, exc,
            "corrected sum at s=%s" % s)
        total = mpf(0)
        logs = spec.log_term_iter()
        for n in range(1, cutoff + 1):
            log_a = next(logs)
            mean = n * big_l + big_b
            total -= log_a * exp(-s * log_a) - mean * exp(-s * mean)
        bound = _corrected_tail_bound(big_l, big_b, k, rho, s, cutoff)
        slack = (fabs(total) + 1) * max(cutoff, 1) * mpf(10) ** (2 - mp.dps)
        return BigReal(total, bound + slack)


def neville_to_zero(points, values):
    """Neville polynomial extrapolation to 0.

    Returns (limit, last-step error estimate, successive diagonal gaps); the
    estimate is heuristic, not a certified bound.
    """
    pts = [mpf(p) for p in points]
    p = [mpf(v) for v in values]
    n = len(p)
    if n < 3:
        raise DomainError("extrapolation needs at least 3 samples")
    if len(pts) != n:
        raise DomainError("points and values must have equal length")
    for a, b in zip(pts, pts[1:]):
        if not (a > b > 0):
            raise DomainError("sample points must be strictly decreasing and positive")
    diag = [p[0]]
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (pts[i] * p[i + 1] - pts[i + m] * p[i]) / (pts[i] - pts[i + m])
        diag.append(p[0])
    gaps = [fabs(diag[i] - diag[i - 1]) for i in range(1, n)]
    return p[0], gaps[-1], gaps


@dataclass(frozen=True)
class ExtrapolationReport:
    """Outcome of the s -> 0 extrapolation of h(s) = zeta'(s) + 1/(L s**2)."""

    sample_points: Tuple[mpf, ...]
    sample_values: Tuple[mpf, ...]
    limit: mpf
    error_estimate: mpf
    converged: bool
    terms_used: int


def regularized_constant_by_extrapolation(
        spec: SequenceSpec, budget, levels: int = 9,
        max_terms: Optional[int] = None) -> ExtrapolationReport:
    """Extrapolate h(s) = zeta_prime_direct(s) + 1/(L s**2) to s = 0 over the
    halving schedule s_k = (1/4) 2**-k, k = 0..levels-1.

    h tends to the regularized zeta'(0); this route is a structural check
    held to 1e-6, so samples are evaluated at a fixed internal precision and
    the requested budget only labels the report.  The error estimate (last
    diagonal gap of the Neville tableau) is heuristic.
    """
    as_budget(budget)  # validate, even though samples use the internal level
    if not 3 <= levels <= _MAX_LEVELS:
        raise DomainError("levels must lie in [3, %d]" % _MAX_LEVELS)
    if spec.max_index is not None:
        raise RouteInapplicableError(
            "extrapolation needs arbitrarily many terms; finite tables do not qualify")
    sample_budget = PrecisionBudget(_SAMPLE_DIGITS)
    num, den = _SCHEDULE_START
    points = []
    values = []
    terms_total = 0
    for k in range(levels):
        with sample_budget.workdps():
            s = mpf(num) / den / 2 ** k
        sample, used = _zeta_prime_direct_detail(spec, s, sample_budget, max_terms)
        terms_total += used
        with sample_budget.workdps():
            big_l = log(spec.growth_ratio())
            points.append(s)
            values.append(sample.value + 1 / (big_l * s * s))
    with sample_budget.workdps():
        limit, estimate, gaps = neville_to_zero(points, values)
    converged = bool(estimate <= mpf("1e-6") and gaps[-1] <= gaps[0])
    if gaps[-1] > gaps[0] and gaps[-1] > mpf("1e-3"):
        raise NonconvergenceError(
            "extrapolation tableau is not contracting (first gap %s, last gap %s)"
            % (gaps[0], gaps[-1]))
    return ExtrapolationReport(
        sample_points=tuple(points),
        sample_values=tuple(values),
        limit=limit,
        error_estimate=estimate,
        converged=converged,
        terms_used=terms_total,
    )


def extrapolate_meromorphic_constant(log_ratio, log_amplitude, budget,
                                     levels: int = 9) -> BigReal:
    """Richardson-style oracle for the Laurent constant: extrapolate
    meromorphic_term(s) + 1/(L s**2) to s = 0.  The tag is the heuristic
    Neville estimate, not a certified bound."""
    budget = as_budget(budget)
    if not 3 <= levels <= _MAX_LEVELS:
        raise DomainError("levels must lie in [3, %d]" % _MAX_LEVELS)
    with budget.workdps():
        big_l = mpf(log_ratio)
        num, den = _SCHEDULE_START
        points = []
        values = []
        for k in range(levels):
            s = mpf(num) / den / 2 ** k
            sample = meromorphic_term(log_ratio, log_amplitude, s, budget)
            points.append(s)
            values.append(sample.value + 1 / (big_l * s * s))
        limit, estimate, _ = neville_to_zero(points, values)
        return BigReal(limit, estimate)


def theta_route(spec: SequenceSpec, budget) -> RegularizedResult:
    """Regularized product via the theta identity; golden-ratio instance only."""
    if not spec.supports_theta:
        raise RouteInapplicableError(
            "the theta route applies only to the golden-ratio sequence")
    budget = as_budget(budget)
    delta, terms = _delta_via_theta_detail(budget)
    with budget.workdps():
        zp = -delta.log()
        return RegularizedResult(
            zeta_prime_0=zp,
            delta=delta,
            route=ROUTE_THETA,
            error_bound=delta.err + budget.rounding_allowance,
            terms_used=terms,
            working_digits=budget.working_digits,
        )


def extrapolation_route(spec: SequenceSpec, budget,
                        max_terms: Optional[int] = None) -> RegularizedResult:
    """Regularized product from the extrapolated zeta'(0); tolerance 1e-6."""
    budget = as_budget(budget)
    report = regularized_constant_by_extrapolation(spec, budget, max_terms=max_terms)
    with PrecisionBudget(_SAMPLE_DIGITS).workdps():
        tolerance = max(report.error_estimate, mpf("1e-6"))
        zp = BigReal(report.limit, tolerance)
        delta = zp.exp_neg()
        return RegularizedResult(
            zeta_prime_0=zp,
            delta=delta,
            route=ROUTE_EXTRAPOLATION,
            error_bound=delta.err,
            terms_used=report.terms_used,
            working_digits=PrecisionBudget(_SAMPLE_DIGITS).working_digits,
        )


def applicable_routes(spec: SequenceSpec):
    """Routes that can in principle run for this sequence."""
    routes = [ROUTE_CLOSED_FORM]
    if spec.supports_theta:
        routes.append(ROUTE_THETA)
    if spec.max_index is None:
        routes.append(ROUTE_EXTRAPOLATION)
    return tuple(routes)


def compute_route(spec: SequenceSpec, route: str, budget,
                  max_terms: Optional[int] = None) -> RegularizedResult:
    if route == ROUTE_CLOSED_FORM:
        return regularized_product(spec, budget)
    if route == ROUTE_THETA:
        return theta_route(spec, budget)
    if route == ROUTE_EXTRAPOLATION:
        return extrapolation_route(spec, budget, max_terms=max_terms)
    raise DomainError("unknown route %r" % route)


@dataclass(frozen=True)
class RouteOutcome:
    """One route's result inside a verification report; failures are entries
    (failure message set, result None), not raised faults."""

    route: str
    result: Optional[RegularizedResult]
    failure: Optional[str] = None


@dataclass(frozen=True)
class VerificationReport:
    sequence_name: str
    digits: int
    outcomes: Tuple[RouteOutcome, ...]
    max_disagreement: mpf
    passed: bool


def cross_route_verify(spec: SequenceSpec, budget) -> VerificationReport:
    """Compute the product by every applicable route and compare pairwise.

    Passes when all routes ran and every pairwise difference stays within the
    sum of the two reported error bounds.
    """
    budget = as_budget(budget)
    outcomes = []
    for route in applicable_routes(spec):
        try:
            outcomes.append(RouteOutcome(route, compute_route(spec, route, budget)))
        except RegprodError as exc:
            outcomes.append(RouteOutcome(route, None, "%s: %s" % (type(exc).__name__, exc)))
    succeeded = [o for o in outcomes if o.result is not None]
    passed = len(succeeded) == len(outcomes)
    max_disagreement = mpf(0)
    with mp.workdps(40):
        for i in range(len(succeeded)):
            for j in range(i + 1, len(succeeded)):
                a = succeeded[i].result
                b = succeeded[j].result
                gap = fabs(a.delta.value - b.delta.value)
                max_disagreement = max(max_disagreement, gap)
                if gap > a.error_bound + b.error_bound:
                    passed = False
    return VerificationReport(
        sequence_name=spec.name,
        digits=budget.digits,
        outcomes=tuple(outcomes),
        max_disagreement=max_disagreement,
        passed=passed,
    )
