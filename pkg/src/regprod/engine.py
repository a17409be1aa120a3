"""Closed-form regularization engine.

For a sequence a_n = C r**n delta_n the generalized zeta function
sum a_n**-s splits into a meromorphic part (the pure-geometric sum, known in
closed form) and an entire correction.  The derivative at 0 of the
regularized part is an explicit Laurent constant minus the log-sum of the
correction factors, and the regularized product is exp of its negative.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import exp, expm1, fabs, log, mp, mpf

from .errors import (
    BoundViolationError,
    ComputationError,
    DomainError,
    ImpracticalPrecisionError,
    InsufficientTermsError,
    NonpositiveTermError,
    PoleError,
)
from .precision import BigReal, as_budget, rounding_slack
from .sequences import SequenceSpec

ROUTE_CLOSED_FORM = "closed_form"
ROUTE_THETA = "theta"
ROUTE_EXTRAPOLATION = "extrapolation"

_TAIL_CAP = 10 ** 7


@dataclass(frozen=True)
class LaurentData:
    """Laurent expansion data of the meromorphic part at s = 0.

    The pole is double with coefficient principal_coeff = -1/log_ratio; there
    is no 1/s term, and constant_term is the value left after removing the
    pole.
    """

    principal_coeff: mpf
    constant_term: mpf
    log_ratio: mpf
    log_amplitude: mpf


def laurent_constant(log_ratio, log_amplitude) -> LaurentData:
    """Laurent data at s = 0 for the geometric sum with ln r = log_ratio and
    ln C = log_amplitude, evaluated at the ambient precision.

    constant_term = L/12 + B/2 + B**2/(2L) with L = log_ratio, B = log_amplitude.
    """
    big_l = mpf(log_ratio)
    big_b = mpf(log_amplitude)
    if not big_l > 0:
        raise DomainError("log_ratio must be positive (growth ratio above 1)")
    constant = big_l / 12 + big_b / 2 + big_b * big_b / (2 * big_l)
    return LaurentData(
        principal_coeff=-1 / big_l,
        constant_term=constant,
        log_ratio=big_l,
        log_amplitude=big_b,
    )


def meromorphic_term(log_ratio, log_amplitude, s, budget=12) -> BigReal:
    """Value at real s != 0 of -sum_n (n log_ratio + log_amplitude) (C r**n)**-s.

    Closed form -e**(-sB) (L q/(1-q)**2 + B q/(1-q)) with q = r**-s; the
    formula is exact, so the tag covers rounding only.
    """
    budget = as_budget(budget)
    with budget.workdps():
        big_l = mpf(log_ratio)
        big_b = mpf(log_amplitude)
        s = mpf(s)
        if not big_l > 0:
            raise DomainError("log_ratio must be positive")
        if s == 0:
            raise PoleError("s = 0 is a double pole of the meromorphic part")
        q = exp(-s * big_l)
        one_minus_q = -expm1(-s * big_l)
        part_n = big_l * q / one_minus_q ** 2
        part_1 = big_b * q / one_minus_q
        v = -exp(-s * big_b) * (part_n + part_1)
        return BigReal(v, rounding_slack(v, part_n, part_1))


def _log_tail_bound(k, rho, n):
    # |sum_{m>n} ln delta_m| <= K rho^(n+1) / ((1-rho)(1 - K rho^(n+1)))
    x = k * rho ** (n + 1)
    if x >= 1:
        return mpf("inf")
    return x / ((1 - rho) * (1 - x))


def _smallest_cutoff(bound_fn, target, cap, exc_cls, what):
    """Smallest n in [0, cap] with bound_fn(n) <= target, by bisection."""
    if bound_fn(cap) > target:
        raise exc_cls("%s: certified bound still %s after %d terms"
                      % (what, bound_fn(cap), cap))
    lo, hi = 0, cap
    if bound_fn(lo) <= target:
        return lo
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if bound_fn(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def _tail_log_sum_detail(spec: SequenceSpec, budget):
    budget = as_budget(budget)
    with budget.workdps():
        k = spec.bound_K()
        rho = spec.bound_rho()
        if spec.max_index is not None:
            cap, exc = spec.max_index, InsufficientTermsError
        else:
            cap, exc = _TAIL_CAP, ImpracticalPrecisionError
        cutoff = _smallest_cutoff(
            lambda n: _log_tail_bound(k, rho, n),
            budget.truncation_target, cap, exc, "correction log-sum")
        total = mpf(0)
        deltas = spec.delta_iter()
        rho_pow = mpf(1)
        floor = mpf(10) ** (-mp.dps + 4)
        for n in range(1, cutoff + 1):
            d = next(deltas)
            rho_pow *= rho
            if d <= 0:
                raise NonpositiveTermError("correction factor %d is %s" % (n, d))
            if fabs(d - 1) > k * rho_pow * (1 + mpf("1e-8")) + floor:
                raise BoundViolationError(
                    "correction factor %d is %s, outside its certified envelope"
                    % (n, d))
            total += log(d)
        bound = _log_tail_bound(k, rho, cutoff)
        return BigReal(total, bound + rounding_slack(total)), cutoff


def tail_log_sum(spec: SequenceSpec, budget) -> BigReal:
    """sum_{n>=1} ln delta_n with a certified geometric tail bound."""
    value, _ = _tail_log_sum_detail(spec, budget)
    return value


def regularized_zeta_prime_0(spec: SequenceSpec, budget) -> BigReal:
    """Derivative at 0 of the pole-removed zeta function of the sequence:
    Laurent constant minus the correction log-sum."""
    budget = as_budget(budget)
    with budget.workdps():
        data = laurent_constant(log(spec.growth_ratio()), log(spec.amplitude()))
        tail, _ = _tail_log_sum_detail(spec, budget)
        v = data.constant_term - tail.value
        return BigReal(v, tail.err + rounding_slack(v, data.constant_term))


@dataclass(frozen=True)
class RegularizedResult:
    """One route's answer: zeta'(0) data, the product, and provenance of the
    certified bound (terms actually consumed, precision actually used)."""

    zeta_prime_0: BigReal
    delta: BigReal
    route: str
    error_bound: mpf
    terms_used: int
    working_digits: int


def _theta_instance_self_check(spec, tail, budget):
    """For the golden-ratio instance the correction log-sum equals the log of
    a q-Pochhammer value; evaluating that independently guards the engine."""
    from .special import q_pochhammer

    factor = q_pochhammer(-(spec.growth_ratio() ** -2), budget)
    log_c = factor.imag_bounded(budget.eps).log()
    gap = fabs(tail.value - log_c.value)
    if gap > tail.err + log_c.err + 2 * budget.eps:
        raise ComputationError(
            "internal cross-check failed: correction log-sum and product "
            "constant differ by %s" % gap)


def regularized_product(spec: SequenceSpec, budget) -> RegularizedResult:
    """Zeta-regularized product exp(-zeta'(0)) by the closed-form route."""
    budget = as_budget(budget)
    with budget.workdps():
        data = laurent_constant(log(spec.growth_ratio()), log(spec.amplitude()))
        tail, cutoff = _tail_log_sum_detail(spec, budget)
        zp = BigReal(data.constant_term - tail.value,
                     tail.err + rounding_slack(data.constant_term))
        delta = zp.exp_neg()
        if spec.supports_theta:
            _theta_instance_self_check(spec, tail, budget)
        return RegularizedResult(
            zeta_prime_0=zp,
            delta=delta,
            route=ROUTE_CLOSED_FORM,
            error_bound=delta.err + budget.rounding_allowance,
            terms_used=cutoff,
            working_digits=mp.dps,
        )
