"""Special-function building blocks with certified truncation bounds.

Everything here is computed from explicit series or products whose tails are
bounded by elementary geometric estimates; no library evaluators for these
functions are used, so the error tags are self-contained.
"""

from __future__ import annotations

from mpmath import (
    exp, expm1, fabs, isfinite, log, loggamma, mp, mpc, mpf, pi, sqrt,
)

from .errors import (
    ComputationError,
    DomainError,
    ImpracticalPrecisionError,
)
from .precision import BigComplex, BigReal, as_budget, rounding_slack

_PRODUCT_CAP = 10 ** 7


def principal_power(z, w, budget=12) -> BigComplex:
    """z**w on the principal branch, arg(z) in (-pi, pi].

    Inputs are treated as exact; the tag covers rounding only.
    """
    budget = as_budget(budget)
    # convert inside the working block: conversion rounds to the ambient
    # precision, which may be far below the precision the inputs carry
    with budget.workdps():
        z = mpc(z)
        w = mpc(w)
        if z == 0:
            if w.imag == 0 and w.real > 0:
                return BigComplex(mpc(0), mpf(0))
            raise DomainError("0**w is defined here only for real w > 0")
        v = exp(w * log(z))
        return BigComplex(v, rounding_slack(v))


def _pochhammer_log_tail(absa: mpf, n: int) -> mpf:
    # |ln prod_{k>n} (1 - a^k)| <= |a|^(n+1) / ((1-|a|)(1-|a|^(n+1)))
    x = absa ** (n + 1)
    if x >= 1:
        return mpf("inf")
    return x / ((1 - absa) * (1 - x))


def q_pochhammer_inf(a, budget) -> BigComplex:
    """(a; a)_inf = prod_{n>=1} (1 - a**n) by direct multiplication, |a| < 1."""
    budget = as_budget(budget)
    with budget.workdps():
        a = mpc(a)
        absa = fabs(a)
        if absa >= 1:
            raise DomainError("q-Pochhammer product requires |a| < 1")
        if a == 0:
            return BigComplex(mpc(1), mpf(0))
        target = min(budget.truncation_target, mpf("0.5"))
        n = 1
        while _pochhammer_log_tail(absa, n) > target:
            n *= 2
            if n > _PRODUCT_CAP:
                raise ImpracticalPrecisionError(
                    "q-Pochhammer cutoff exceeds %d factors" % _PRODUCT_CAP)
        lo, hi = n // 2, n
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if _pochhammer_log_tail(absa, mid) <= target:
                hi = mid
            else:
                lo = mid
        n = hi if _pochhammer_log_tail(absa, lo) > target else lo
        prod = mpc(1)
        a_pow = mpc(1)
        for _ in range(n):
            a_pow *= a
            prod *= 1 - a_pow
        t = _pochhammer_log_tail(absa, n)
        # remaining factors form exp(w) with |w| <= t
        err = fabs(prod) * expm1(t) + rounding_slack(prod)
        return BigComplex(prod, err)


def q_pochhammer_pentagonal(a, budget) -> BigComplex:
    """(a; a)_inf by Euler's pentagonal number theorem.

    Sum of (-1)**k a**(k(3k-1)/2) over all integers k; exponents are the
    generalized pentagonal numbers, so very few terms are needed and the
    sparse series stays efficient even for |a| close to 1.
    """
    budget = as_budget(budget)
    with budget.workdps():
        a = mpc(a)
        absa = fabs(a)
        if absa >= 1:
            raise DomainError("q-Pochhammer series requires |a| < 1")
        if a == 0:
            return BigComplex(mpc(1), mpf(0))
        target = budget.truncation_target
        total = mpc(1)
        k = 0
        while True:
            k += 1
            if k > 10000:
                raise ImpracticalPrecisionError("pentagonal series stalled")
            e1 = k * (3 * k - 1) // 2
            e2 = k * (3 * k + 1) // 2
            term = a ** e1 + a ** e2
            total += term if k % 2 == 0 else -term
            next_exp = (k + 1) * (3 * k + 2) // 2
            tail = 2 * absa ** next_exp / (1 - absa)
            if tail <= target:
                break
        return BigComplex(total, tail + rounding_slack(total))


def q_pochhammer(a, budget) -> BigComplex:
    """(a; a)_inf, switching to the pentagonal series once |a| > 1/2."""
    budget = as_budget(budget)
    with budget.workdps():
        sparse = fabs(mpc(a)) > mpf("0.5")
    if sparse:
        return q_pochhammer_pentagonal(a, budget)
    return q_pochhammer_inf(a, budget)


def _theta_detail(q, budget):
    budget = as_budget(budget)
    with budget.workdps():
        q = mpc(q)
        absq = fabs(q)
        if absq >= 1:
            raise DomainError("theta series requires |q| < 1")
        if q == 0:
            return BigComplex(mpc(0), mpf(0)), 0
        scale = 2 * absq ** mpf("0.25")

        def bracket_tail(n):
            # terms beyond n: (2m+1)|q|^(m(m+1)), m > n; exponent gaps 2(m+1)
            u = absq ** (2 * n + 4)
            return (2 * n + 3) * absq ** ((n + 1) * (n + 2)) / (1 - u) ** 2

        target = budget.truncation_target / max(scale, mpf("1e-30"))
        n = 0
        while bracket_tail(n) > target:
            n += 1
            if n > 100000:
                raise ImpracticalPrecisionError("theta series stalled")
        total = mpc(0)
        q_sq = q * q
        w = mpc(1)        # q**(m(m+1))
        q_even = mpc(1)   # q**(2m)
        for m in range(n + 1):
            term = (2 * m + 1) * w
            total += term if m % 2 == 0 else -term
            q_even *= q_sq
            w *= q_even
        q_quarter = exp(log(q) / 4)
        value = 2 * q_quarter * total
        err = scale * bracket_tail(n) + rounding_slack(value)
        return BigComplex(value, err), n + 1


def theta1_prime_zero(q, budget) -> BigComplex:
    """d/dz theta_1(z, q) at z = 0 for a nome with |q| < 1.

    Series 2 q**(1/4) sum_{m>=0} (-1)**m (2m+1) q**(m(m+1)); the quarter
    power takes the principal branch.
    """
    value, _ = _theta_detail(q, budget)
    return value


def theta_product_identity_gap(q, budget) -> mpf:
    """|theta_1'(0, q) - 2 q**(1/4) ((q**2; q**2)_inf)**3| for diagnostics."""
    budget = as_budget(budget)
    with budget.workdps():
        direct = theta1_prime_zero(q, budget)
        cube = q_pochhammer(mpc(q) ** 2, budget).powi(3)
        pref = principal_power(q, mpf(1) / 4, budget).scale(2)
        return fabs(direct.value - (pref * cube).value)


def _delta_via_theta_detail(budget):
    budget = as_budget(budget)
    with budget.workdps():
        phi = (1 + sqrt(5)) / 2
        q = mpc(0, -1) / phi
        theta, terms = _theta_detail(q, budget)
        half = theta.scale(mpf(1) / 2)
        root = half.pow_real(mpf(1) / 3)
        prefactor = (exp(mpc(0, pi) / 24) * 5 ** mpf("0.25")
                     * exp(-log(mpf(5)) ** 2 / (8 * log(phi))))
        total = root.scale(prefactor)
        real = total.imag_bounded(budget.eps)
        if not (isfinite(real.value) and real.value > 0):
            raise ComputationError("theta route produced a nonpositive value")
        return real, terms


def delta_via_theta(budget) -> BigReal:
    """Regularized Fibonacci product through the theta-function identity.

    Assembles e**(i pi/24) 5**(1/4) exp(-ln(5)**2 / (8 ln(phi))) times the
    principal cube root of theta_1'(0, -i/phi)/2; the residual imaginary
    part must vanish within the certified bound.
    """
    value, _ = _delta_via_theta_detail(budget)
    return value


def _em_tail_bound(n: int, m: int) -> mpf:
    # derivative remainder of the Euler-Maclaurin log-Gamma expansion at 0:
    # 2 (2m)! zeta(2m+1) / (2m (2pi)^(2m+1) n^(2m)), with zeta(2m+1) <= 1.2021
    return (2 * exp(loggamma(2 * m + 1) - (2 * m + 1) * log(2 * pi)
                    - 2 * m * log(mpf(n)) - log(mpf(2 * m)))
            * mpf("1.2021"))


def _em_zeta_prime_zero(budget, n_terms=None, bernoulli_terms=None):
    budget = as_budget(budget)
    wd = budget.working_digits + 12
    with mp.workdps(wd):
        if n_terms is None and bernoulli_terms is None:
            n = budget.working_digits + 10
            m = budget.working_digits // 2 + 5
            for _ in range(60):
                if _em_tail_bound(n, m) <= budget.truncation_target:
                    break
                n = n + n // 4 + 1
                m += 2
            else:
                raise ImpracticalPrecisionError(
                    "no Euler-Maclaurin parameters met the target")
        else:
            n = n_terms if n_terms is not None else budget.working_digits + 10
            m = bernoulli_terms if bernoulli_terms is not None else budget.working_digits // 2 + 5
        if n < 2 or m < 1:
            raise DomainError("need n_terms >= 2 and bernoulli_terms >= 1")
        log_fact = mpf(0)
        for i in range(2, n):
            log_fact += log(mpf(i))
        value = -log_fact + n * log(mpf(n)) - n - log(mpf(n)) / 2
        n_pow = mpf(n)  # n**(2k-1)
        for k in range(1, m + 1):
            value += mp.bernoulli(2 * k) / (n_pow * (2 * k) * (2 * k - 1))
            n_pow *= n * n
        err = _em_tail_bound(n, m) + rounding_slack(value, log_fact)
        return BigReal(value, err), n, m


def riemann_zeta_prime_zero(budget, n_terms=None, bernoulli_terms=None) -> BigReal:
    """zeta'(0) = -ln(2 pi)/2 via the Euler-Maclaurin expansion of
    -ln((n-1)!) + n ln n - n - (ln n)/2 + correction terms.

    Parameters are auto-selected to push the certified remainder below the
    truncation target; explicit n_terms/bernoulli_terms override the choice
    (the reported bound then reflects the overridden parameters).
    """
    value, _, _ = _em_zeta_prime_zero(budget, n_terms, bernoulli_terms)
    return value


def fibonacci_factorial_constant(budget) -> BigReal:
    """The constant prod_{n>=1} (1 - (-1/phi**2)**n) = (a; a)_inf at
    a = -phi**-2."""
    budget = as_budget(budget)
    with budget.workdps():
        phi = (1 + sqrt(5)) / 2
        a = -(phi ** -2)
        result = q_pochhammer(a, budget)
        # real input, real product; the complex path carries a zero imaginary part
        return result.imag_bounded(budget.eps)
