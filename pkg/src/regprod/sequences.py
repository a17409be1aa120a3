"""Sequence descriptions with certified geometric asymptotics.

A usable sequence has positive terms a_n (n >= 1) of the form

    a_n = C * r**n * delta_n,    r > 1, C > 0,

where the correction factor delta_n is certified to satisfy
|delta_n - 1| <= K * rho**n for constants K > 0 and 0 < rho < 1.  All
downstream truncation bounds are stated purely in terms of (r, C, K, rho),
so a description is rejected up front if a probed prefix of the terms
visibly violates its own envelope.

Numeric fields are callables so that every quantity can be evaluated at
whatever precision is active when it is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from mpmath import mp, mpf, sqrt, log, log1p, fabs

from .errors import (
    BoundViolationError,
    DomainError,
    InsufficientTermsError,
    InvalidSequenceError,
    NonpositiveTermError,
)
from .precision import BigReal, as_budget, rounding_slack


@dataclass(frozen=True)
class LucasParams:
    """Integer parameters (p, q) of a Lucas sequence pair.

    U-variant: U_0 = 0, U_1 = 1; V-variant: V_0 = 2, V_1 = p; both satisfy
    x_n = p*x_{n-1} - q*x_{n-2}.  Only parameter pairs with a real dominant
    root larger than 1 and a strictly positive term prefix are accepted.
    """

    p: int
    q: int
    variant: str = "U"

    def __post_init__(self):
        if self.variant not in ("U", "V"):
            raise InvalidSequenceError("variant must be 'U' or 'V'")
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            raise InvalidSequenceError("p and q must be integers")
        if self.p < 1:
            raise InvalidSequenceError("p must be >= 1 so the dominant root is positive")
        if self.q == 0:
            raise InvalidSequenceError("q must be nonzero so the second root is nonzero")
        if self.discriminant <= 0:
            raise InvalidSequenceError(
                "discriminant p*p - 4q must be positive for distinct real roots")
        # Probe the first 64 terms; a degenerate choice shows up immediately.
        a, b = self._initial_pair()
        for n in range(1, 65):
            if b <= 0:
                raise NonpositiveTermError(
                    "term %d of %s(%d,%d) is %d" % (n, self.variant, self.p, self.q, b))
            a, b = b, self.p * b - self.q * a

    @property
    def discriminant(self) -> int:
        return self.p * self.p - 4 * self.q

    def _initial_pair(self):
        # (x_0, x_1) for the chosen variant
        return (0, 1) if self.variant == "U" else (2, self.p)


def _u_pair(params: LucasParams, n: int):
    """(U_n, U_{n+1}) as exact integers by fast doubling."""
    if n == 0:
        return 0, 1
    a, b = _u_pair(params, n >> 1)
    # U_{2k} = U_k (2 U_{k+1} - p U_k),  U_{2k+1} = U_{k+1}^2 - q U_k^2
    c = a * (2 * b - params.p * a)
    d = b * b - params.q * a * a
    if n & 1:
        return d, params.p * d - params.q * c
    return c, d


def lucas_term(params: LucasParams, n: int) -> int:
    """Exact n-th term (n >= 1) of the chosen Lucas sequence."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("term index must be an integer >= 1")
    u_n, u_next = _u_pair(params, n)
    value = u_n if params.variant == "U" else 2 * u_next - params.p * u_n
    if value <= 0:
        raise NonpositiveTermError(
            "term %d of %s(%d,%d) is %d" % (n, params.variant, params.p, params.q, value))
    return value


@dataclass(frozen=True)
class SequenceSpec:
    """A sequence together with its certified growth data.

    growth_ratio() -> r, amplitude() -> C, bound_K() -> K, bound_rho() -> rho,
    each evaluated at the ambient mpmath precision.  term_evaluator(n) returns
    a_n; delta_iter() yields delta_1, delta_2, ...; log_term_iter() yields
    ln a_1, ln a_2, ... without ever forming the (possibly enormous) terms.
    max_index is None for unbounded sequences, otherwise the last index a
    finite table can serve.  supports_theta marks the golden-ratio instance
    for which the theta-function route applies.
    """

    name: str
    growth_ratio: Callable[[], mpf]
    amplitude: Callable[[], mpf]
    term_evaluator: Callable[[int], mpf]
    bound_K: Callable[[], mpf]
    bound_rho: Callable[[], mpf]
    delta_iter: Callable[[], Iterator[mpf]]
    log_term_iter: Callable[[], Iterator[mpf]]
    max_index: Optional[int] = None
    supports_theta: bool = False


def _validate_spec(spec: SequenceSpec) -> SequenceSpec:
    """Probe a prefix of the sequence against its own certificate."""
    with mp.workdps(30):
        r = spec.growth_ratio()
        c = spec.amplitude()
        k = spec.bound_K()
        rho = spec.bound_rho()
        if not r > 1:
            raise InvalidSequenceError("growth ratio must exceed 1 (got %s)" % r)
        if not c > 0:
            raise InvalidSequenceError("amplitude must be positive (got %s)" % c)
        if not k > 0:
            raise InvalidSequenceError("correction constant K must be positive")
        if not 0 < rho < 1:
            raise InvalidSequenceError("correction ratio rho must lie in (0, 1)")
        limit = 32 if spec.max_index is None else min(32, spec.max_index)
        slack = mpf("1e-25")
        deltas = spec.delta_iter()
        rho_pow = mpf(1)
        r_pow = mpf(1)
        for n in range(1, limit + 1):
            d = next(deltas)
            rho_pow *= rho
            r_pow *= r
            if d <= 0:
                raise NonpositiveTermError("correction factor %d is %s" % (n, d))
            if fabs(d - 1) > k * rho_pow * (1 + mpf("1e-8")) + slack:
                raise BoundViolationError(
                    "correction factor %d is %s, outside 1 +/- %s"
                    % (n, d, k * rho_pow))
            if n <= 8:
                # the two access paths (terms vs. correction factors) must agree
                direct = spec.term_evaluator(n) / (c * r_pow)
                if fabs(direct - d) > mpf("1e-20") * (1 + fabs(d)):
                    raise InvalidSequenceError(
                        "term %d disagrees with its correction factor" % n)
    return spec


def correction_factor(spec: SequenceSpec, n: int, budget) -> BigReal:
    """delta_n = a_n / (C r**n), checked against the certified envelope."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("term index must be an integer >= 1")
    budget = as_budget(budget)
    with budget.workdps():
        a = spec.term_evaluator(n)
        if a <= 0:
            raise NonpositiveTermError("term %d is %s" % (n, a))
        d = a / (spec.amplitude() * spec.growth_ratio() ** n)
        err = rounding_slack(d)
        envelope = spec.bound_K() * spec.bound_rho() ** n
        if fabs(d - 1) > envelope * (1 + mpf("1e-8")) + err + mpf(10) ** (-mp.dps + 2):
            raise BoundViolationError(
                "correction factor %d is %s, outside 1 +/- %s" % (n, d, envelope))
        return BigReal(d, err)


def binet_term(spec: SequenceSpec, n: int, budget) -> BigReal:
    """Closed-form term (phi**n - (-phi)**-n) / sqrt(5) for the golden-ratio
    instance; rejects any other sequence."""
    if not spec.supports_theta:
        raise InvalidSequenceError(
            "closed-form term evaluation applies only to the golden-ratio instance")
    if not isinstance(n, int) or n < 1:
        raise DomainError("term index must be an integer >= 1")
    budget = as_budget(budget)
    with budget.workdps():
        phi = spec.growth_ratio()
        v = (phi ** n - (-phi) ** (-n)) * spec.amplitude()
        return BigReal(v, rounding_slack(v))


def lucas_family_spec(params: LucasParams, name: Optional[str] = None) -> SequenceSpec:
    """Spec for a Lucas U or V sequence.

    With roots alpha > |beta| and t = beta/alpha the terms factor exactly as
    U_n = alpha**n (1 - t**n)/sqrt(D) and V_n = alpha**n (1 + t**n), so the
    correction envelope holds with K = 1 and rho = |t|.
    """
    d_int = params.discriminant
    sign = -1 if params.variant == "U" else 1

    def growth_ratio():
        return (params.p + sqrt(mpf(d_int))) / 2

    def amplitude():
        return 1 / sqrt(mpf(d_int)) if params.variant == "U" else mpf(1)

    def root_quotient():
        rt = sqrt(mpf(d_int))
        return (params.p - rt) / (params.p + rt)

    def bound_rho():
        return fabs(root_quotient())

    def delta_iter():
        t = root_quotient()
        t_pow = mpf(1)
        while True:
            t_pow *= t
            yield 1 + sign * t_pow

    def log_term_iter():
        rt = sqrt(mpf(d_int))
        log_alpha = log((params.p + rt) / 2)
        log_c = log(amplitude())
        t = root_quotient()
        t_pow = mpf(1)
        n = 0
        while True:
            n += 1
            t_pow *= t
            yield n * log_alpha + log_c + log1p(sign * t_pow)

    spec = SequenceSpec(
        name=name or "%s(%d,%d)" % (params.variant, params.p, params.q),
        growth_ratio=growth_ratio,
        amplitude=amplitude,
        term_evaluator=lambda n: mpf(lucas_term(params, n)),
        bound_K=lambda: mpf(1),
        bound_rho=bound_rho,
        delta_iter=delta_iter,
        log_term_iter=log_term_iter,
        supports_theta=(params.p, params.q, params.variant) == (1, -1, "U"),
    )
    return _validate_spec(spec)


def fibonacci_spec() -> SequenceSpec:
    """1, 1, 2, 3, 5, ...: growth phi, amplitude 1/sqrt(5), rho = phi**-2."""
    return lucas_family_spec(LucasParams(1, -1, "U"), name="fibonacci")


def lucas_spec() -> SequenceSpec:
    """1, 3, 4, 7, 11, ...: the V sequence companion to the Fibonacci numbers."""
    return lucas_family_spec(LucasParams(1, -1, "V"), name="lucas")


def _as_positive_const(x, what: str) -> Callable[[], mpf]:
    """Normalise a constant given as callable, string, int, float or mpf.

    Strings are re-parsed at the ambient precision on every call, so decimal
    inputs keep full accuracy at any working level.
    """
    if callable(x):
        return x
    if isinstance(x, (int, str)):
        probe = mpf(x)
        if not probe > 0:
            raise InvalidSequenceError("%s must be positive (got %s)" % (what, x))
        return lambda: mpf(x)
    if isinstance(x, (float, mpf)):
        fixed = mpf(x)
        if not fixed > 0:
            raise InvalidSequenceError("%s must be positive (got %s)" % (what, x))
        return lambda: +fixed
    raise DomainError("%s must be a number, decimal string, or callable" % what)


def geometric_spec(ratio, amplitude=1, name: str = "geometric") -> SequenceSpec:
    """Pure geometric sequence a_n = C r**n with identically-1 corrections.

    K still has to be positive for the envelope bookkeeping, so it is set to
    a value far below the working resolution.
    """
    ratio_fn = _as_positive_const(ratio, "growth ratio")
    amp_fn = _as_positive_const(amplitude, "amplitude")

    def delta_iter():
        while True:
            yield mpf(1)

    def log_term_iter():
        log_r = log(ratio_fn())
        log_c = log(amp_fn())
        n = 0
        while True:
            n += 1
            yield n * log_r + log_c

    spec = SequenceSpec(
        name=name,
        growth_ratio=ratio_fn,
        amplitude=amp_fn,
        term_evaluator=lambda n: amp_fn() * ratio_fn() ** n,
        bound_K=lambda: mpf(10) ** (-(mp.dps + 10)),
        bound_rho=lambda: mpf(1) / 2,
        delta_iter=delta_iter,
        log_term_iter=log_term_iter,
    )
    return _validate_spec(spec)


def table_spec(name: str, terms, ratio, amplitude, bound_k, bound_rho) -> SequenceSpec:
    """Finite table of terms with caller-supplied growth certificate.

    Every listed term is checked against the certificate at construction.
    Computations whose certified cutoff exceeds the table length raise
    InsufficientTermsError instead of silently truncating.
    """
    stored = tuple(str(t) for t in terms)
    if not stored:
        raise InvalidSequenceError("term table is empty")
    ratio_fn = _as_positive_const(ratio, "growth ratio")
    amp_fn = _as_positive_const(amplitude, "amplitude")
    k_fn = _as_positive_const(bound_k, "correction constant K")
    rho_fn = _as_positive_const(bound_rho, "correction ratio rho")
    m = len(stored)

    def term_evaluator(n):
        if not isinstance(n, int) or n < 1:
            raise DomainError("term index must be an integer >= 1")
        if n > m:
            raise InsufficientTermsError(
                "table %r ends at index %d; index %d requested" % (name, m, n))
        return mpf(stored[n - 1])

    def delta_iter():
        c = amp_fn()
        r = ratio_fn()
        r_pow = mpf(1)
        for i in range(m):
            r_pow *= r
            yield mpf(stored[i]) / (c * r_pow)

    def log_term_iter():
        for i in range(m):
            v = mpf(stored[i])
            if v <= 0:
                raise NonpositiveTermError("table term %d is %s" % (i + 1, v))
            yield log(v)

    spec = SequenceSpec(
        name=name,
        growth_ratio=ratio_fn,
        amplitude=amp_fn,
        term_evaluator=term_evaluator,
        bound_K=k_fn,
        bound_rho=rho_fn,
        delta_iter=delta_iter,
        log_term_iter=log_term_iter,
        max_index=m,
    )
    with mp.workdps(30):
        # validate the whole table, not just the standard probe prefix
        k = k_fn()
        rho = rho_fn()
        rho_pow = mpf(1)
        for n, d in enumerate(delta_iter(), start=1):
            rho_pow *= rho
            if d <= 0:
                raise NonpositiveTermError("correction factor %d is %s" % (n, d))
            if fabs(d - 1) > k * rho_pow * (1 + mpf("1e-8")) + mpf("1e-25"):
                raise BoundViolationError(
                    "table term %d violates the correction envelope" % n)
    return _validate_spec(spec)
