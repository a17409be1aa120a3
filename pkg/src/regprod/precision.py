"""Precision budgets and error-tagged multiprecision values.

Every public quantity in this package is an mpmath number paired with a
certified absolute error bound.  The budget for a requested accuracy of
``digits`` decimal digits is ``eps = 10**-digits``, split evenly between
series truncation and accumulated rounding; rounding is then over-provisioned
by running all arithmetic with guard digits, so the truncation half of the
budget is the binding one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from mpmath import mp, mpf, mpc, fabs, isfinite, log1p, expm1, exp, log

from .errors import BranchConsistencyError, DomainError

Real = Union[int, float, str, mpf]


def working_digits(digits: int) -> int:
    """Requested digits plus guard digits (10, or 20 percent if larger)."""
    return digits + max(10, -(-digits // 5))


def rounding_slack(*values) -> mpf:
    """Coarse bound on rounding noise accumulated at the current precision.

    Scales with the magnitudes passed in and assumes at most ~1e5 chained
    operations, which is far above anything a single wrapped computation in
    this package performs.  Loops with a term count that can exceed that pass
    an explicit multiplier instead.
    """
    scale = mpf(1)
    for v in values:
        scale += fabs(v)
    return scale * mpf(10) ** (6 - mp.dps)


@dataclass(frozen=True)
class PrecisionBudget:
    """Accuracy request: absolute error at most ``10**-digits``.

    ``truncation_target`` is the share a series cutoff must meet and
    ``rounding_allowance`` the share reserved for arithmetic noise.
    """

    digits: int

    def __post_init__(self):
        if not isinstance(self.digits, int) or self.digits < 1:
            raise DomainError("digits must be a positive integer")

    @property
    def working_digits(self) -> int:
        return working_digits(self.digits)

    def workdps(self):
        """Context manager setting mpmath precision to the working level."""
        return mp.workdps(self.working_digits)

    @property
    def eps(self) -> mpf:
        return mpf(10) ** (-self.digits)

    @property
    def truncation_target(self) -> mpf:
        return self.eps / 2

    @property
    def rounding_allowance(self) -> mpf:
        return self.eps / 2


def as_budget(budget) -> PrecisionBudget:
    """Coerce an int digit count (or pass through a budget) to a budget."""
    if isinstance(budget, PrecisionBudget):
        return budget
    return PrecisionBudget(int(budget))


def _nonneg_err(err) -> mpf:
    err = mpf(err)
    if not (isfinite(err) and err >= 0):
        raise DomainError("error tag must be finite and nonnegative")
    return err


@dataclass(frozen=True)
class BigReal:
    """A real value with a certified absolute error bound.

    The invariant is |true - value| <= err.  Operations propagate the bound
    conservatively and add a small rounding term for the new arithmetic.
    """

    value: mpf
    err: mpf

    def __post_init__(self):
        object.__setattr__(self, "value", mpf(self.value))
        object.__setattr__(self, "err", _nonneg_err(self.err))

    def __add__(self, other: "BigReal") -> "BigReal":
        v = self.value + other.value
        return BigReal(v, self.err + other.err + rounding_slack(v))

    def __sub__(self, other: "BigReal") -> "BigReal":
        v = self.value - other.value
        return BigReal(v, self.err + other.err + rounding_slack(v))

    def __neg__(self) -> "BigReal":
        return BigReal(-self.value, self.err)

    def exp_neg(self) -> "BigReal":
        """exp(-value) with the bound mapped through the exponential."""
        v = exp(-self.value)
        # |e^(-(x+/-e)) - e^(-x)| <= e^(-x) (e^e - 1)
        return BigReal(v, v * expm1(self.err) + rounding_slack(v))

    def log(self) -> "BigReal":
        if self.value - self.err <= 0:
            raise DomainError("log requires a value certified positive")
        v = log(self.value)
        # |ln(x +/- e) - ln x| <= -ln(1 - e/x)
        return BigReal(v, -log1p(-self.err / self.value) + rounding_slack(v))


@dataclass(frozen=True)
class BigComplex:
    """A complex value with a certified bound on the modulus of its error."""

    value: mpc
    err: mpf

    def __post_init__(self):
        object.__setattr__(self, "value", mpc(self.value))
        object.__setattr__(self, "err", _nonneg_err(self.err))

    def __add__(self, other: "BigComplex") -> "BigComplex":
        v = self.value + other.value
        return BigComplex(v, self.err + other.err + rounding_slack(v))

    def __mul__(self, other: "BigComplex") -> "BigComplex":
        v = self.value * other.value
        e = (fabs(self.value) * other.err + fabs(other.value) * self.err
             + self.err * other.err)
        return BigComplex(v, e + rounding_slack(v))

    def scale(self, factor) -> "BigComplex":
        """Multiply by an exactly-known constant."""
        factor = mpc(factor)
        v = self.value * factor
        return BigComplex(v, fabs(factor) * self.err + rounding_slack(v))

    def powi(self, k: int) -> "BigComplex":
        """Integer power k >= 1; bound via (|z|+e)^k - |z|^k."""
        if not isinstance(k, int) or k < 1:
            raise DomainError("powi needs an integer exponent >= 1")
        v = self.value ** k
        a = fabs(self.value)
        return BigComplex(v, (a + self.err) ** k - a ** k + rounding_slack(v))

    def pow_real(self, w) -> "BigComplex":
        """Principal-branch z**w for real w, with branch-safety guard.

        The bound |(z+d)^w - z^w| <= |z^w| ((1-u)^-|w| - 1), u = |d|/|z|,
        holds only while the perturbed point cannot cross the cut along the
        negative real axis, so inputs whose uncertainty disk touches the cut
        are rejected.
        """
        w = mpf(w)
        a = fabs(self.value)
        if self.err >= a:
            raise DomainError("uncertainty covers the origin; power undefined")
        if self.value.real < 0 and fabs(self.value.imag) <= self.err:
            raise BranchConsistencyError(
                "uncertainty disk touches the negative real axis")
        v = exp(w * log(self.value))
        u = self.err / a
        e = fabs(v) * ((1 - u) ** (-fabs(w)) - 1)
        return BigComplex(v, e + rounding_slack(v))

    def real_part(self) -> BigReal:
        return BigReal(self.value.real, self.err)

    def imag_bounded(self, tol) -> BigReal:
        """Assert |Im| <= max(err, tol) and return the real part.

        Used when a quantity is known to be real but was computed through a
        complex route; the residual imaginary part must sit inside the
        certified error bound.
        """
        limit = max(self.err, mpf(tol))
        if fabs(self.value.imag) > limit:
            raise BranchConsistencyError(
                "imaginary residue %s exceeds certified bound %s"
                % (self.value.imag, limit))
        return BigReal(self.value.real, self.err)
