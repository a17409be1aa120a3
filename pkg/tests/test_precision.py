"""Error-tag propagation and budget arithmetic."""

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import exp, fabs, log, mp, mpc, mpf

from regprod import BigComplex, BigReal, DomainError, PrecisionBudget, working_digits
from regprod.errors import BranchConsistencyError


def test_working_digits_floor_and_fraction():
    assert working_digits(6) == 16
    assert working_digits(30) == 40
    assert working_digits(50) == 60
    assert working_digits(100) == 120
    assert working_digits(1000) == 1200


def test_budget_targets_split_evenly():
    b = PrecisionBudget(12)
    assert b.eps == mpf(10) ** -12
    assert b.truncation_target == b.eps / 2
    assert b.rounding_allowance == b.eps / 2
    with b.workdps():
        assert mp.dps == 22


def test_budget_rejects_nonpositive_digits():
    with pytest.raises(DomainError):
        PrecisionBudget(0)
    with pytest.raises(DomainError):
        PrecisionBudget(-3)


def test_bigreal_rejects_bad_error_tags():
    with pytest.raises(DomainError):
        BigReal(1, -1)
    with pytest.raises(DomainError):
        BigReal(1, mpf("inf"))


def test_bigreal_addition_accumulates_tags():
    a = BigReal("1.5", "1e-20")
    b = BigReal("2.25", "2e-20")
    c = a + b
    assert c.value == mpf("3.75")
    assert c.err >= mpf("3e-20")
    d = a - b
    assert d.value == mpf("-0.75")
    assert d.err >= mpf("3e-20")


def test_bigreal_exp_neg_bound_covers_true_shift():
    with mp.workdps(30):
        x = BigReal(mpf("0.75"), mpf("1e-6"))
        out = x.exp_neg()
        # worst case over the certified interval
        worst = fabs(exp(-(x.value - x.err)) - exp(-x.value))
        assert out.err >= worst
        assert fabs(out.value - exp(mpf("-0.75"))) < mpf("1e-25")


def test_bigreal_log_bound_covers_true_shift():
    with mp.workdps(30):
        x = BigReal(mpf(2), mpf("1e-4"))
        out = x.log()
        worst = fabs(log(x.value - x.err) - log(x.value))
        assert out.err >= worst
    with pytest.raises(DomainError):
        BigReal(mpf("1e-5"), mpf("1e-4")).log()


@settings(max_examples=50, deadline=None)
@given(
    re=st.floats(-3, 3), im=st.floats(-3, 3),
    err=st.floats(1e-12, 1e-3),
    dre=st.floats(-1, 1), dim=st.floats(-1, 1),
)
def test_bigcomplex_product_bound_dominates_perturbation(re, im, err, dre, dim):
    # perturb one factor anywhere inside its uncertainty disk and check the
    # product of the perturbed inputs stays within the propagated tag
    with mp.workdps(30):
        z = mpc(re, im)
        d = mpc(dre, dim)
        if abs(d) == 0:
            return
        d = d / abs(d) * err * 0.999
        a = BigComplex(z, err)
        b = BigComplex(mpc("1.25", "-0.5"), mpf("1e-8"))
        out = a * b
        true_shift = fabs((z + d) * b.value - z * b.value)
        assert out.err >= true_shift


def test_bigcomplex_powi_bound():
    with mp.workdps(30):
        a = BigComplex(mpc("0.4", "-0.8"), mpf("1e-9"))
        cubed = a.powi(3)
        assert fabs(cubed.value - a.value ** 3) < mpf("1e-25")
        shifted = (a.value + mpf("1e-9")) ** 3
        assert cubed.err >= fabs(shifted - a.value ** 3) - mpf("1e-25")
    with pytest.raises(DomainError):
        a.powi(0)


def test_bigcomplex_pow_real_principal_and_guard():
    with mp.workdps(30):
        a = BigComplex(mpc(4), mpf("1e-12"))
        root = a.pow_real(mpf("0.5"))
        assert fabs(root.value - 2) < mpf("1e-20")
        # uncertainty disk touching the negative real axis is refused
        risky = BigComplex(mpc(-1, 0), mpf("1e-6"))
        with pytest.raises(BranchConsistencyError):
            risky.pow_real(mpf(1) / 3)
        # disk covering the origin is refused as well
        with pytest.raises(DomainError):
            BigComplex(mpc("1e-9"), mpf(1)).pow_real(mpf("0.5"))


def test_imag_bounded_enforces_residue():
    good = BigComplex(mpc(1, "1e-30"), mpf("1e-25"))
    real = good.imag_bounded(mpf("1e-28"))
    assert real.value == 1
    bad = BigComplex(mpc(1, "1e-3"), mpf("1e-25"))
    with pytest.raises(BranchConsistencyError):
        bad.imag_bounded(mpf("1e-20"))
