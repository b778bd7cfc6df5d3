from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellissard.errors import CapError, DegenerateRecursionError, DomainError, RangeError, RegimeError
from bellissard.numerics import Backend, Interval, to_float
from bellissard.sequence import (
    CAP_ENV_VAR,
    LambdaParam,
    closed_form,
    generate,
    perturbed,
    verify_recurrences,
)

F = Fraction
LAM = F(21, 10)


def top_down(lam: Fraction):
    """Independent oracle: memoized top-down evaluation of the recursion."""

    @lru_cache(maxsize=None)
    def R(n: int) -> Fraction:
        if n == 0:
            return F(0)
        if n % 2:
            return lam - R(n - 1)
        return R(n // 2) / R(n - 1)

    return R


def test_first_values_forced():
    assert list(generate("2.1", 3).values) == [0, F(21, 10), 1, F(11, 10)]


def test_r6_and_r10_at_2_1():
    seq = generate("2.1", 10)
    assert seq[6] == F(121, 131)
    # same rational as 2220581/2474681, stored in lowest terms
    assert seq[10] == F(2220581, 2474681) == F(201871, 224971)
    assert (seq[10].numerator, seq[10].denominator) == (201871, 224971)
    assert 2220581 * 131 == 290896111 < 299436401 == 2474681 * 121
    assert seq[10] < seq[6]


def test_matches_top_down_oracle():
    R = top_down(LAM)
    seq = generate(LAM, 300)
    assert all(seq[n] == R(n) for n in range(301))


def test_closed_form_examples():
    assert closed_form(6, "2.1") == F(121, 131)
    assert closed_form(7, "2.1") == F(1541, 1310)
    assert abs(to_float(closed_form(7, "2.1")) - 1.1763359) < 1e-7
    assert closed_form(0, "7.5") == 0
    with pytest.raises(ValueError):
        closed_form(8, "3")


lambdas = st.fractions(min_value=F(201, 100), max_value=10, max_denominator=500).filter(lambda x: x > 2)


@settings(max_examples=60)
@given(lambdas)
def test_closed_forms_match_recursion(lam):
    seq = generate(lam, 7)
    for k in range(8):
        assert closed_form(k, lam) == seq[k]
    # R_6 and R_7 substituted into the published formulas by hand
    assert seq[6] == (lam - 1) ** 2 / (lam**2 - lam - 1)
    assert seq[7] == (lam**3 - 2 * lam**2 + lam - 1) / (lam**2 - lam - 1)


@pytest.mark.parametrize("text", ["2.1", "2.5", "3", "10"])
def test_float_agrees_with_exact(text):
    exact = generate(text, 4096).as_floats()
    fl = generate(text, 4096, "float").as_floats()
    assert np.max(np.abs(exact - fl)) <= 1e-9


@pytest.mark.parametrize("text", ["2.1", "3", "10"])
def test_range_and_odd_floor(text):
    seq = generate(text, 10**5, "float")
    lam = float(seq.lam.value)
    R = seq.as_floats()
    assert np.all(R[1:] > 0) and np.all(R[2:] < lam)
    assert np.all(R[3::2] >= lam - 1)


def test_verify_recurrences_exact_zero():
    rep = verify_recurrences(generate(LAM, 64))
    assert rep.ok
    for fam in rep.families.values():
        assert fam.checked > 0
        assert fam.max_residual == 0


def test_verify_recurrences_float():
    rep = verify_recurrences(generate("3", 10**5, "float"), tol=1e-10)
    assert rep.ok
    assert max(f.max_residual for f in rep.families.values()) <= 1e-10
    assert rep.families["r2"].max_residual <= 1e-12
    assert rep.families["r3"].max_residual <= 1e-12


def test_verify_recurrences_detects_fault():
    seq = perturbed(generate("3", 200, "float"), 4, 1e-3)
    assert verify_recurrences(seq).first_failing_index == 4
    seq = perturbed(generate(LAM, 200), 4, F(1, 1000))
    assert verify_recurrences(seq).first_failing_index == 4


def test_interval_backend_encloses_exact():
    exact = generate(LAM, 512)
    iv = generate(LAM, 512, "interval", precision=64)
    assert all(isinstance(v, Interval) and v.contains(e) for v, e in zip(iv.values, exact.values))
    assert verify_recurrences(iv).ok


def test_exact_cap(monkeypatch):
    with pytest.raises(CapError):
        generate("3", 9000)
    monkeypatch.setenv(CAP_ENV_VAR, "16")
    with pytest.raises(CapError):
        generate("3", 17)
    assert generate("3", 16).N == 16
    # float mode has no cap
    assert generate("3", 17, "float").N == 17


def test_regime_guard():
    with pytest.raises(RegimeError):
        generate("2", 8)
    with pytest.raises(DomainError):
        LambdaParam.of("0", unproven_regime=True)
    seq = generate("2", 8, unproven_regime=True)
    assert seq.regime_warning
    with pytest.raises(DegenerateRecursionError) as err:
        generate("1", 8, unproven_regime=True)
    assert err.value.index == 3


def test_lambda_param_flags():
    assert LambdaParam.of("2.1").regime_ok
    assert LambdaParam.of("2.1", "float").backend is Backend.FLOAT64


def test_index_out_of_range():
    seq = generate("3", 5)
    with pytest.raises(RangeError):
        seq[6]
