import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellissard.errors import DomainError, RangeError, UsageError
from bellissard.operators import (
    GOLDEN_MEAN,
    Boundary,
    ChainSpec,
    JacobiMatrix,
    Mode,
    Provenance,
    bellissard_determinant,
    build_almost_mathieu,
    build_bellissard,
    build_chain,
    build_from_lambda_seq,
    dyson_map,
    eigenvalues,
    integrated_density,
    mode_frequencies,
    spectrum_report,
    sturm_count,
)
from bellissard.sequence import generate

from oracles import charpoly_roots

F = Fraction


def test_bisection_matches_charpoly_oracle():
    rng = np.random.default_rng(20260101)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        a = rng.uniform(-3, 3, n)
        b = rng.uniform(0.2, 2.0, n - 1) * rng.choice([-1, 1], n - 1)
        got = eigenvalues(JacobiMatrix(a, b, "dyson"))
        worst = max(worst, float(np.max(np.abs(got - charpoly_roots(a, b)))))
    assert worst <= 1e-10


@pytest.mark.parametrize("n", [1, 2, 3, 8, 17, 33, 64])
def test_uniform_chain_closed_form(n):
    M = JacobiMatrix(np.full(n, -2.0), np.ones(n - 1), "dyson")
    k = np.arange(1, n + 1)
    expected = np.sort(-2 + 2 * np.cos(k * np.pi / (n + 1)))
    assert np.max(np.abs(eigenvalues(M) - expected)) <= 1e-10


def test_two_by_two():
    assert np.allclose(eigenvalues(JacobiMatrix([0.0, 0.0], [1.0], "bellissard")), [-1, 1], atol=1e-12)


def test_tol_must_be_positive():
    M = JacobiMatrix([0.0], [], "bellissard")
    with pytest.raises(UsageError):
        eigenvalues(M, tol=0)


def test_matches_lapack():
    M = build_bellissard(generate("3", 600, "float"), 600)
    ref = np.linalg.eigvalsh(M.to_dense())
    assert np.max(np.abs(eigenvalues(M) - ref)) <= 1e-10


tridiagonals = st.integers(1, 12).flatmap(
    lambda n: st.tuples(
        st.lists(st.floats(-5, 5), min_size=n, max_size=n),
        st.lists(st.floats(-3, 3), min_size=n - 1, max_size=n - 1),
    )
)


@settings(max_examples=80, deadline=None)
@given(tridiagonals)
def test_count_and_gershgorin(ab):
    M = JacobiMatrix(*ab, "dyson")
    e = eigenvalues(M)
    lo, hi = M.gershgorin()
    assert e.size == M.N
    assert np.all(np.diff(e) >= 0)
    assert lo - 1e-10 <= e[0] and e[-1] <= hi + 1e-10
    assert sturm_count(M, hi + 1) == M.N and sturm_count(M, lo - 1) == 0


@settings(max_examples=60, deadline=None)
@given(tridiagonals)
def test_interlacing(ab):
    M = JacobiMatrix(*ab, "dyson")
    if M.N < 2:
        return
    big, small = eigenvalues(M), eigenvalues(M.truncate(M.N - 1))
    assert np.all(big[:-1] <= small + 1e-10) and np.all(small <= big[1:] + 1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40).flatmap(lambda n: st.lists(st.floats(0.01, 3), min_size=n - 1, max_size=n - 1)))
def test_zero_diagonal_symmetry(b):
    n = len(b) + 1
    e = eigenvalues(JacobiMatrix(np.zeros(n), b, "bellissard"))
    assert np.max(np.abs(e + e[::-1])) <= 1e-10
    if n % 2:
        assert abs(e[n // 2]) <= 1e-10


# -- builders -------------------------------------------------------------------


def test_build_bellissard_small():
    M = build_bellissard(generate("2.1", 3), 3)
    assert np.all(M.diagonal == 0)
    assert M.off_diagonal.tolist() == [1.0, math.sqrt(1.1)]
    one = build_bellissard(generate("2.1", 1), 1)
    assert eigenvalues(one).tolist() == [0.0]


def test_build_bellissard_range():
    M = build_bellissard(generate("3", 512), 512)
    assert np.all(np.abs(M.off_diagonal) <= math.sqrt(3))
    with pytest.raises(RangeError):
        build_bellissard(generate("3", 10), 11)


def test_sqrt_rounding_matches_float_sequence():
    exact = build_bellissard(generate("3", 256), 256).off_diagonal
    fl = build_bellissard(generate("3", 256, "float"), 256).off_diagonal
    assert np.max(np.abs(exact - fl)) <= 1e-14


def test_negative_r_is_domain_error():
    # lambda = 1.5 drives R negative inside the unproven regime
    seq = generate("1.5", 40, unproven_regime=True)
    assert min(seq.values) < 0
    with pytest.raises(DomainError):
        build_bellissard(seq, 40)


def test_bellissard_seven_contains_zero():
    e = eigenvalues(build_bellissard(generate("3", 7, "float"), 7))
    assert abs(e[3]) <= 1e-10 and np.max(np.abs(e + e[::-1])) <= 1e-10


def test_determinant_exact():
    seq = generate("3", 64)
    for N in range(1, 65):
        d = bellissard_determinant(seq, N)
        if N % 2:
            assert d == 0
        else:
            expected = (-1) ** (N // 2) * math.prod(seq[k] for k in range(2, N + 1, 2))
            assert d == expected != 0
    dense = build_bellissard(generate("3", 8, "float"), 8).to_dense()
    assert np.linalg.det(dense) == pytest.approx(float(bellissard_determinant(seq, 8)), rel=1e-12)


def test_even_truncation_zero_is_float_small():
    # the nonzero determinant at even N is tiny; the smallest |eigenvalue|
    # collapses with N and is below the float grid long before N = 256
    small = [np.min(np.abs(eigenvalues(build_bellissard(generate("3", n, "float"), n)))) for n in (16, 32)]
    assert small[1] < small[0] < 1e-2


def test_dyson_map_examples():
    uni = ChainSpec([1] * 5, [1] * 4)
    assert dyson_map(uni) == [1] * 8
    assert dyson_map(ChainSpec([1, 2], [4])) == [4, 2]
    assert dyson_map(ChainSpec([1, 1, 1], [1, 1])) == [1, 1, 1, 1]


@settings(max_examples=50)
@given(st.integers(1, 10).flatmap(lambda m: st.tuples(
    st.lists(st.fractions(F(1, 10), 10), min_size=m, max_size=m),
    st.lists(st.fractions(F(1, 10), 10), min_size=m - 1, max_size=m - 1),
)))
def test_dyson_map_length_and_sign(ms):
    chain = ChainSpec(*ms)
    lams = dyson_map(chain)
    assert len(lams) == 2 * chain.M - 2 and all(x > 0 for x in lams)


def test_chain_spec_validation():
    with pytest.raises(DomainError):
        ChainSpec([1, 0], [1])
    with pytest.raises(UsageError):
        ChainSpec([1, 1], [])


def test_t2_uniform():
    M = build_from_lambda_seq([1.0] * 20, 6, "lambda_seq_T2")
    assert M.diagonal.tolist() == [-1, -2, -2, -2, -2, -2]
    assert M.off_diagonal.tolist() == [1] * 5
    assert M.provenance is Provenance.T2


def test_t2_missing_lambda():
    with pytest.raises(RangeError):
        build_from_lambda_seq([1.0] * 5, 6, "lambda_seq_T2")


def test_t1_centered_window():
    M = build_from_lambda_seq(lambda i: 1.0, 7, "lambda_seq_T1")
    assert M.meta["first_site"] == -3
    assert M.diagonal.tolist() == [-2] * 7 and M.off_diagonal.tolist() == [1] * 6
    with pytest.raises(UsageError):
        build_from_lambda_seq([1.0] * 20, 4, "bellissard")


def test_two_mass_chain():
    # m = [1, 2], K = [4]: lambda_1 = 4, lambda_2 = 2
    M = build_chain(ChainSpec([1, 2], [4]))
    assert M.diagonal.tolist() == [-4, -2]
    assert M.off_diagonal.tolist() == pytest.approx([2 * math.sqrt(2)])
    # normal modes: rigid translation plus one mode of frequency sqrt(6)
    E = sorted(m.frequency for m in mode_frequencies(M))
    assert E[0] == pytest.approx(0, abs=1e-7) and E[1] == pytest.approx(math.sqrt(6), rel=1e-12)


def test_chain_against_newton_equations():
    # m x'' = -K (x_j - x_{j+1}) ...; mass-weighted stiffness has the same spectrum
    m = np.array([1.0, 2.0, 0.5, 3.0])
    K = np.array([4.0, 1.0, 2.5])
    stiff = np.zeros((4, 4))
    for j, k in enumerate(K):
        stiff[j, j] += k
        stiff[j + 1, j + 1] += k
        stiff[j, j + 1] -= k
        stiff[j + 1, j] -= k
    w = np.diag(1 / np.sqrt(m))
    ref = np.sort(-np.linalg.eigvalsh(w @ stiff @ w))
    got = eigenvalues(build_chain(ChainSpec(m.tolist(), K.tolist())))
    assert np.max(np.abs(got - ref)) <= 1e-10


def test_fixed_uniform_chain_modes():
    M = build_chain(ChainSpec([1] * 10, [1] * 9, Boundary.FIXED))
    assert M.N == 8
    E = sorted(m.frequency for m in mode_frequencies(M))
    k = np.arange(1, 9)
    assert np.max(np.abs(np.array(E) - np.sort(2 * np.abs(np.sin(k * np.pi / 18))))) <= 1e-10


def test_mode_frequencies_small_cases():
    (mode,) = mode_frequencies(JacobiMatrix([-4.0], [], "dyson"))
    assert mode.frequency == pytest.approx(2.0) and mode.stable
    (mode,) = mode_frequencies(JacobiMatrix([0.5], [], "lambda_seq_T2"))
    assert mode == Mode(0.5, None, False)
    with pytest.raises(UsageError):
        mode_frequencies(JacobiMatrix([0.0], [], "bellissard"))


def test_almost_mathieu_examples():
    free = build_almost_mathieu(0, GOLDEN_MEAN, 0.3, 20)
    k = np.arange(1, 21)
    assert np.max(np.abs(eigenvalues(free) - np.sort(2 * np.cos(k * np.pi / 21)))) <= 1e-10
    M = build_almost_mathieu(2, GOLDEN_MEAN, 0, 256)
    assert np.all(np.abs(M.diagonal) <= 2) and M.N == 256
    const = build_almost_mathieu(1, 0, 0.5, 5)
    assert np.allclose(const.diagonal, -1)


# -- spectrum report and IDS ----------------------------------------------------


def test_spectrum_report_examples():
    assert spectrum_report([-1, 1], 0.5).gaps == [(-1.0, 1.0)]
    assert spectrum_report([0.0], 0.3).gaps == []
    with pytest.raises(UsageError):
        spectrum_report([1, -1])


def test_spectrum_report_deterministic():
    M = build_bellissard(generate("3", 1024, "float"), 1024)
    a = spectrum_report(eigenvalues(M), 0.01, matrix=M).to_dict()
    b = spectrum_report(eigenvalues(M), 0.01, matrix=M).to_dict()
    assert a == b and a["gaps"] and a["provenance"] == "bellissard"
    ids = np.array(a["ids"])
    assert np.all(np.diff(ids, axis=0) >= 0) and ids[-1, 1] == 1.0


def test_ids_matches_sorted_eigenvalues():
    M = build_almost_mathieu(2, GOLDEN_MEAN, 0, 200)
    e = eigenvalues(M)
    grid = np.linspace(-4.5, 4.5, 97)
    expected = np.searchsorted(e, grid, side="right") / e.size
    assert np.array_equal(integrated_density(M, grid), expected)


def test_matrix_is_read_only():
    M = build_bellissard(generate("3", 8, "float"), 8)
    with pytest.raises(ValueError):
        M.off_diagonal[0] = 5.0
