import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpssv.moments import (
    antibunching,
    antibunching_zero_two,
    cross_correlation,
    mean_na,
    mean_nanb,
    mean_nb,
    moments,
    quadrature_variances,
    sweep_row,
    var_p_one_one,
    var_q_one_one,
)
from tpssv.oracle import LadderMatrices, expectation
from tpssv.state import StateSpec, default_cutoff, fock_amplitudes

LAM = np.linspace(0.05, 2.0, 60)


def test_squeezed_vacuum_variances():
    for lam in (0.2, 1.0):
        q = quadrature_variances(StateSpec(lam))
        assert q.var_Q == pytest.approx(math.exp(2 * lam) / 2, rel=1e-13)
        assert q.var_P == pytest.approx(math.exp(-2 * lam) / 2, rel=1e-13)
        assert q.uncertainty_product == pytest.approx(0.25, abs=1e-13)


def test_single_subtraction_squeezing_onset():
    assert quadrature_variances(StateSpec(0.5 * math.log(2) - 1e-6, 0, 1)).p_squeezed is False
    assert quadrature_variances(StateSpec(0.5 * math.log(2) + 1e-6, 0, 1)).p_squeezed is True


def test_one_one_elementary_forms():
    np.testing.assert_allclose([quadrature_variances(StateSpec(l, 1, 1)).var_P for l in LAM], var_p_one_one(LAM), rtol=1e-12)
    np.testing.assert_allclose([quadrature_variances(StateSpec(l, 1, 1)).var_Q for l in LAM], var_q_one_one(LAM), rtol=1e-12)


def test_antibunching_special_forms():
    np.testing.assert_allclose([antibunching(StateSpec(l)) for l in LAM], -1 / np.cosh(2 * LAM), rtol=1e-12)
    np.testing.assert_allclose([antibunching(StateSpec(l, 0, 2)) for l in LAM], antibunching_zero_two(LAM), rtol=1e-10, atol=1e-12)


def test_g12_is_ratio_of_moments():
    spec = StateSpec(0.7, 2, 3)
    assert cross_correlation(spec) == pytest.approx(mean_nanb(spec) / (mean_na(spec) * mean_nb(spec)), rel=1e-13)


@pytest.mark.parametrize("m,n", [(1, 2), (3, 4), (2, 4), (6, 8), (3, 6), (7, 10)])
def test_g12_above_one(m, n):
    assert min(cross_correlation(StateSpec(l, m, n)) for l in LAM) > 1.0


@pytest.mark.parametrize("k", [1, 2, 8])
def test_equal_subtraction_is_p_squeezed(k):
    assert all(quadrature_variances(StateSpec(l, k, k)).p_squeezed for l in LAM)


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(0.05, 2.0), m=st.integers(0, 10), n=st.integers(0, 10))
def test_mode_swap_exchanges_photon_numbers(lam, m, n):
    a = moments(StateSpec(lam, m, n))
    b = moments(StateSpec(lam, n, m))
    assert a.mean_na == pytest.approx(b.mean_nb, rel=1e-10)
    assert a.mean_ab == pytest.approx(b.mean_ab, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(0.05, 2.0), m=st.integers(0, 10), n=st.integers(0, 10))
def test_photon_number_difference_is_fixed(lam, m, n):
    # the state lives on n_a - n_b = n - m
    mom = moments(StateSpec(lam, m, n))
    assert mom.mean_na - mom.mean_nb == pytest.approx(n - m, abs=1e-9 * max(1.0, mom.mean_na))


@pytest.mark.parametrize("lam", [0.3, 1.5])
@pytest.mark.parametrize("m,n", [(0, 0), (1, 2), (3, 1)])
def test_quadrature_variances_against_oracle(lam, m, n):
    spec = StateSpec(lam, m, n)
    cutoff = default_cutoff(spec, 1e-16)
    amps = fock_amplitudes(spec, cutoff, tol=1e-16)
    L = LadderMatrices(cutoff)
    Q, P = L.quadratures()
    q = quadrature_variances(spec)
    assert expectation(amps, Q * Q).real == pytest.approx(q.var_Q, rel=1e-10)
    assert expectation(amps, P * P).real == pytest.approx(q.var_P, rel=1e-10)


def test_sweep_row_keys():
    row = sweep_row(StateSpec(0.5, 1, 2))
    assert list(row) == ["lambda", "m", "n", "mean_na", "mean_nb", "var_Q", "var_P", "g12", "R_ab"]
