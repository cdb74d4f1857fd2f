import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpssv.errors import CutoffTooSmall, ValidationError
from tpssv.oracle import subtracted_amplitudes
from tpssv.state import (
    StateSpec,
    default_cutoff,
    density_matrix,
    fock_amplitudes,
    normalization,
    overlap,
    pnd,
    pnd_table,
    tail_fraction,
)


@pytest.mark.parametrize("bad", [dict(lam=0.0), dict(lam=-0.1), dict(lam=float("nan")), dict(lam=0.5, m=-1), dict(lam=0.5, n=11), dict(lam=0.5, m=1.5)])
def test_spec_validation(bad):
    with pytest.raises(ValidationError):
        StateSpec(**bad)


def test_squeezed_vacuum_is_normalized():
    for lam in (0.1, 0.7, 2.0):
        assert normalization(StateSpec(lam)) == pytest.approx(1.0, rel=1e-15)


def test_single_subtraction_norm():
    # <b^dag b> of the squeezed vacuum is sinh^2
    lam = 0.8
    assert normalization(StateSpec(lam, 0, 1)) == pytest.approx(math.sinh(lam) ** 2, rel=1e-14)
    assert normalization(StateSpec(lam, 1, 0)) == pytest.approx(math.sinh(lam) ** 2, rel=1e-14)


@settings(max_examples=80, deadline=None)
@given(lam=st.floats(0.05, 2.0), m=st.integers(0, 10), n=st.integers(0, 10))
def test_normalization_exchange_symmetry(lam, m, n):
    assert normalization(StateSpec(lam, m, n)) == pytest.approx(normalization(StateSpec(lam, n, m)), rel=1e-12)


@pytest.mark.parametrize("lam", [0.3, 1.1])
@pytest.mark.parametrize("m,n", [(0, 0), (2, 1), (1, 3), (3, 3)])
def test_overlap_matches_fock_sum(lam, m, n):
    spec = StateSpec(lam, m, n)
    cutoff = default_cutoff(StateSpec(lam, m + 2, n + 2), 1e-16)
    for s, t in ((1, 1), (2, 2), (0, 2), (2, 0)):
        # <m,n| m+s, n+t> is nonzero only when s == t
        other = fock_amplitudes(StateSpec(lam, m + s, n + t), cutoff, tol=1e-16).amps
        mine = fock_amplitudes(spec, cutoff, tol=1e-16).amps
        brute = float(np.sum(mine * other))
        expect = overlap(spec, s, t)
        if s != t:
            assert expect == 0.0 and brute == 0.0
        else:
            assert brute == pytest.approx(expect, rel=1e-12)


@pytest.mark.parametrize("lam", [0.3, 0.8])
@pytest.mark.parametrize("m,n", [(0, 0), (2, 0), (1, 3), (4, 2)])
def test_formula_route_matches_operator_route(lam, m, n):
    cutoff = 40
    formula = fock_amplitudes(StateSpec(lam, m, n), cutoff, tol=1e-6).amps
    operator = subtracted_amplitudes(lam, m, n, cutoff).amps
    np.testing.assert_allclose(formula, operator, atol=1e-12)


def test_pnd_support_line_and_sum():
    spec = StateSpec(1.0, 2, 5)
    table = pnd_table(spec, default_cutoff(spec, 1e-15))
    na, nb = np.nonzero(table)
    assert np.all(nb == na - 3)
    assert table.sum() == pytest.approx(1.0, abs=1e-13)
    assert pnd(spec, 4, 1) == pytest.approx(table[4, 1], rel=1e-15)
    assert pnd(spec, 4, 2) == 0.0


def test_pnd_vacuum_is_thermal_diagonal():
    lam = 1.0
    spec = StateSpec(lam)
    k = np.arange(10)
    expect = np.tanh(lam) ** (2 * k) / np.cosh(lam) ** 2
    np.testing.assert_allclose([pnd(spec, j, j) for j in k], expect, rtol=1e-13)


def test_cutoff_too_small_raises():
    spec = StateSpec(1.5, 5, 5)
    assert tail_fraction(spec, 80) > 1e-3
    with pytest.raises(CutoffTooSmall):
        fock_amplitudes(spec, 80)


def test_default_cutoff_meets_tolerance():
    for spec in (StateSpec(0.3), StateSpec(1.5, 5, 2), StateSpec(2.0, 10, 10)):
        c = default_cutoff(spec, 1e-12)
        assert tail_fraction(spec, c) <= 1e-12


def test_density_matrix_is_pure_and_frozen():
    rho = density_matrix(StateSpec(0.5, 1, 2), 30)
    assert rho.trace == pytest.approx(1.0, abs=1e-12)
    assert rho.purity() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        rho.data[0, 0] = 2.0
