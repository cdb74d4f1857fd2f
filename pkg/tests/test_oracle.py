import math

import numpy as np
import pytest

from tpssv.errors import DomainError, LeakageTooLarge
from tpssv.oracle import (
    LadderMatrices,
    TwoModeOperator,
    annihilation,
    displacement_matrix,
    expectation,
    wigner_operator,
    wigner_oracle,
)
from tpssv.phase import PhasePoint
from tpssv.state import StateSpec, density_matrix, fock_amplitudes
from tpssv.wigner import riemann_integral_4d, wf_point

from .conftest import random_points


def test_commutator_on_interior_block():
    assert LadderMatrices(40).commutator_defect() < 1e-13


def test_annihilation_entries():
    a = annihilation(4)
    np.testing.assert_allclose(np.diag(a, 1), np.sqrt([1, 2, 3, 4]))


def test_operator_algebra():
    L = LadderMatrices(6)
    n_a = L.adag * L.a
    dense = n_a.dense()
    assert dense.shape == (49, 49)
    np.testing.assert_allclose(np.diag(dense).reshape(7, 7)[:, 0], np.arange(7))
    assert isinstance(n_a + L.identity, TwoModeOperator)
    np.testing.assert_allclose((L.a * L.b).dag().dense(), (L.adag * L.bdag).dense())
    np.testing.assert_allclose((2.0 * n_a - n_a).dense(), dense)


def test_displacement_is_unitary_on_interior():
    d = displacement_matrix(0.3 - 0.4j, 80)
    u = d.conj().T @ d
    np.testing.assert_allclose(u[:30, :30], np.eye(30), atol=1e-12)


def test_displacement_of_vacuum_is_coherent_state():
    g = 0.7 + 0.2j
    col = displacement_matrix(g, 20)[:, 0]
    k = np.arange(21)
    expect = np.exp(-abs(g) ** 2 / 2) * g**k / np.sqrt([math.factorial(int(j)) for j in k])
    np.testing.assert_allclose(col, expect, atol=1e-14)


def test_vacuum_wigner_peak():
    rho = density_matrix(StateSpec(1e-9), 10, tol=1.0)
    assert wigner_oracle(rho, PhasePoint.origin()) == pytest.approx(1 / math.pi**2, rel=1e-12)
    assert wigner_operator(0.0, 5)[0, 0] == pytest.approx(1 / math.pi)


def test_squeezed_vacuum_oracle_matches_gaussian(rng):
    spec = StateSpec(0.4)
    amps = fock_amplitudes(spec, 50)
    pt = random_points(rng, 10)
    np.testing.assert_allclose(wigner_oracle(amps, pt), wf_point(spec, pt), atol=1e-10)


def test_pure_and_mixed_oracle_routes_agree(rng):
    spec = StateSpec(0.5, 1, 1)
    pt = random_points(rng, 5)
    a = wigner_oracle(fock_amplitudes(spec, 30), pt)
    b = wigner_oracle(density_matrix(spec, 30), pt)
    np.testing.assert_allclose(a, b, atol=1e-13)
    np.testing.assert_allclose(a, wf_point(spec, pt), atol=1e-8)


def test_leakage_guard():
    amps = fock_amplitudes(StateSpec(0.3), 20)
    with pytest.raises(LeakageTooLarge):
        wigner_oracle(amps, PhasePoint(3.0, 0.0))


def test_expectation_rejects_mismatched_operator():
    amps = fock_amplitudes(StateSpec(0.3), 20)
    with pytest.raises(DomainError):
        expectation(amps, LadderMatrices(10).a)


def test_normalization_integral():
    assert riemann_integral_4d(StateSpec(0.5), 6.0, 40) == pytest.approx(1.0, abs=1e-2)
    assert riemann_integral_4d(StateSpec(0.5, 1, 1), 6.0, 40) == pytest.approx(1.0, abs=1e-2)
