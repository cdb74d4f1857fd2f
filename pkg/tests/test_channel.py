import math

import numpy as np
import pytest

from tpssv.channel import (
    ChannelSpec,
    KrausIndex,
    evolve_density,
    evolved_evaluator,
    interior_bound,
    kraus_completeness,
    kraus_matrix,
    thermal_density,
    threshold_time,
    wf_asymptotic,
    wf_at_threshold,
    wf_convolution_oracle,
    wf_evolved_point,
    wf_evolved_vacuum_case,
)
from tpssv.errors import ValidationError
from tpssv.oracle import wigner_oracle
from tpssv.state import StateSpec, density_matrix
from tpssv.wigner import GridRequest, wf_grid, wf_point

from .conftest import random_points


def test_channel_validation():
    with pytest.raises(ValidationError):
        ChannelSpec(-0.1)
    with pytest.raises(ValidationError):
        ChannelSpec(0.1, -1.0)
    with pytest.raises(ValidationError):
        ChannelSpec(float("inf"))


def test_channel_coefficients():
    ch = ChannelSpec(0.3, 1.5)
    T = 1 - math.exp(-0.6)
    assert ch.T == pytest.approx(T, rel=1e-15)
    assert ch.T1 == pytest.approx(1.5 * T / (1.5 * T + 1))
    assert ch.T3 == pytest.approx(2.5 * T / (1.5 * T + 1))
    assert ch.sigma == pytest.approx(4 * T)


def test_threshold_time_values():
    assert threshold_time(1.0) == pytest.approx(0.5 * math.log(4 / 3), rel=1e-15)
    assert threshold_time(0.0) == pytest.approx(0.5 * math.log(2), rel=1e-15)


def test_kraus_completeness_interior():
    for kt, nbar in ((0.05, 0.0), (0.1, 1.0), (0.5, 1.0), (0.5, 2.0)):
        ch = ChannelSpec(kt, nbar)
        diag = np.diag(kraus_completeness(ch, 80))
        ib = interior_bound(ch, 80)
        assert ib >= 8
        assert np.max(np.abs(diag[: ib + 1] - 1.0)) < 1e-8


def test_two_mode_kraus_sum_brute_force():
    ch = ChannelSpec(0.3, 0.5)
    cutoff = 6
    total = np.zeros(((cutoff + 1) ** 2,) * 2)
    # a^i and a^dag^r vanish on the truncated space once i or r exceeds the cutoff
    idx = range(cutoff + 1)
    for i in idx:
        for j in idx:
            for r in idx:
                for s in idx:
                    k = kraus_matrix(KrausIndex(i, j, r, s), ch, cutoff)
                    total += k.conj().T @ k
    block = total.reshape(cutoff + 1, cutoff + 1, cutoff + 1, cutoff + 1)[:2, :2, :2, :2].reshape(4, 4)
    np.testing.assert_allclose(block - np.diag(np.diag(block)), 0.0, atol=1e-15)
    # what is missing is the a^dag^r series cut at the box edge, about T1^(cutoff) per mode
    deficit = 1.0 - np.diag(block)
    assert np.all(deficit >= 0)
    assert np.max(deficit) < 4 * (cutoff + 1) * ch.T1**cutoff


def test_evolution_preserves_trace_and_hermiticity():
    rho = evolve_density(density_matrix(StateSpec(0.3, 0, 1), 30), ChannelSpec(0.2, 1.0))
    assert rho.trace == pytest.approx(1.0, abs=1e-8)
    np.testing.assert_allclose(rho.data, rho.data.conj().T, atol=1e-14)
    assert np.min(np.linalg.eigvalsh(rho.data)) > -1e-12


def test_long_time_state_is_thermal():
    rho = evolve_density(density_matrix(StateSpec(0.3, 0, 1), 40), ChannelSpec(10.0, 1.0))
    th = thermal_density(1.0, 40)
    assert np.max(np.abs(rho.data - th.data)) < 1e-6


def test_identity_channel_is_exact(rng):
    spec = StateSpec(0.5, 2, 1)
    pt = random_points(rng, 20)
    np.testing.assert_allclose(wf_evolved_point(spec, ChannelSpec(0.0, 2.0), pt), wf_point(spec, pt), atol=1e-14)
    assert evolved_evaluator(ChannelSpec(0.0, 1.0)) is wf_point


def test_closed_form_matches_kraus_oracle(rng):
    spec = StateSpec(0.5, 1, 1)
    ch = ChannelSpec(0.3, 0.5)
    rho = evolve_density(density_matrix(spec, 30), ch)
    pt = random_points(rng, 6)
    np.testing.assert_allclose(wf_evolved_point(spec, ch, pt), wigner_oracle(rho, pt), atol=1e-8)


def test_closed_form_matches_convolution(rng):
    spec = StateSpec(0.4, 2, 1)
    ch = ChannelSpec(0.15, 1.0)
    pt = random_points(rng, 6)
    np.testing.assert_allclose(wf_evolved_point(spec, ch, pt), wf_convolution_oracle(spec, ch, pt), atol=1e-8)


def test_vacuum_case_and_asymptote(rng):
    pt = random_points(rng, 20)
    ch = ChannelSpec(0.4, 0.7)
    np.testing.assert_allclose(wf_evolved_point(StateSpec(0.6), ch, pt), wf_evolved_vacuum_case(ch, 0.6, pt), atol=1e-15)
    np.testing.assert_allclose(wf_evolved_point(StateSpec(0.3, 0, 1), ChannelSpec(8.0, 1.0), pt), wf_asymptotic(1.0, pt), atol=1e-9)


@pytest.mark.parametrize("m,n", [(0, 1), (1, 1), (2, 3)])
def test_threshold_formula_is_nonnegative(m, n):
    spec = StateSpec(0.5, m, n)
    pts = GridRequest.slice("q1q2", x_steps=41, y_steps=41).points()
    vals = wf_at_threshold(spec, 1.0, pts)
    assert np.min(vals) >= 0.0
    ref = wf_evolved_point(spec, ChannelSpec(threshold_time(1.0), 1.0), pts)
    np.testing.assert_allclose(vals, ref, atol=1e-12)


def test_negativity_fades_monotonically():
    spec = StateSpec(0.5, 0, 2)
    req = GridRequest.slice("q1q2", x_steps=41, y_steps=41)
    mins = [wf_grid(spec, req, evolved_evaluator(ChannelSpec(kt, 1.0))).min_value for kt in (0.0, 0.05, 0.1, 0.2)]
    assert mins == sorted(mins)
    assert mins[0] < 0 < mins[-1] + 1e-10
