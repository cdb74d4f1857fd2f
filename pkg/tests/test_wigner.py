import math

import numpy as np
import pytest

from tpssv.errors import GridTooLarge, ValidationError
from tpssv.oracle import wigner_oracle
from tpssv.phase import PhasePoint
from tpssv.state import StateSpec, fock_amplitudes
from tpssv.wigner import (
    GridRequest,
    count_extrema,
    diagonal_profile,
    squeezed_frame,
    wf_grid,
    wf_point,
    wf_special_subtract_b_only,
)

from .conftest import random_points


def test_squeezed_vacuum_closed_form(rng):
    lam = 0.6
    pt = random_points(rng, 20)
    f = squeezed_frame(lam, pt)
    expect = np.exp(-2 * abs(f.alpha_bar) ** 2 - 2 * abs(f.beta_bar) ** 2) / math.pi**2
    np.testing.assert_allclose(wf_point(StateSpec(lam), pt), expect, rtol=1e-13)


@pytest.mark.parametrize("lam", [0.2, 0.9, 1.7])
def test_single_subtraction_origin_value(lam):
    assert wf_point(StateSpec(lam, 0, 1), PhasePoint.origin()) == pytest.approx(-1 / math.pi**2, rel=1e-12)
    assert wf_point(StateSpec(lam, 1, 0), PhasePoint.origin()) == pytest.approx(-1 / math.pi**2, rel=1e-12)


@pytest.mark.parametrize("n", range(6))
def test_b_only_laguerre_form(n, rng):
    spec = StateSpec(0.7, 0, n)
    pt = random_points(rng, 40, width=2.5)
    np.testing.assert_allclose(wf_point(spec, pt), wf_special_subtract_b_only(spec, pt), atol=1e-12)


def test_b_only_form_rejects_a_subtraction():
    with pytest.raises(ValidationError):
        wf_special_subtract_b_only(StateSpec(0.5, 1, 0), PhasePoint.origin())


@pytest.mark.parametrize("m,n", [(0, 2), (2, 2), (3, 1)])
def test_closed_form_matches_oracle(m, n, rng):
    spec = StateSpec(0.5, m, n)
    pt = random_points(rng, 8)
    np.testing.assert_allclose(wf_point(spec, pt), wigner_oracle(fock_amplitudes(spec, 50), pt), atol=1e-8)


def test_wigner_is_bounded_by_parity_limit(rng):
    pt = random_points(rng, 200, width=3.0)
    for m, n in ((0, 0), (2, 3), (5, 1)):
        assert np.max(np.abs(wf_point(StateSpec(0.8, m, n), pt))) <= 1 / math.pi**2 + 1e-12


def test_grid_shape_and_summary():
    req = GridRequest.slice("q1q2", x_steps=11, y_steps=7, fixed={"p1": 0.2})
    grid = wf_grid(StateSpec(0.3, 0, 1), req)
    assert grid.values.shape == (11, 7)
    s = grid.summary()
    assert s["slice"]["fixed"] == {"p1": 0.2, "p2": 0.0}
    assert s["min_value"] == grid.values.min()
    assert 0 < s["negative_fraction"] < 1


def test_grid_validation():
    with pytest.raises(ValidationError):
        GridRequest(x_axis="q1", y_axis="q1")
    with pytest.raises(ValidationError):
        GridRequest.slice("xyzw")
    with pytest.raises(GridTooLarge):
        wf_grid(StateSpec(0.3), GridRequest(x_steps=2000, y_steps=1000))


def test_valleys_on_anti_diagonal():
    grid = wf_grid(StateSpec(0.5, 1, 3), GridRequest.slice("p1p2", x_steps=201, y_steps=201))
    minima, maxima = count_extrema(diagonal_profile(grid, anti=True))
    assert minima >= 2 and maxima >= 3


def test_count_extrema():
    assert count_extrema(np.array([0, 1, 0, 1, 0, 2, 3])) == (2, 2)
