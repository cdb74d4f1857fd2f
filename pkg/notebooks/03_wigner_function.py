"""
Wigner function slices
======================

The closed form is a short double sum of two-variable Hermite polynomials in
the squeezed frame. The check below compares it with the displaced-parity
trace in a truncated Fock basis, then writes the two standard slices.
"""

from pathlib import Path

import numpy as np

from tpssv.export import write_grid
from tpssv.oracle import wigner_oracle
from tpssv.phase import PhasePoint
from tpssv.state import StateSpec, fock_amplitudes
from tpssv.wigner import GridRequest, count_extrema, diagonal_profile, wf_grid, wf_point

OUT = Path(__file__).with_name("output")
rng = np.random.default_rng(7)

spec = StateSpec(0.5, 1, 1)
pt = PhasePoint.from_quadratures(*rng.uniform(-1.5, 1.5, (4, 20)))
print("closed form vs oracle:", np.abs(wf_point(spec, pt) - wigner_oracle(fock_amplitudes(spec, 50), pt)).max())

# W(0) = -1/pi^2 for one subtracted photon, whatever lam is
print("(0,1) at origin * pi^2:", [round(wf_point(StateSpec(l, 0, 1), PhasePoint.origin()) * np.pi**2, 12) for l in (0.2, 1.0)])

for m, n in ((0, 0), (0, 1), (1, 1), (1, 3)):
    s = StateSpec(0.5, m, n)
    for name in ("p1p2", "q1q2"):
        grid = wf_grid(s, GridRequest.slice(name, x_steps=101, y_steps=101))
        write_grid(OUT / f"wigner_{name}_m{m}_n{n}.csv", grid, s)
        print(f"({m},{n}) {name}: min={grid.min_value:+.4f} negative fraction={grid.negative_fraction:.3f}")

# valleys along the anti-diagonal of the p1p2 slice grow with |m - n|
grid = wf_grid(StateSpec(0.5, 1, 3), GridRequest.slice("p1p2", x_steps=201, y_steps=201))
print("(1,3) anti-diagonal minima/maxima:", count_extrema(diagonal_profile(grid, anti=True)))
