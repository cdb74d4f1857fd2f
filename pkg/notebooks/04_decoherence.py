"""
Decoherence in a thermal bath
=============================

Both modes lose photons at rate ``kappa`` into a bath with ``nbar`` thermal
photons. The evolved Wigner function is again closed form. Past
``kappa t_c = ln((2 nbar + 2)/(2 nbar + 1))/2`` it is non-negative everywhere.
"""

from pathlib import Path

import numpy as np

from tpssv.channel import (
    ChannelSpec,
    evolve_density,
    evolved_evaluator,
    threshold_time,
    wf_convolution_oracle,
    wf_evolved_point,
)
from tpssv.export import atomic_write, evolve_csv
from tpssv.oracle import wigner_oracle
from tpssv.phase import PhasePoint
from tpssv.state import StateSpec, density_matrix
from tpssv.wigner import GridRequest, wf_grid

OUT = Path(__file__).with_name("output")
rng = np.random.default_rng(3)

spec = StateSpec(0.3, 0, 1)
ch = ChannelSpec(0.1, 1.0)
pt = PhasePoint.from_quadratures(*rng.uniform(-1.5, 1.5, (4, 10)))

# three independent routes to the same numbers
closed = wf_evolved_point(spec, ch, pt)
rho = evolve_density(density_matrix(spec, 30), ch)
print("Kraus pairs per mode:", rho.info["kraus_pairs_per_mode"], " trace:", rho.trace)
print("closed vs Kraus:", np.abs(closed - wigner_oracle(rho, pt)).max())
print("closed vs convolution:", np.abs(closed - wf_convolution_oracle(spec, ch, pt)).max())

for nbar in (0.0, 1.0, 5.0):
    print(f"nbar={nbar}: kt_c={threshold_time(nbar):.5f}")

req = GridRequest.slice("q1q2", x_steps=61, y_steps=61)
rows = []
for kt in (0.0, 0.05, 0.1, 0.14, threshold_time(1.0), 0.15, 0.2):
    grid = wf_grid(spec, req, evolved_evaluator(ChannelSpec(kt, 1.0)))
    rows.append({"kappa_t": kt, "nbar": 1.0, "lambda": spec.lam, "m": 0, "n": 1,
                 "grid_min": grid.min_value, "negative_fraction": grid.negative_fraction})
    print(f"kt={kt:.4f} grid min={grid.min_value:+.3e}")
atomic_write(OUT / "evolve_sweep.csv", evolve_csv(rows))
