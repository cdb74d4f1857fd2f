"""
Normalization and photon-number distribution
=============================================

Subtracting ``m`` photons from mode a and ``n`` from mode b keeps the state on
the line ``m + n_a = n + n_b``. Its norm is a single Jacobi polynomial.
"""

from pathlib import Path

import numpy as np

from tpssv.export import write_pnd
from tpssv.state import StateSpec, default_cutoff, fock_amplitudes, normalization, pnd_table

OUT = Path(__file__).with_name("output")

# closed form against the brute Fock sum
for lam in (0.3, 0.8, 1.5):
    for m, n in ((0, 0), (1, 2), (5, 5)):
        spec = StateSpec(lam, m, n)
        cutoff = default_cutoff(spec, 1e-16)
        brute = fock_amplitudes(spec, cutoff, tol=1e-16).norm_sq
        print(f"lam={lam:<4} m={m} n={n}  N={normalization(spec):.6e}  rel.err={abs(brute / normalization(spec) - 1):.1e}  cutoff={cutoff}")

# the support line: (2, 5) lives on n_b = n_a - 3
spec = StateSpec(1.0, 2, 5)
table = pnd_table(spec, 30)
na, nb = np.nonzero(table > 1e-12)
print("support offsets n_a - n_b:", sorted({int(d) for d in na - nb}))
print("most likely (n_a, n_b):", tuple(int(i) for i in np.unravel_index(table.argmax(), table.shape)))

# figure data for the four panels of the distribution plot
for m, n in ((0, 0), (1, 1), (2, 4), (2, 5)):
    write_pnd(OUT / f"pnd_m{m}_n{n}.csv", StateSpec(1.0, m, n), 25)
print("wrote", sorted(p.name for p in OUT.glob("pnd_*.csv")))
