"""Two-mode phase-space points."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class PhasePoint:
    """Complex amplitudes ``alpha = (q1 + i p1)/sqrt2`` and ``beta = (q2 + i p2)/sqrt2``.

    Both fields may be numpy arrays of a common broadcast shape, in which case
    the point describes a whole grid.
    """

    alpha: complex
    beta: complex

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=complex)
        b = np.asarray(self.beta, dtype=complex)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("phase-space point must be finite")
        object.__setattr__(self, "alpha", complex(a) if a.ndim == 0 else a)
        object.__setattr__(self, "beta", complex(b) if b.ndim == 0 else b)

    @classmethod
    def from_quadratures(cls, q1, p1, q2, p2) -> "PhasePoint":
        q1, p1, q2, p2 = (np.asarray(v, dtype=float) for v in (q1, p1, q2, p2))
        return cls((q1 + 1j * p1) / SQRT2, (q2 + 1j * p2) / SQRT2)

    @classmethod
    def origin(cls) -> "PhasePoint":
        return cls(0j, 0j)

    @property
    def q1(self):
        return np.real(self.alpha) * SQRT2

    @property
    def p1(self):
        return np.imag(self.alpha) * SQRT2

    @property
    def q2(self):
        return np.real(self.beta) * SQRT2

    @property
    def p2(self):
        return np.imag(self.beta) * SQRT2

    @property
    def shape(self) -> tuple:
        return np.broadcast(np.asarray(self.alpha), np.asarray(self.beta)).shape

    def quadratures(self) -> tuple:
        return self.q1, self.p1, self.q2, self.p2
