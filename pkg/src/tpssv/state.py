"""The photon-subtracted two-mode squeezed vacuum ``a^m b^n S2(lam)|00>``.

Closed forms (normalization, overlaps, photon-number distribution) live next
to the truncated Fock-basis representation they are checked against. The
un-normalized ket is the object the closed-form overlaps refer to; the
photon-number distribution and density matrix use the normalized state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Integral

import numpy as np
from scipy.special import gammaln

from .errors import CutoffTooSmall, ValidationError
from .specfun import factorial, jacobi_p

MAX_SUBTRACTED = 10
DEFAULT_TAIL_TOL = 1e-12
# dense two-mode density matrices beyond this dimension are refused
MAX_DENSE_DIM = 6000


@dataclass(frozen=True)
class StateSpec:
    """Squeezing parameter ``lam > 0`` and photons ``m`` (mode a), ``n`` (mode b) removed."""

    lam: float
    m: int = 0
    n: int = 0

    def __post_init__(self):
        if not isinstance(self.m, Integral) or not isinstance(self.n, Integral):
            raise ValidationError("m and n must be integers")
        if not 0 <= self.m <= MAX_SUBTRACTED or not 0 <= self.n <= MAX_SUBTRACTED:
            raise ValidationError(
                f"m, n must lie in [0, {MAX_SUBTRACTED}], got m={self.m}, n={self.n}"
            )
        lam = float(self.lam)
        if not math.isfinite(lam) or lam <= 0.0:
            raise ValidationError(f"lambda must be finite and > 0, got {self.lam}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))

    @property
    def tau(self) -> float:
        return math.cosh(2.0 * self.lam)

    def swapped(self) -> "StateSpec":
        return StateSpec(self.lam, self.n, self.m)


@dataclass(frozen=True)
class FockAmplitudes:
    """Two-mode Fock amplitudes ``amps[n_a, n_b]`` for ``0 <= n_a, n_b <= cutoff``."""

    cutoff: int
    amps: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.amps.flags.writeable = False

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def normalize(self) -> "FockAmplitudes":
        if self.normalized:
            return self
        return FockAmplitudes(self.cutoff, self.amps / math.sqrt(self.norm_sq), True)

    def vector(self) -> np.ndarray:
        """Flattened ket, index ``n_a * (cutoff + 1) + n_b``."""
        return self.amps.reshape(-1)


@dataclass(frozen=True)
class FockMatrix:
    """Dense two-mode density matrix on the ``(cutoff + 1)**2`` dimensional space.

    ``data`` is indexed ``[(n_a, n_b), (n_a', n_b')]`` with the pair flattened
    as ``n_a * (cutoff + 1) + n_b``. ``leakage`` records probability known to
    have been lost to truncation while building the matrix.
    """

    cutoff: int
    data: np.ndarray
    leakage: float = 0.0
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        dim = (self.cutoff + 1) ** 2
        if self.data.shape != (dim, dim):
            raise ValidationError(f"density matrix shape {self.data.shape} != ({dim}, {dim})")
        self.data.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.data).real)

    @property
    def tensor(self) -> np.ndarray:
        """View indexed ``[n_a, n_b, n_a', n_b']``."""
        d = self.cutoff + 1
        return self.data.reshape(d, d, d, d)

    def purity(self) -> float:
        return float(np.real(np.vdot(self.data.T, self.data)))


# -- closed forms -----------------------------------------------------------


def normalization(spec: StateSpec) -> float:
    """Squared norm ``m! n! sinh^{2n}(lam) P_m^{(n-m,0)}(cosh 2 lam)`` of the un-normalized ket."""
    m, n = spec.m, spec.n
    return (
        float(factorial(m) * factorial(n))
        * math.sinh(spec.lam) ** (2 * n)
        * jacobi_p(m, n - m, 0, spec.tau)
    )


def overlap(spec: StateSpec, s: int, t: int) -> float:
    """Inner product ``<lam, m+s, n+t | lam, m, n>`` of un-normalized kets."""
    if s < 0 or t < 0:
        raise ValidationError("overlap shifts s, t must be nonnegative")
    StateSpec(spec.lam, spec.m + s, spec.n + t)
    if s != t:
        return 0.0
    m, n, lam = spec.m, spec.n, spec.lam
    return (
        float(factorial(m) * factorial(n + s))
        * math.sinh(lam) ** (2 * n + s)
        * math.cosh(lam) ** s
        * jacobi_p(m, n - m, s, spec.tau)
    )


def _log_amp(spec: StateSpec, na):
    """log of the un-normalized amplitude at ``(na, na + m - n)`` (on the support line)."""
    na = np.asarray(na, dtype=float)
    nb = na + spec.m - spec.n
    return (
        gammaln(spec.m + na + 1)
        - 0.5 * (gammaln(na + 1) + gammaln(nb + 1))
        - math.log(math.cosh(spec.lam))
        + (spec.m + na) * math.log(math.tanh(spec.lam))
    )


def pnd(spec: StateSpec, n_a: int, n_b: int) -> float:
    """Probability of ``n_a`` photons in mode a and ``n_b`` in mode b."""
    if n_a < 0 or n_b < 0 or spec.m + n_a != spec.n + n_b:
        return 0.0
    return math.exp(2.0 * float(_log_amp(spec, n_a)) - math.log(normalization(spec)))


def pnd_table(spec: StateSpec, cutoff: int) -> np.ndarray:
    """``P[n_a, n_b]`` for the whole ``(cutoff + 1)**2`` lattice."""
    table = np.zeros((cutoff + 1, cutoff + 1))
    log_norm = math.log(normalization(spec))
    for na, nb in _support(spec, cutoff):
        table[na, nb] = math.exp(2.0 * float(_log_amp(spec, na)) - log_norm)
    return table


# -- truncated Fock representation -----------------------------------------


def _support(spec: StateSpec, cutoff: int):
    shift = spec.m - spec.n
    for na in range(max(0, -shift), cutoff + 1):
        nb = na + shift
        if nb > cutoff:
            break
        yield na, nb


def tail_fraction(spec: StateSpec, cutoff: int) -> float:
    """Fraction of the squared norm carried by amplitudes outside the cutoff box.

    The support line is continued past the box until the remaining terms,
    bounded by a geometric series, no longer matter.
    """
    shift = spec.m - spec.n
    first = max(0, -shift)
    last = min(cutoff, cutoff - shift)
    if last < first:
        return 1.0
    inside = np.arange(first, last + 1)
    logs_in = 2.0 * _log_amp(spec, inside)
    ref = logs_in.max()
    mass_in = float(np.sum(np.exp(logs_in - ref)))
    mass_out = 0.0
    for k in range(last + 1, last + 10**6, 256):
        logs = 2.0 * _log_amp(spec, np.arange(k, k + 256))
        terms = np.exp(logs - ref)
        mass_out += float(terms.sum())
        ratio = math.exp(logs[-1] - logs[-2])
        if ratio < 1.0 and terms[-1] * ratio / (1.0 - ratio) < 1e-30 * (mass_in + mass_out):
            break
    return mass_out / (mass_in + mass_out)


def default_cutoff(spec: StateSpec, tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest cutoff of the form ``N0 * 1.25**j`` whose tail fraction is below ``tol``.

    ``N0 = max(20, ceil(m + n + 10 / sech^2 lam))``; amplitudes decay like
    ``tanh^{2k} lam`` along the support line, times a power of ``k``.
    """
    t2 = math.tanh(spec.lam) ** 2
    cutoff = max(20, math.ceil(spec.m + spec.n + 10.0 / (1.0 - t2)), spec.m, spec.n)
    while tail_fraction(spec, cutoff) > tol:
        cutoff = math.ceil(cutoff * 1.25)
    return cutoff


def fock_amplitudes(
    spec: StateSpec, cutoff: int | None = None, tol: float = DEFAULT_TAIL_TOL
) -> FockAmplitudes:
    """Un-normalized amplitudes ``<n_a, n_b | lam, m, n>``.

    Nonzero only on ``m + n_a == n + n_b`` where they equal
    ``(m + n_a)! / sqrt(n_a! n_b!) sech(lam) tanh^{m + n_a}(lam)``.

    Raises
    ------
    CutoffTooSmall
        If the mass beyond ``cutoff`` exceeds ``tol`` of the total.
    """
    if cutoff is None:
        cutoff = default_cutoff(spec, tol)
    if cutoff < max(spec.m, spec.n):
        raise CutoffTooSmall(f"cutoff {cutoff} < max(m, n) = {max(spec.m, spec.n)}")
    tail = tail_fraction(spec, cutoff)
    if tail > tol:
        raise CutoffTooSmall(
            f"cutoff {cutoff} leaves tail fraction {tail:.3e} > {tol:.1e} for {spec}"
        )
    amps = np.zeros((cutoff + 1, cutoff + 1))
    for na, nb in _support(spec, cutoff):
        amps[na, nb] = math.exp(float(_log_amp(spec, na)))
    return FockAmplitudes(cutoff, amps, normalized=False)


def density_matrix(
    spec: StateSpec, cutoff: int | None = None, tol: float = DEFAULT_TAIL_TOL
) -> FockMatrix:
    """Normalized pure-state density matrix ``|psi><psi|`` in the truncated basis."""
    amps = fock_amplitudes(spec, cutoff, tol).normalize()
    dim = (amps.cutoff + 1) ** 2
    if dim > MAX_DENSE_DIM:
        raise ValidationError(
            f"dense density matrix of dimension {dim} exceeds {MAX_DENSE_DIM}; "
            "work with FockAmplitudes instead"
        )
    psi = amps.vector()
    return FockMatrix(
        amps.cutoff,
        np.outer(psi, psi.conj()).astype(complex),
        leakage=tail_fraction(spec, amps.cutoff),
        info={"spec": spec},
    )
