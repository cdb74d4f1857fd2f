"""Brute-force reference machinery in the truncated Fock basis.

Nothing in here uses the closed forms of :mod:`tpssv.state`, :mod:`tpssv.moments`,
:mod:`tpssv.wigner` or :mod:`tpssv.channel`; it exists so those can be tested
against an independent route. Two-mode operators are kept as sums of
``A (x) B`` products so that expectation values never need the dense
``(N+1)**2``-dimensional matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import DomainError, LeakageTooLarge
from .phase import PhasePoint
from .state import FockAmplitudes, FockMatrix

BOUNDARY_TOL = 1e-10


def annihilation(cutoff: int) -> np.ndarray:
    """Single-mode ``a`` on ``span{|0>, ..., |cutoff>}``."""
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1)


class TwoModeOperator:
    """Finite sum ``sum_k c_k A_k (x) B_k`` of single-mode operator products."""

    def __init__(self, terms):
        self.terms = [(complex(c), np.asarray(a), np.asarray(b)) for c, a, b in terms]

    @property
    def cutoff(self) -> int:
        return self.terms[0][1].shape[0] - 1

    def __add__(self, other):
        if not isinstance(other, TwoModeOperator):
            return NotImplemented
        return TwoModeOperator(self.terms + other.terms)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, TwoModeOperator):
            return TwoModeOperator(
                [(c1 * c2, a1 @ a2, b1 @ b2) for c1, a1, b1 in self.terms for c2, a2, b2 in other.terms]
            )
        return TwoModeOperator([(other * c, a, b) for c, a, b in self.terms])

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def dag(self) -> "TwoModeOperator":
        return TwoModeOperator([(c.conjugate(), a.conj().T, b.conj().T) for c, a, b in self.terms])

    def dense(self) -> np.ndarray:
        return sum(c * np.kron(a, b) for c, a, b in self.terms)

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Act on a ket stored as the matrix ``psi[n_a, n_b]``."""
        return sum(c * (a @ psi @ b.T) for c, a, b in self.terms)


@dataclass(frozen=True)
class LadderMatrices:
    """Ladder operators of both modes on the truncated two-mode space."""

    cutoff: int

    @property
    def _a1(self) -> np.ndarray:
        return annihilation(self.cutoff)

    @property
    def _eye(self) -> np.ndarray:
        return np.eye(self.cutoff + 1)

    @property
    def identity(self) -> TwoModeOperator:
        return TwoModeOperator([(1.0, self._eye, self._eye)])

    @property
    def a(self) -> TwoModeOperator:
        return TwoModeOperator([(1.0, self._a1, self._eye)])

    @property
    def b(self) -> TwoModeOperator:
        return TwoModeOperator([(1.0, self._eye, self._a1)])

    @property
    def adag(self) -> TwoModeOperator:
        return self.a.dag()

    @property
    def bdag(self) -> TwoModeOperator:
        return self.b.dag()

    def quadratures(self):
        """``(Q, P)`` with ``Q = (Q1 + Q2)/sqrt2``, ``Q1 = (a + a^dag)/sqrt2``, ``P1 = (a - a^dag)/(sqrt2 i)``."""
        q1 = (self.a + self.adag) * (1 / math.sqrt(2))
        q2 = (self.b + self.bdag) * (1 / math.sqrt(2))
        p1 = (self.a - self.adag) * (1 / (math.sqrt(2) * 1j))
        p2 = (self.b - self.bdag) * (1 / (math.sqrt(2) * 1j))
        return (q1 + q2) * (1 / math.sqrt(2)), (p1 + p2) * (1 / math.sqrt(2))

    def commutator_defect(self) -> float:
        """Max deviation of ``[a, a^dag]`` from identity on the interior block."""
        a = self._a1
        comm = a @ a.T - a.T @ a
        n = self.cutoff
        return float(np.max(np.abs(comm[:n, :n] - np.eye(n))))


def _boundary_mass(state) -> float:
    if isinstance(state, FockAmplitudes):
        p = np.abs(state.amps) ** 2
        total = p.sum()
    else:
        p = np.real(np.diag(state.data)).reshape(state.cutoff + 1, state.cutoff + 1)
        total = p.sum()
    return float((p[-1, :].sum() + p[:-1, -1].sum()) / total)


def expectation(state, op) -> complex:
    """``Tr[rho op]`` for a density matrix, or ``<psi|op|psi>/<psi|psi>`` for a ket.

    ``op`` is a :class:`TwoModeOperator` or a dense matrix of matching dimension.
    """
    if isinstance(state, FockAmplitudes):
        psi = state.amps.astype(complex)
        if isinstance(op, TwoModeOperator):
            if op.cutoff != state.cutoff:
                raise DomainError("operator and state cutoffs differ")
            val = np.vdot(psi, op.apply(psi))
        else:
            if op.shape != (psi.size, psi.size):
                raise DomainError("operator and state dimensions differ")
            v = psi.reshape(-1)
            val = np.vdot(v, op @ v)
        return complex(val / np.vdot(psi, psi).real)
    if isinstance(state, FockMatrix):
        if isinstance(op, TwoModeOperator):
            if op.cutoff != state.cutoff:
                raise DomainError("operator and state cutoffs differ")
            rho = state.tensor
            val = sum(c * np.einsum("ijkl,ki,lj->", rho, a, b, optimize=True) for c, a, b in op.terms)
        else:
            if op.shape != state.data.shape:
                raise DomainError("operator and state dimensions differ")
            val = np.trace(state.data @ op)
        return complex(val)
    raise TypeError(f"unsupported state type {type(state).__name__}")


def squeezed_vacuum_amplitudes(lam: float, cutoff: int) -> np.ndarray:
    """``sech(lam) exp(tanh(lam) a^dag b^dag)|00>`` truncated; ``amps[k, k] = sech tanh^k``."""
    k = np.arange(cutoff + 1)
    amps = np.zeros((cutoff + 1, cutoff + 1))
    amps[k, k] = np.tanh(lam) ** k / np.cosh(lam)
    return amps


def subtracted_amplitudes(lam: float, m: int, n: int, cutoff: int) -> FockAmplitudes:
    """Apply ``a^m b^n`` (explicit matrices) to the squeezed vacuum, then crop to ``cutoff``."""
    big = cutoff + max(m, n)
    a = annihilation(big)
    psi = np.linalg.matrix_power(a, m) @ squeezed_vacuum_amplitudes(lam, big) @ np.linalg.matrix_power(a, n).T
    return FockAmplitudes(cutoff, psi[: cutoff + 1, : cutoff + 1].copy(), normalized=False)


def displacement_matrix(gamma: complex, cutoff: int) -> np.ndarray:
    """``<j|D(gamma)|k>`` from the associated-Laguerre closed form, ``0 <= j, k <= cutoff``."""
    gamma = complex(gamma)
    j, k = np.meshgrid(np.arange(cutoff + 1), np.arange(cutoff + 1), indexing="ij")
    if gamma == 0:
        return np.eye(cutoff + 1, dtype=complex)
    x = abs(gamma) ** 2
    lo = np.minimum(j, k)
    hi = np.maximum(j, k)
    diff = hi - lo
    log_pref = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + diff * math.log(abs(gamma)) - x / 2
    # j >= k carries (gamma/|gamma|)^d, j < k carries (-gamma*/|gamma|)^d
    phase_lower = (gamma / abs(gamma)) ** diff
    phase_upper = (-np.conj(gamma) / abs(gamma)) ** diff
    phase = np.where(j >= k, phase_lower, phase_upper)
    return np.exp(log_pref) * phase * eval_genlaguerre(lo, diff, x)


def wigner_operator(alpha: complex, cutoff: int) -> np.ndarray:
    """Single-mode ``Delta(alpha) = D(2 alpha) (-1)^{a^dag a} / pi``; vacuum value ``1/pi``."""
    parity = (-1.0) ** np.arange(cutoff + 1)
    return displacement_matrix(2 * complex(alpha), cutoff) * parity[None, :] / math.pi


def wigner_oracle(state, pt: PhasePoint, boundary_tol: float = BOUNDARY_TOL) -> float:
    """``Tr[Delta_a(alpha) Delta_b(beta) rho]`` evaluated with explicit Fock matrices.

    Raises
    ------
    LeakageTooLarge
        If the state has more than ``boundary_tol`` of its weight on the last
        Fock row/column, or ``|2 alpha|^2`` or ``|2 beta|^2`` exceeds the cutoff.
    """
    cutoff = state.cutoff
    alphas = np.atleast_1d(np.asarray(pt.alpha, dtype=complex))
    betas = np.atleast_1d(np.asarray(pt.beta, dtype=complex))
    alphas, betas = np.broadcast_arrays(alphas, betas)
    if np.max(4 * np.abs(alphas) ** 2) > cutoff or np.max(4 * np.abs(betas) ** 2) > cutoff:
        raise LeakageTooLarge(f"|2 alpha|^2 or |2 beta|^2 exceeds cutoff {cutoff}")
    if _boundary_mass(state) > boundary_tol:
        raise LeakageTooLarge("state carries weight on the cutoff boundary")
    if isinstance(state, FockAmplitudes):
        psi = state.amps.astype(complex)
        norm = np.vdot(psi, psi).real
    else:
        rho = state.tensor
    out = np.empty(alphas.shape)
    for idx in np.ndindex(alphas.shape):
        da = wigner_operator(alphas[idx], cutoff)
        db = wigner_operator(betas[idx], cutoff)
        if isinstance(state, FockAmplitudes):
            val = np.vdot(psi, da @ psi @ db.T) / norm
        else:
            val = np.einsum("ijkl,ki,lj->", rho, da, db, optimize=True)
        if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
            raise LeakageTooLarge(f"Wigner oracle returned imaginary part {val.imag:.2e}")
        out[idx] = val.real
    if np.ndim(pt.alpha) == 0 and np.ndim(pt.beta) == 0:
        return float(out.reshape(-1)[0])
    return out.reshape(np.broadcast(np.asarray(pt.alpha), np.asarray(pt.beta)).shape)


# -- exact rational special functions --------------------------------------


def _as_fraction(v) -> Fraction:
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)  # exact binary value
    if isinstance(v, str):
        return Fraction(v)
    raise DomainError(f"non-rational input {v!r}")


def _as_gauss(v) -> tuple:
    """Exact complex rational as ``(re, im)``."""
    if isinstance(v, tuple):
        return _as_fraction(v[0]), _as_fraction(v[1])
    if isinstance(v, complex):
        return Fraction(v.real), Fraction(v.imag)
    return _as_fraction(v), Fraction(0)


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gpow(x, k):
    out = (Fraction(1), Fraction(0))
    for _ in range(k):
        out = _gmul(out, x)
    return out


def _falling_binom(upper: Fraction, k: int) -> Fraction:
    num = Fraction(1)
    for j in range(k):
        num *= upper - j
    return num / math.factorial(k)


def rational_specfun(kind: str, *args):
    """Exact value of a finite polynomial sum.

    ``jacobi``: ``(m, alpha, beta, x)`` -> ``Fraction``.
    ``laguerre``: ``(n, x)`` -> ``Fraction``.
    ``hermite2``: ``(m, n, eps, eta)`` with complex-rational ``eps``, ``eta``
    (given as ``complex`` with binary-exact parts, or ``(re, im)`` tuples)
    -> ``(re, im)`` pair of ``Fraction``.
    """
    if kind == "jacobi":
        m, alpha, beta, x = args
        alpha, beta, x = _as_fraction(alpha), _as_fraction(beta), _as_fraction(x)
        lo, hi = (x - 1) / 2, (x + 1) / 2
        return sum(
            (
                _falling_binom(m + alpha, k) * _falling_binom(m + beta, m - k) * lo ** (m - k) * hi**k
                for k in range(m + 1)
            ),
            Fraction(0),
        )
    if kind == "laguerre":
        n, x = args
        x = _as_fraction(x)
        return sum((Fraction(math.comb(n, k) * (-1) ** k, math.factorial(k)) * x**k for k in range(n + 1)), Fraction(0))
    if kind == "hermite2":
        m, n, eps, eta = args
        e, h = _as_gauss(eps), _as_gauss(eta)
        re, im = Fraction(0), Fraction(0)
        for k in range(min(m, n) + 1):
            c = Fraction((-1) ** k * math.factorial(m) * math.factorial(n),
                         math.factorial(k) * math.factorial(m - k) * math.factorial(n - k))
            t = _gmul(_gpow(e, m - k), _gpow(h, n - k))
            re += c * t[0]
            im += c * t[1]
        return re, im
    raise DomainError(f"unknown special function kind {kind!r}")
