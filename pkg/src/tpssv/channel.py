"""Decoherence in a thermal channel acting identically on both modes.

Time enters only through ``kappa_t``. Derived channel constants::

    T  = 1 - exp(-2 kappa_t)
    T1 = nbar T / (nbar T + 1)
    T2 = exp(-kappa_t) / (nbar T + 1)
    T3 = (nbar + 1) T / (nbar T + 1)

The evolved Wigner function is available three ways: the closed-form Hermite
double sum (:func:`wf_evolved_point`), the Kraus operator sum applied to a
Fock density matrix (:func:`evolve_density`, then the displaced-parity oracle),
and Gauss-Hermite quadrature of the convolution with two thermal kernels
(:func:`wf_convolution_oracle`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.special import gammaln, roots_hermite
from scipy.stats import nbinom

from .errors import SeriesNotConverged, ValidationError
from .phase import PhasePoint
from .specfun import factorial, hermite2
from .state import FockMatrix, StateSpec, normalization
from .wigner import wf_point

MAX_KRAUS_INDEX = 400


@dataclass(frozen=True)
class ChannelSpec:
    kappa_t: float
    nbar: float = 0.0

    def __post_init__(self):
        kt, nb = float(self.kappa_t), float(self.nbar)
        if not (math.isfinite(kt) and kt >= 0):
            raise ValidationError(f"kappa_t must be finite and >= 0, got {self.kappa_t}")
        if not (math.isfinite(nb) and nb >= 0):
            raise ValidationError(f"nbar must be finite and >= 0, got {self.nbar}")
        object.__setattr__(self, "kappa_t", kt)
        object.__setattr__(self, "nbar", nb)

    @property
    def T(self) -> float:
        return -math.expm1(-2 * self.kappa_t)

    @property
    def T1(self) -> float:
        return self.nbar * self.T / (self.nbar * self.T + 1)

    @property
    def T2(self) -> float:
        return math.exp(-self.kappa_t) / (self.nbar * self.T + 1)

    @property
    def T3(self) -> float:
        return (self.nbar + 1) * self.T / (self.nbar * self.T + 1)

    @property
    def sigma(self) -> float:
        """Thermal kernel variance factor ``(2 nbar + 1) T``."""
        return (2 * self.nbar + 1) * self.T


@dataclass(frozen=True)
class KrausIndex:
    """Loss counts ``i`` (mode a), ``j`` (mode b); gain counts ``r`` (a), ``s`` (b)."""

    i: int
    j: int
    r: int
    s: int

    def __post_init__(self):
        if min(self.i, self.j, self.r, self.s) < 0:
            raise ValidationError("Kraus indices must be nonnegative")


# -- Kraus representation --------------------------------------------------


def _kraus_diagonal(i: int, r: int, ch: ChannelSpec, cutoff: int) -> np.ndarray:
    """Weights ``w[p]`` with ``K_{i,r}|p> = w[p] |p - i + r>`` (zero where undefined).

    ``K_{i,r} = sqrt(T1^r T3^i / (r! i! (nbar T + 1))) a^dag^r T2^{a^dag a} a^i``.
    """
    p = np.arange(cutoff + 1)
    q = p - i
    out = np.zeros(cutoff + 1)
    ok = (q >= 0) & (q + r <= cutoff)
    if not ok.any():
        return out
    T1, T2, T3 = ch.T1, ch.T2, ch.T3
    qq = q[ok].astype(float)
    pp = p[ok].astype(float)
    log_w = (
        -0.5 * math.log(ch.nbar * ch.T + 1)
        - 0.5 * (gammaln(r + 1) + gammaln(i + 1))
        + 0.5 * (gammaln(pp + 1) - gammaln(qq + 1))
        + 0.5 * (gammaln(qq + r + 1) - gammaln(qq + 1))
    )
    mag = np.exp(log_w)
    # T-factors kept out of the log so zero constants (kappa_t = 0, nbar = 0) stay exact
    mag = mag * (T1 ** (0.5 * r) if r else 1.0) * (T3 ** (0.5 * i) if i else 1.0) * T2**qq
    out[ok] = mag
    return out


def kraus_single_mode(i: int, r: int, ch: ChannelSpec, cutoff: int) -> np.ndarray:
    """Single-mode factor ``K_{i,r}`` as a dense ``(cutoff+1) x (cutoff+1)`` matrix."""
    w = _kraus_diagonal(i, r, ch, cutoff)
    mat = np.zeros((cutoff + 1, cutoff + 1))
    p = np.nonzero(w)[0]
    mat[p - i + r, p] = w[p]
    return mat


def kraus_matrix(idx: KrausIndex, ch: ChannelSpec, cutoff: int) -> np.ndarray:
    """Two-mode ``M_{i,j,r,s} = K_{i,r} (x) K_{j,s}``; index beyond the cutoff gives zero."""
    if cutoff < 1:
        raise ValidationError("cutoff must be >= 1")
    return np.kron(kraus_single_mode(idx.i, idx.r, ch, cutoff), kraus_single_mode(idx.j, idx.s, ch, cutoff))


def kraus_weight_bound(i: int, r: int, ch: ChannelSpec, cutoff: int) -> float:
    """Per-mode bound ``T1^r T3^i cutoff^(i+r) / (r! i! (nbar T + 1))`` on ``|K_{i,r}|^2`` entries."""
    if (r and ch.T1 == 0) or (i and ch.T3 == 0):
        return 0.0
    log_b = -math.log(ch.nbar * ch.T + 1) - gammaln(r + 1) - gammaln(i + 1)
    if r:
        log_b += r * (math.log(ch.T1) + math.log(cutoff))
    if i:
        log_b += i * (math.log(ch.T3) + math.log(cutoff))
    return math.exp(log_b)


def kraus_index_set(ch: ChannelSpec, cutoff: int, series_tol: float, max_index: int = MAX_KRAUS_INDEX):
    """Single-mode ``(i, r)`` pairs kept in the operator sum.

    A pair is kept while its weight bound exceeds ``series_tol / 16``; pairs
    with ``i`` or ``r`` above the cutoff act as zero on the truncated space.
    """
    keep = []
    for i in range(cutoff + 1):
        for r in range(cutoff + 1):
            if kraus_weight_bound(i, r, ch, cutoff) > series_tol / 16:
                if max(i, r) > max_index:
                    raise SeriesNotConverged(f"Kraus index {max(i, r)} exceeds hard cap {max_index}")
                keep.append((i, r))
    return keep


def kraus_completeness(ch: ChannelSpec, cutoff: int, series_tol: float = 1e-14) -> np.ndarray:
    """Single-mode ``sum_{i,r} K_{i,r}^dag K_{i,r}`` over the kept index set (diagonal)."""
    total = np.zeros(cutoff + 1)
    for i, r in kraus_index_set(ch, cutoff, series_tol):
        total += _kraus_diagonal(i, r, ch, cutoff) ** 2
    return np.diag(total)


def interior_bound(ch: ChannelSpec, cutoff: int, tol: float = 1e-10) -> int:
    """Largest ``p`` whose image under the channel leaves the box with probability ``< tol``.

    From ``|p>`` the number of photons after loss is ``q <= p`` and the gain
    count is negative binomial with shape ``q + 1`` and ratio ``T1``, so
    ``P(exit) <= P(NB(p + 1, 1 - T1) > cutoff - p)``.
    """
    if ch.T1 == 0:
        return cutoff
    best = -1
    for p in range(cutoff + 1):
        if nbinom.sf(cutoff - p, p + 1, 1 - ch.T1) < tol:
            best = p
        else:
            break
    return best


def _apply_mode(rho4: np.ndarray, pairs, ch: ChannelSpec, cutoff: int, mode: int) -> np.ndarray:
    """Apply one single-mode channel to ``rho4[n_a, n_b, n_a', n_b']``.

    Each ``K_{i,r}`` moves ``|p>`` to ``|p + r - i>``; pairs sharing the shift
    ``d = r - i`` are summed into one weight matrix before shifting.
    """
    if mode == 1:
        rho4 = rho4.transpose(1, 0, 3, 2)
    d1 = cutoff + 1
    by_shift: dict[int, np.ndarray] = {}
    for i, r in pairs:
        w = _kraus_diagonal(i, r, ch, cutoff)
        if not w.any():
            continue
        acc = by_shift.setdefault(r - i, np.zeros((d1, d1)))
        acc += np.outer(w, w)
    out = np.zeros_like(rho4)
    for d, weight in by_shift.items():
        src = slice(max(0, -d), min(d1, d1 - d))
        dst = slice(max(0, d), min(d1, d1 + d))
        out[dst, :, dst, :] += weight[src, src][:, None, :, None] * rho4[src, :, src, :]
    if mode == 1:
        out = out.transpose(1, 0, 3, 2)
    return out


def evolve_density(rho0: FockMatrix, ch: ChannelSpec, series_tol: float = 1e-12) -> FockMatrix:
    """``rho(t) = sum M_{ijrs} rho0 M_{ijrs}^dag`` on the truncated space.

    The returned matrix records the lost trace in ``leakage`` (series
    truncation plus photons pushed past the cutoff).
    """
    if series_tol <= 0:
        raise ValidationError("series_tol must be positive")
    n = rho0.cutoff
    pairs = kraus_index_set(ch, n, series_tol)
    rho4 = np.array(rho0.tensor, dtype=complex)
    rho4 = _apply_mode(rho4, pairs, ch, n, 0)
    rho4 = _apply_mode(rho4, pairs, ch, n, 1)
    data = rho4.reshape(rho0.dim, rho0.dim)
    data = 0.5 * (data + data.conj().T)
    trace = float(np.trace(data).real)
    return FockMatrix(
        n,
        data,
        leakage=rho0.trace - trace,
        info={"kraus_pairs_per_mode": len(pairs), "channel": ch},
    )


def thermal_density(nbar: float, cutoff: int) -> FockMatrix:
    """Two-mode product of thermal states with mean photon number ``nbar``."""
    k = np.arange(cutoff + 1)
    p = (nbar ** k / (nbar + 1) ** (k + 1)) if nbar > 0 else (k == 0).astype(float)
    return FockMatrix(cutoff, np.diag(np.kron(p, p)).astype(complex))


# -- evolved Wigner function in closed form ---------------------------------


@dataclass(frozen=True)
class EvolvedWfCoeffs:
    C: float
    D: float
    E: float
    F: float
    G: complex
    K: complex
    A_bar: complex
    B_bar: complex


def evolved_coeffs(spec: StateSpec, ch: ChannelSpec, pt: PhasePoint) -> EvolvedWfCoeffs:
    """Coefficients of the evolved Hermite sum.

    Written in terms of ``s = 1/C = (2 nbar + 1) T exp(2 kappa_t)`` so that
    ``kappa_t = 0`` (``C = D = inf``) is an ordinary point.
    """
    lam, kt = spec.lam, ch.kappa_t
    s = ch.sigma * math.exp(2 * kt)
    ep, em = math.exp(2 * lam), math.exp(-2 * lam)
    prod = (s + em) * (s + ep)  # D / C^2
    c, sh = math.cosh(lam), math.sinh(lam)
    r = 2j * math.sqrt(math.tanh(lam))
    alpha = np.asarray(pt.alpha)
    beta = np.asarray(pt.beta)
    A = -r * (alpha * c - np.conj(beta) * sh)
    B = -r * (beta * c - np.conj(alpha) * sh)
    A_bar = r * (np.conj(alpha) * c + beta * sh)
    B_bar = r * (np.conj(beta) * c + alpha * sh)
    with np.errstate(divide="ignore"):
        C = math.inf if s == 0 else 1.0 / s
    D = math.inf if s == 0 else prod / s**2
    E = math.exp(4 * kt) * (2 * ch.nbar * ch.T + 1) ** 2 / prod
    F = (1 - s * s) / prod
    G = math.exp(kt) * (s * B_bar + np.conj(B)) / prod
    K = math.exp(kt) * (s * A_bar + np.conj(A)) / prod
    return EvolvedWfCoeffs(C=C, D=D, E=E, F=F, G=G, K=K, A_bar=A_bar, B_bar=B_bar)


def wf_evolved_complex(spec: StateSpec, ch: ChannelSpec, pt: PhasePoint):
    lam, m, n, kt = spec.lam, spec.m, spec.n, ch.kappa_t
    co = evolved_coeffs(spec, ch, pt)
    u = math.exp(-2 * kt)
    d_minus = u * math.exp(-2 * lam) + ch.sigma  # multiplies |alpha - beta*|^2 denominators
    d_plus = u * math.exp(2 * lam) + ch.sigma
    alpha = np.asarray(pt.alpha)
    beta = np.asarray(pt.beta)
    gauss = np.exp(
        -np.abs(alpha - np.conj(beta)) ** 2 / d_minus - np.abs(alpha + np.conj(beta)) ** 2 / d_plus
    )
    # (2 nbar + 1)^2 T^2 D == d_minus * d_plus
    pref = (co.E * math.sinh(2 * lam)) ** (m + n) / (
        normalization(spec) * math.pi**2 * 2 ** (m + n) * d_minus * d_plus
    )
    ratio = -co.F / co.E * math.tanh(lam)
    rootE = math.sqrt(co.E)
    g, k_ = co.G / rootE, co.K / rootE
    mn2 = float(factorial(m) * factorial(n)) ** 2
    total = np.zeros(np.shape(gauss), dtype=complex)
    for l in range(n + 1):
        for k in range(m + 1):
            w = mn2 * ratio ** (l + k) / (
                factorial(l) * factorial(k) * float(factorial(m - k) * factorial(n - l)) ** 2
            )
            h = hermite2(m - k, n - l, g, k_)
            total = total + w * h * np.conj(h)
    return pref * gauss * total


def wf_evolved_point(spec: StateSpec, ch: ChannelSpec, pt: PhasePoint):
    """Evolved Wigner function ``W(alpha, beta, t)`` in closed form."""
    w = wf_evolved_complex(spec, ch, pt)
    resid = np.max(np.abs(np.imag(w))) if np.size(w) else 0.0
    if resid > 1e-10:
        raise ArithmeticError(f"evolved Wigner sum left imaginary residue {resid:.2e}")
    w = np.real(w)
    return float(w) if np.ndim(w) == 0 else w


def evolved_evaluator(ch: ChannelSpec):
    """Adapter with the ``(spec, pt)`` signature used by :func:`tpssv.wigner.wf_grid`."""
    if ch.kappa_t == 0:
        return wf_point
    return partial(_evolved_for_grid, ch)


def _evolved_for_grid(ch, spec, pt):
    return wf_evolved_point(spec, ch, pt)


def wf_asymptotic(ch_nbar: float, pt: PhasePoint):
    """Long-time limit: product of two thermal states with mean ``nbar``."""
    v = 2 * ch_nbar + 1
    a2 = np.abs(np.asarray(pt.alpha)) ** 2
    b2 = np.abs(np.asarray(pt.beta)) ** 2
    w = np.exp(-2 * (a2 + b2) / v) / (math.pi**2 * v**2)
    return float(w) if np.ndim(w) == 0 else w


def wf_evolved_vacuum_case(ch: ChannelSpec, lam: float, pt: PhasePoint):
    """Evolved Gaussian for ``m = n = 0``.

    ``W = exp(-(E/D)(|alpha|^2 + |beta|^2) + (F/D)(alpha beta + c.c.)) / (pi^2 D)`` with
    ``D = (2nbar+1)^2 T^2 (1 + C e^{-2lam})(1 + C e^{2lam})``,
    ``E = 2[(2nbar+1) T + e^{-2 kappa_t} cosh 2lam]`` and ``F = 2 e^{-2 kappa_t} sinh 2lam``.
    """
    if not (math.isfinite(lam) and lam > 0):
        raise ValidationError("lambda must be > 0")
    u = math.exp(-2 * ch.kappa_t)
    sig = ch.sigma
    dd = (u * math.exp(-2 * lam) + sig) * (u * math.exp(2 * lam) + sig)
    ee = 2 * (sig + u * math.cosh(2 * lam))
    ff = 2 * u * math.sinh(2 * lam)
    alpha = np.asarray(pt.alpha)
    beta = np.asarray(pt.beta)
    expo = -ee / dd * (np.abs(alpha) ** 2 + np.abs(beta) ** 2) + ff / dd * 2 * np.real(alpha * beta)
    w = np.exp(expo) / (math.pi**2 * dd)
    return float(w) if np.ndim(w) == 0 else w


def threshold_time(nbar: float) -> float:
    """``kappa t_c = ln((2 nbar + 2) / (2 nbar + 1)) / 2``; beyond it ``W >= 0`` everywhere."""
    if not (math.isfinite(nbar) and nbar >= 0):
        raise ValidationError(f"nbar must be finite and >= 0, got {nbar}")
    return 0.5 * math.log((2 * nbar + 2) / (2 * nbar + 1))


def wf_at_threshold(spec: StateSpec, nbar: float, pt: PhasePoint):
    """Evolved Wigner function at ``kappa t_c``: a Hermite-Gaussian, hence nonnegative.

    ``tanh^{m+n} sech^2 / (4 pi^2 N e^{-4 kt_c}) exp(-e^{2 kt_c}[|a|^2 + |b|^2 - 2 Re(ab) tanh])
    |H_{m,n}(i sqrt(tanh) b* e^{kt_c}, i sqrt(tanh) a* e^{kt_c})|^2``
    """
    lam, m, n = spec.lam, spec.m, spec.n
    kc = threshold_time(nbar)
    th = math.tanh(lam)
    alpha = np.asarray(pt.alpha)
    beta = np.asarray(pt.beta)
    e1 = math.exp(kc)
    pref = th ** (m + n) / math.cosh(lam) ** 2 / (4 * math.pi**2 * normalization(spec) * math.exp(-4 * kc))
    expo = -e1**2 * (np.abs(alpha) ** 2 + np.abs(beta) ** 2 - 2 * np.real(alpha * beta) * th)
    h = hermite2(m, n, 1j * math.sqrt(th) * np.conj(beta) * e1, 1j * math.sqrt(th) * np.conj(alpha) * e1)
    w = pref * np.exp(expo) * np.abs(h) ** 2
    return float(w) if np.ndim(w) == 0 else w


# -- convolution oracle -----------------------------------------------------


def wf_convolution_oracle(spec: StateSpec, ch: ChannelSpec, pt: PhasePoint, quadrature_resolution: int = 24):
    """Evolved ``W`` by Gauss-Hermite quadrature of the thermal convolution.

    ``W(a, b, t) = 4 e^{4kt} int d2z d2e Wth(z) Wth(e) W0(e^{kt}(a - sqrt(T) z), e^{kt}(b - sqrt(T) e))``
    with ``Wth(z) = exp(-2|z|^2/(2nbar+1)) / (pi (2nbar+1))``; each of the
    four real integration variables gets ``quadrature_resolution`` nodes.
    """
    if not 2 <= quadrature_resolution <= 80:
        raise ValidationError("quadrature_resolution must lie in [2, 80]")
    if ch.kappa_t == 0:
        return wf_point(spec, pt)
    x, w = roots_hermite(quadrature_resolution)
    scale = math.sqrt((2 * ch.nbar + 1) / 2)  # z = scale * (u + i v) makes the weight exp(-u^2 - v^2)
    z = (scale * (x[:, None] + 1j * x[None, :])).reshape(-1)
    # d2z Wth(z) -> du dv exp(-u^2 - v^2) / (2 pi)
    wz = (w[:, None] * w[None, :]).reshape(-1) / (2 * math.pi)
    ekt, rt = math.exp(ch.kappa_t), math.sqrt(ch.T)
    alphas = np.atleast_1d(np.asarray(pt.alpha, dtype=complex))
    betas = np.atleast_1d(np.asarray(pt.beta, dtype=complex))
    alphas, betas = np.broadcast_arrays(alphas, betas)
    out = np.empty(alphas.shape)
    for idx in np.ndindex(alphas.shape):
        za = ekt * (alphas[idx] - rt * z)
        zb = ekt * (betas[idx] - rt * z)
        vals = wf_point(spec, PhasePoint(za[:, None], zb[None, :]))
        out[idx] = 4 * math.exp(4 * ch.kappa_t) * float(wz @ vals @ wz)
    if np.ndim(pt.alpha) == 0 and np.ndim(pt.beta) == 0:
        return float(out.reshape(-1)[0])
    return out
