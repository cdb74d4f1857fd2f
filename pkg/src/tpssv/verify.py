"""Acceptance checks: closed forms against brute-force Fock-space oracles.

Each check returns a :class:`CheckResult` carrying its tolerance and the
worst deviation it observed. ``run_all`` drives them for the CLI ``verify``
command and for the acceptance tests.
"""

from __future__ import annotations

import contextlib
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable
from unittest import mock

import numpy as np

from . import state as state_mod
from .channel import (
    ChannelSpec,
    evolve_density,
    evolved_evaluator,
    interior_bound,
    kraus_completeness,
    threshold_time,
    wf_asymptotic,
    wf_at_threshold,
    wf_convolution_oracle,
    wf_evolved_point,
    wf_evolved_vacuum_case,
)
from .moments import (
    antibunching,
    cross_correlation,
    mean_a2a2,
    mean_ab,
    mean_b2b2,
    mean_na,
    mean_nanb,
    mean_nb,
    quadrature_variances,
)
from .oracle import LadderMatrices, expectation, wigner_oracle
from .phase import PhasePoint
from .specfun import factorial, hermite2
from .state import StateSpec, default_cutoff, density_matrix, fock_amplitudes, pnd_table, tail_fraction
from .wigner import (
    GridRequest,
    count_extrema,
    diagonal_profile,
    wf_grid,
    wf_point,
    wf_special_subtract_b_only,
)

LAMBDAS = (0.3, 0.8, 1.5)
SEED = 20240607


@dataclass
class CheckResult:
    criterion: int
    name: str
    tolerance: float
    deviation: float
    passed: bool
    seconds: float = 0.0
    warning_only: bool = False
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else ("WARN" if self.warning_only else "FAIL")
        return (
            f"[{status}] criterion {self.criterion:>2} {self.name}: "
            f"deviation {self.deviation:.3e} (tol {self.tolerance:.1e}), {self.seconds:.2f} s"
        )

    def as_dict(self) -> dict:
        return asdict(self)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _random_points(rng, count: int, width: float = 1.5) -> PhasePoint:
    q = rng.uniform(-width, width, (count, 4))
    return PhasePoint.from_quadratures(*q.T)


def _timed(fn: Callable[..., CheckResult]):
    def run(*args, **kw):
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# -- 1. normalization -----------------------------------------------------


@_timed
def check_normalization(max_mn: int = 5, cutoff: int = 80, tol: float = 1e-9, literal: bool = False) -> CheckResult:
    """Closed-form normalization against the Fock sum of the amplitudes.

    By default the requested cutoff is used whenever the truncated tail is
    negligible for the case, and the adaptive cutoff otherwise (the amplitude
    builder refuses a cutoff that drops mass). ``literal=True`` sums the
    amplitudes inside the fixed cutoff box regardless, which measures the
    truncation error itself.
    """
    worst = 0.0
    fixed_worst = 0.0
    fallback = []
    for lam in LAMBDAS:
        for m in range(max_mn + 1):
            for n in range(max_mn + 1):
                spec = StateSpec(lam, m, n)
                use = cutoff
                if literal:
                    amps = fock_amplitudes(spec, cutoff, tol=1.0)
                else:
                    if tail_fraction(spec, cutoff) > 1e-16:
                        boxed = fock_amplitudes(spec, cutoff, tol=1.0)
                        fixed_worst = max(fixed_worst, _rel(boxed.norm_sq, state_mod.normalization(spec)))
                        use = default_cutoff(spec, 1e-16)
                        fallback.append((lam, m, n, use))
                    amps = fock_amplitudes(spec, use, tol=1e-16)
                dev = _rel(amps.norm_sq, state_mod.normalization(spec))
                worst = max(worst, dev)
                if use == cutoff:
                    fixed_worst = max(fixed_worst, dev)
    name = "normalization vs Fock sum" + (f" (fixed cutoff {cutoff})" if literal else "")
    return CheckResult(
        1,
        name,
        tol,
        worst,
        worst < tol,
        detail={
            "cutoff": cutoff,
            "literal": literal,
            "fixed_cutoff_deviation": fixed_worst if not literal else worst,
            "adaptive_cutoff_cases": fallback,
        },
    )


# -- 2. moments -----------------------------------------------------------


@_timed
def check_moments(max_mn: int = 4, tol: float = 1e-8) -> CheckResult:
    """Closed-form moments against ``<psi|O|psi>`` with explicit ladder matrices."""
    closed = {
        "mean_na": mean_na,
        "mean_nb": mean_nb,
        "mean_nanb": mean_nanb,
        "mean_ab": mean_ab,
        "mean_a2a2": mean_a2a2,
        "mean_b2b2": mean_b2b2,
    }
    worst = {k: 0.0 for k in closed}
    for lam in LAMBDAS:
        for m in range(max_mn + 1):
            for n in range(max_mn + 1):
                spec = StateSpec(lam, m, n)
                cutoff = default_cutoff(spec, 1e-16)
                amps = fock_amplitudes(spec, cutoff, tol=1e-16)
                L = LadderMatrices(cutoff)
                a, b, ad, bd = L.a, L.b, L.adag, L.bdag
                ops = {
                    "mean_na": ad * a,
                    "mean_nb": bd * b,
                    "mean_nanb": ad * bd * a * b,
                    "mean_ab": a * b,
                    "mean_a2a2": ad * ad * a * a,
                    "mean_b2b2": bd * bd * b * b,
                }
                for key, fn in closed.items():
                    val = expectation(amps, ops[key])
                    worst[key] = max(worst[key], _rel(val, fn(spec)))
    dev = max(worst.values())
    return CheckResult(2, "moments vs ladder-matrix oracle", tol, dev, dev < tol, detail=worst)


# -- 3. closed specials ---------------------------------------------------


def _bisect_sign_change(fn, lo: float, hi: float, iters: int = 80) -> float:
    flo = fn(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@_timed
def check_specials(tol: float = 1e-12) -> CheckResult:
    """Textbook special cases of variances and antibunching."""
    devs = []
    for lam in np.linspace(0.05, 2.0, 40):
        q00 = quadrature_variances(StateSpec(lam))
        devs.append(_rel(q00.var_Q, math.exp(2 * lam) / 2))
        devs.append(_rel(q00.var_P, math.exp(-2 * lam) / 2))
        devs.append(abs(q00.uncertainty_product - 0.25))
        devs.append(_rel(quadrature_variances(StateSpec(lam, 0, 1)).var_P, math.exp(-2 * lam)))
        devs.append(abs(antibunching(StateSpec(lam)) + 1 / math.cosh(2 * lam)))
    dev = max(devs)
    onset = _bisect_sign_change(lambda l: quadrature_variances(StateSpec(l, 0, 1)).var_P - 0.5, 0.1, 1.0)
    onset_dev = abs(onset - 0.5 * math.log(2))
    root = _bisect_sign_change(lambda l: antibunching(StateSpec(l, 0, 2)), 0.5, 0.6)
    bracketed = antibunching(StateSpec(0.5, 0, 2)) * antibunching(StateSpec(0.6, 0, 2)) < 0
    passed = dev < tol and onset_dev < tol and bracketed
    return CheckResult(
        3,
        "closed-form special cases",
        tol,
        max(dev, onset_dev),
        passed,
        detail={"squeezing_onset": onset, "R_ab_02_root": root, "root_bracketed_0.5_0.6": bracketed},
    )


# -- 4. / 5. Wigner -------------------------------------------------------


@_timed
def check_wigner_oracle(max_mn: int = 3, lams=(0.3, 0.8), points: int = 25, cutoff: int = 60, tol: float = 1e-8) -> CheckResult:
    """Closed-form Wigner function against the displaced-parity trace."""
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for lam in lams:
        for m in range(max_mn + 1):
            for n in range(max_mn + 1):
                spec = StateSpec(lam, m, n)
                amps = fock_amplitudes(spec, cutoff)
                pt = _random_points(rng, points)
                worst = max(worst, float(np.max(np.abs(wf_point(spec, pt) - wigner_oracle(amps, pt)))))
    return CheckResult(4, "Wigner closed form vs displaced parity", tol, worst, worst < tol, detail={"cutoff": cutoff})


@_timed
def check_wigner_b_only(max_n: int = 5, tol: float = 1e-12) -> CheckResult:
    """``m = 0`` Laguerre form and the ``(0, 1)`` origin value."""
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for lam in LAMBDAS:
        for n in range(max_n + 1):
            spec = StateSpec(lam, 0, n)
            pt = _random_points(rng, 50, width=2.5)
            worst = max(worst, float(np.max(np.abs(wf_point(spec, pt) - wf_special_subtract_b_only(spec, pt)))))
    origin = max(abs(wf_point(StateSpec(lam, 0, 1), PhasePoint.origin()) + 1 / math.pi**2) for lam in np.linspace(0.05, 2, 20))
    dev = max(worst, origin)
    return CheckResult(5, "m=0 Laguerre form and origin value", tol, dev, dev < tol, detail={"origin_deviation": origin})


# -- 6. / 7. / 8. channel -------------------------------------------------


@_timed
def check_channel_triangle(points: int = 10, cutoff: int = 30, tol_ab: float = 1e-6, tol_ac: float = 1e-4) -> CheckResult:
    """Evolved closed form vs Kraus-evolved oracle vs Gaussian convolution."""
    spec = StateSpec(0.3, 0, 1)
    ch = ChannelSpec(0.1, 1.0)
    pt = _random_points(np.random.default_rng(SEED + 2), points)
    closed = wf_evolved_point(spec, ch, pt)
    rho = evolve_density(density_matrix(spec, cutoff), ch)
    kraus = wigner_oracle(rho, pt)
    conv = wf_convolution_oracle(spec, ch, pt)
    d_ab = float(np.max(np.abs(closed - kraus)))
    d_ac = float(np.max(np.abs(closed - conv)))
    return CheckResult(
        6,
        "channel triangle",
        tol_ab,
        d_ab,
        d_ab < tol_ab and d_ac < tol_ac,
        detail={"closed_vs_kraus": d_ab, "closed_vs_convolution": d_ac, "tol_convolution": tol_ac, "leakage": rho.leakage},
    )


@_timed
def check_limits(tol_short: float = 1e-9, tol_long: float = 1e-9, tol_vac: float = 1e-12) -> CheckResult:
    """Identity channel, long-time thermal limit and the vacuum special case."""
    rng = np.random.default_rng(SEED + 3)
    pt = _random_points(rng, 50)
    short = 0.0
    for spec in (StateSpec(0.3, 0, 1), StateSpec(0.8, 2, 3), StateSpec(0.5, 1, 1)):
        short = max(short, float(np.max(np.abs(wf_evolved_point(spec, ChannelSpec(0.0, 1.0), pt) - wf_point(spec, pt)))))
    spec = StateSpec(0.3, 0, 1)
    long = float(np.max(np.abs(wf_evolved_point(spec, ChannelSpec(8.0, 1.0), pt) - wf_asymptotic(1.0, pt))))
    vac = 0.0
    for kt in (0.05, 0.3, 1.0, 3.0):
        for nbar in (0.0, 0.7, 2.0):
            ch = ChannelSpec(kt, nbar)
            vac = max(vac, float(np.max(np.abs(wf_evolved_point(StateSpec(0.6), ch, pt) - wf_evolved_vacuum_case(ch, 0.6, pt)))))
    return CheckResult(
        7,
        "channel limits",
        tol_vac,
        vac,
        short < tol_short and long < tol_long and vac < tol_vac,
        detail={"kappa_t_0": short, "kappa_t_8": long, "vacuum_case": vac, "tol_kappa_t_0": tol_short, "tol_kappa_t_8": tol_long},
    )


@_timed
def check_threshold(tol: float = 1e-10) -> CheckResult:
    """Negativity before the threshold time, none after, and the threshold formula."""
    spec = StateSpec(0.3, 0, 1)
    nbar = 1.0
    kt_dev = abs(threshold_time(nbar) - 0.5 * math.log(4 / 3))
    req = GridRequest.slice("q1q2", x_range=(-3.0, 3.0), y_range=(-3.0, 3.0), x_steps=61, y_steps=61)
    mins = {kt: wf_grid(spec, req, evolved_evaluator(ChannelSpec(kt, nbar))).min_value for kt in (0.05, 0.15, 0.2)}
    kc = threshold_time(nbar)
    pts = req.points()
    at_thr = np.asarray(wf_at_threshold(spec, nbar, pts))
    thr_dev = float(np.max(np.abs(at_thr - wf_evolved_point(spec, ChannelSpec(kc, nbar), pts))))
    passed = (
        kt_dev < 1e-15
        and mins[0.05] < -1e-4
        and mins[0.15] >= -1e-10
        and mins[0.2] >= -1e-10
        and float(at_thr.min()) >= 0.0
        and thr_dev < tol
    )
    return CheckResult(
        8,
        "threshold behavior",
        tol,
        thr_dev,
        passed,
        detail={"kt_c": kc, "grid_min": {str(k): v for k, v in mins.items()}, "threshold_grid_min": float(at_thr.min())},
    )


@_timed
def check_kraus(cutoff: int = 150, evolve_cutoff: int = 40, tol_complete: float = 1e-8, tol_trace: float = 1e-6) -> CheckResult:
    """Completeness on the interior block and trace preservation of an evolved state."""
    complete = 0.0
    trace = 0.0
    bounds = {}
    rho0 = density_matrix(StateSpec(0.3, 0, 1), evolve_cutoff)
    for kt in (0.05, 0.5):
        for nbar in (0.0, 1.0, 2.0):
            ch = ChannelSpec(kt, nbar)
            diag = np.diag(kraus_completeness(ch, cutoff))
            ib = interior_bound(ch, cutoff)
            bounds[f"{kt},{nbar}"] = ib
            # both modes share the diagonal, so the two-mode sum is the outer product
            block = np.outer(diag[: ib + 1], diag[: ib + 1])
            complete = max(complete, float(np.max(np.abs(block - 1.0))))
            rho = evolve_density(rho0, ch)
            trace = max(trace, abs(rho.trace - 1.0))
    return CheckResult(
        9,
        "Kraus completeness and trace",
        tol_complete,
        complete,
        complete < tol_complete and trace < tol_trace,
        detail={"trace_deviation": trace, "tol_trace": tol_trace, "interior_bound": bounds},
    )


# -- 10. property suites ----------------------------------------------------


def generating_function_coefficient(m: int, n: int, eps: complex, eta: complex, radius: float = 1.0, samples: int = 32) -> complex:
    """``m! n!`` times the ``t^m t'^n`` Taylor coefficient of ``exp(-t t' + eps t + eta t')``.

    Mixed derivative at the origin from equispaced samples on a circle in
    each variable (trapezoid rule on the Cauchy integral, aliasing error
    falls like ``radius^samples``).
    """
    theta = 2 * np.pi * np.arange(samples) / samples
    t = radius * np.exp(1j * theta)
    T, U = np.meshgrid(t, t, indexing="ij")
    f = np.exp(-T * U + eps * T + eta * U)
    coeffs = np.fft.fft2(f) / samples**2
    return complex(coeffs[m, n] / radius ** (m + n) * factorial(m) * factorial(n))


def _central_derivative(fn, x: complex, h: float = 1e-2) -> complex:
    # five-point stencil, O(h^4)
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


@_timed
def check_properties(tol_fd: float = 1e-6) -> CheckResult:
    rng = np.random.default_rng(SEED + 4)
    gen = 0.0
    for m in range(5):
        for n in range(5):
            eps, eta = rng.normal(size=2) + 1j * rng.normal(size=2)
            ref = hermite2(m, n, eps, eta)
            gen = max(gen, abs(generating_function_coefficient(m, n, eps, eta) - ref) / max(1.0, abs(ref)))
    der = 0.0
    for m in range(1, 6):
        for n in range(6):
            eps, eta = rng.normal(size=2) + 1j * rng.normal(size=2)
            fd = _central_derivative(lambda e: hermite2(m, n, e, eta), eps)
            ref = m * hermite2(m - 1, n, eps, eta)
            der = max(der, abs(fd - ref) / max(1.0, abs(ref)))

    pnd_dev = 0.0
    support_ok = True
    for lam in (0.3, 1.0):
        for m, n in ((0, 0), (2, 5), (3, 1), (4, 4)):
            spec = StateSpec(lam, m, n)
            cutoff = default_cutoff(spec, 1e-16)
            table = pnd_table(spec, cutoff)
            na, nb = np.nonzero(table)
            support_ok = support_ok and bool(np.all(m + na == n + nb))
            pnd_dev = max(pnd_dev, abs(table.sum() - 1.0))

    swap = max(
        _rel(state_mod.normalization(StateSpec(lam, m, n)), state_mod.normalization(StateSpec(lam, n, m)))
        for lam in LAMBDAS
        for m in range(6)
        for n in range(6)
    )

    lam_grid = np.linspace(0.05, 2.0, 60)
    g12_min = min(cross_correlation(StateSpec(l, m, n)) for m, n in ((1, 2), (3, 4), (2, 4), (6, 8), (3, 6), (7, 10)) for l in lam_grid)
    varp_max = max(quadrature_variances(StateSpec(l, k, k)).var_P for k in (1, 2, 8) for l in lam_grid)

    passed = (
        gen < tol_fd
        and der < tol_fd
        and support_ok
        and pnd_dev < 1e-10
        and swap < 1e-12
        and g12_min > 1.0
        and varp_max < 0.5
    )
    return CheckResult(
        10,
        "property suites",
        tol_fd,
        max(gen, der),
        passed,
        detail={
            "generating_function": gen,
            "derivative_identity": der,
            "pnd_support": support_ok,
            "pnd_sum": pnd_dev,
            "swap_symmetry": swap,
            "g12_min": g12_min,
            "var_P_max": varp_max,
        },
    )


# -- 11. figure structure ---------------------------------------------------


@_timed
def check_figure_structure(steps: int = 201) -> CheckResult:
    """``(1, 3)`` on the ``(0, 0, p1, p2)`` slice: valleys and peaks along the anti-diagonal."""
    grid = wf_grid(StateSpec(0.5, 1, 3), GridRequest.slice("p1p2", x_steps=steps, y_steps=steps))
    minima, maxima = count_extrema(diagonal_profile(grid, anti=True))
    main = count_extrema(diagonal_profile(grid))
    return CheckResult(
        11,
        "figure structure (heuristic)",
        0.0,
        0.0,
        minima >= 2 and maxima >= 3,
        warning_only=True,
        detail={"anti_diagonal": [minima, maxima], "main_diagonal": list(main)},
    )


# -- driver -------------------------------------------------------------------


@contextlib.contextmanager
def normalization_fault(scale: float = 1.0 + 1e-6):
    """Perturb the closed-form normalization so the suite can prove it notices."""
    original = state_mod.normalization
    with mock.patch.object(state_mod, "normalization", lambda spec: original(spec) * scale):
        yield


def run_all(quick: bool = False, inject_fault: bool = False) -> list[CheckResult]:
    """Run every criterion; ``quick`` restricts state sweeps to ``m, n <= 2``."""
    mn = 2 if quick else None
    checks = [
        lambda: check_normalization(max_mn=mn or 5),
        lambda: check_moments(max_mn=mn or 4),
        check_specials,
        lambda: check_wigner_oracle(max_mn=mn or 3),
        lambda: check_wigner_b_only(max_n=mn or 5),
        check_channel_triangle,
        check_limits,
        check_threshold,
        (lambda: check_kraus(cutoff=80)) if quick else check_kraus,
        check_properties,
        check_figure_structure,
    ]
    ctx = normalization_fault() if inject_fault else contextlib.nullcontext()
    with ctx:
        return [c() for c in checks]


def suite_passed(results) -> bool:
    return all(r.passed or r.warning_only for r in results)
