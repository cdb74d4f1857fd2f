"""Closed-form photon statistics of the normalized state.

Every quantity is a ratio of Jacobi polynomials at ``tau = cosh 2 lam``,
because ``a^p b^q`` applied to the state only shifts ``(m, n)`` and the
normalization is known for every ``(m, n)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .specfun import jacobi_p
from .state import StateSpec


@dataclass(frozen=True)
class MomentSet:
    mean_na: float
    mean_nb: float
    cross_nanb: float
    mean_ab: float
    tau: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class QuadratureReport:
    var_Q: float
    var_P: float

    @property
    def uncertainty_product(self) -> float:
        return self.var_Q * self.var_P

    @property
    def p_squeezed(self) -> bool:
        # strict, no tolerance band
        return self.var_P < 0.5

    def as_dict(self) -> dict:
        return {
            "var_Q": self.var_Q,
            "var_P": self.var_P,
            "uncertainty_product": self.uncertainty_product,
            "p_squeezed": self.p_squeezed,
        }


def _p(spec: StateSpec, degree: int, alpha: int, beta: int = 0) -> float:
    return jacobi_p(degree, alpha, beta, spec.tau)


def mean_na(spec: StateSpec) -> float:
    """``<a^dag a> = (m+1) P_{m+1}^{(n-m-1,0)} / P_m^{(n-m,0)}``."""
    m, n = spec.m, spec.n
    return (m + 1) * _p(spec, m + 1, n - m - 1) / _p(spec, m, n - m)


def mean_nb(spec: StateSpec) -> float:
    """``<b^dag b> = (n+1) sinh^2 lam P_m^{(n-m+1,0)} / P_m^{(n-m,0)}``."""
    m, n = spec.m, spec.n
    return (n + 1) * math.sinh(spec.lam) ** 2 * _p(spec, m, n - m + 1) / _p(spec, m, n - m)


def mean_nanb(spec: StateSpec) -> float:
    """``<a^dag b^dag a b>``."""
    m, n = spec.m, spec.n
    return (m + 1) * (n + 1) * math.sinh(spec.lam) ** 2 * _p(spec, m + 1, n - m) / _p(spec, m, n - m)


def mean_ab(spec: StateSpec) -> float:
    """``<a b> = <a^dag b^dag>``, real for real ``lam``."""
    m, n = spec.m, spec.n
    return 0.5 * (n + 1) * _p(spec, m, n - m, 1) / _p(spec, m, n - m) * math.sinh(2 * spec.lam)


def mean_a2a2(spec: StateSpec) -> float:
    """``<a^dag^2 a^2> = (m+1)(m+2) P_{m+2}^{(n-m-2,0)} / P_m^{(n-m,0)}``."""
    m, n = spec.m, spec.n
    return (m + 1) * (m + 2) * _p(spec, m + 2, n - m - 2) / _p(spec, m, n - m)


def mean_b2b2(spec: StateSpec) -> float:
    """``<b^dag^2 b^2> = (n+1)(n+2) sinh^4 lam P_m^{(n-m+2,0)} / P_m^{(n-m,0)}``."""
    m, n = spec.m, spec.n
    return (n + 1) * (n + 2) * math.sinh(spec.lam) ** 4 * _p(spec, m, n - m + 2) / _p(spec, m, n - m)


def moments(spec: StateSpec) -> MomentSet:
    return MomentSet(
        mean_na=mean_na(spec),
        mean_nb=mean_nb(spec),
        cross_nanb=mean_nanb(spec),
        mean_ab=mean_ab(spec),
        tau=spec.tau,
    )


def quadrature_variances(spec: StateSpec) -> QuadratureReport:
    """Variances of ``Q = (Q1 + Q2)/sqrt2`` and ``P = (P1 + P2)/sqrt2``.

    First moments vanish, so ``(dQ)^2 = (<a^dag a> + <b^dag b> + 2<ab> + 1)/2``
    and ``(dP)^2`` is the same with ``-2<ab>``.
    """
    mom = moments(spec)
    base = mom.mean_na + mom.mean_nb + 1.0
    return QuadratureReport(
        var_Q=0.5 * (base + 2.0 * mom.mean_ab),
        var_P=0.5 * (base - 2.0 * mom.mean_ab),
    )


def var_p_one_one(lam):
    """Momentum variance of the ``m = n = 1`` state in elementary functions."""
    e2 = np.exp(2 * np.asarray(lam, dtype=float))
    ei2 = 1.0 / e2
    return 0.5 * (1 - e2 - 3 * ei2 * (1 - ei2)) / (e2 + ei2) + 0.5


def var_q_one_one(lam):
    """Position variance of the ``m = n = 1`` state in elementary functions."""
    e2 = np.exp(2 * np.asarray(lam, dtype=float))
    return 0.5 * e2 * (1 + (2 * e2 - 2) / (e2 + 1.0 / e2))


def cross_correlation(spec: StateSpec) -> float:
    """``g12 = <a^dag b^dag a b> / (<a^dag a><b^dag b>)`` as a product of Jacobi ratios."""
    m, n = spec.m, spec.n
    return (
        _p(spec, m + 1, n - m) / _p(spec, m + 1, n - m - 1)
        * _p(spec, m, n - m) / _p(spec, m, n - m + 1)
    )


def antibunching(spec: StateSpec) -> float:
    """``R_ab = (<a^dag^2 a^2> + <b^dag^2 b^2>) / (2 <a^dag a b^dag b>) - 1``; negative means antibunched."""
    m, n, lam = spec.m, spec.n, spec.lam
    num = (m + 1) * (m + 2) * _p(spec, m + 2, n - m - 2) + (n + 1) * (n + 2) * math.sinh(lam) ** 4 * _p(
        spec, m, n - m + 2
    )
    den = 2 * (m + 1) * (n + 1) * math.sinh(lam) ** 2 * _p(spec, m + 1, n - m)
    return num / den - 1.0


def antibunching_zero_two(lam):
    """``R_ab`` for ``m = 0, n = 2``: ``(5 - 3 tau) / (6 (1 + 2 tau)) csch^2 lam``."""
    lam = np.asarray(lam, dtype=float)
    tau = np.cosh(2 * lam)
    return (5 - 3 * tau) / (6 * (1 + 2 * tau)) / np.sinh(lam) ** 2


def sweep_row(spec: StateSpec) -> dict:
    """One row of the moments sweep export."""
    q = quadrature_variances(spec)
    mom = moments(spec)
    return {
        "lambda": spec.lam,
        "m": spec.m,
        "n": spec.n,
        "mean_na": mom.mean_na,
        "mean_nb": mom.mean_nb,
        "var_Q": q.var_Q,
        "var_P": q.var_P,
        "g12": cross_correlation(spec),
        "R_ab": antibunching(spec),
    }
