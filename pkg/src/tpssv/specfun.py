"""Jacobi, two-variable Hermite and Laguerre polynomials as short finite sums.

All three families are evaluated term by term with Neumaier-compensated
accumulation. Integer coefficients (factorials, binomials) are formed exactly
with Python integers and converted to floating point only at the point of use.
Arguments may be scalars or numpy arrays; the degree parameters must be
integers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Real

import numpy as np

from .errors import DomainError

JACOBI_MAX_DEGREE = 64
HERMITE2_MAX_DEGREE = 32
LAGUERRE_MAX_DEGREE = 64

# exact integers; float(k!) overflows past 170
_FACTORIALS = [math.factorial(k) for k in range(171)]


def factorial(k: int) -> int:
    if k < 0:
        raise DomainError(f"factorial of negative integer {k}")
    if k < len(_FACTORIALS):
        return _FACTORIALS[k]
    return math.factorial(k)


def gbinom(upper, k: int):
    """Binomial coefficient ``C(upper, k)`` by the falling-factorial product.

    ``upper`` may be any real number, including negative integers, in which
    case ``C(-a, k) = (-1)**k C(a + k - 1, k)``. Integer (or integer-valued)
    ``upper`` gives an exact ``int``; other values give a ``float``.
    """
    if k < 0:
        return 0
    if isinstance(upper, Integral) or (isinstance(upper, Real) and float(upper).is_integer()):
        u = int(upper)
        if u >= 0:
            return math.comb(u, k)
        num = 1
        for j in range(k):
            num *= u - j
        return num // factorial(k)
    if isinstance(upper, Fraction):
        num = Fraction(1)
        for j in range(k):
            num *= upper - j
        return num / factorial(k)
    num = 1.0
    for j in range(k):
        num *= float(upper) - j
    return num / factorial(k)


class CompensatedSum:
    """Neumaier running sum; elementwise on arrays, real and imaginary parts kept apart."""

    def __init__(self, start=0.0):
        self.total = start
        self.comp = 0.0 * start

    def add(self, term):
        t = self.total + term
        err = _neumaier_err(np.real(self.total), np.real(term), np.real(t))
        if np.iscomplexobj(t):
            err = err + 1j * _neumaier_err(np.imag(self.total), np.imag(term), np.imag(t))
        self.comp = self.comp + err
        self.total = t

    @property
    def value(self):
        return self.total + self.comp


def _neumaier_err(s, x, t):
    return np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)


def compensated_sum(terms, start=0.0):
    acc = CompensatedSum(start)
    for term in terms:
        acc.add(term)
    return acc.value


def _check_degree(name: str, value: int, limit: int) -> None:
    if not isinstance(value, Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < 0 or value > limit:
        raise DomainError(f"{name}={value} outside documented range [0, {limit}]")


def jacobi_p(degree: int, alpha, beta, x):
    r"""Jacobi polynomial :math:`P_m^{(\alpha,\beta)}(x)`.

    Evaluated as

    .. math::

        \sum_{k=0}^{m} \binom{m+\alpha}{k}\binom{m+\beta}{m-k}
        \left(\frac{x-1}{2}\right)^{m-k}\left(\frac{x+1}{2}\right)^{k},

    which is the usual hypergeometric finite sum multiplied through by
    :math:`((x-1)/2)^m` so that ``x = 1`` is not a removable singularity.
    Binomials with a negative integer upper index use the falling-factorial
    definition; this is what gives ``P_{m+1}^{(n-m-1, 0)}`` its meaning when
    ``n < m + 1``.

    Accuracy is near machine precision whenever ``degree + alpha >= 0``,
    which covers every moment of the state. Below that the terms alternate
    and cancel, and a few digits can be lost for ``x`` far above 1.

    Parameters
    ----------
    degree : int
        Polynomial degree ``m``, ``0 <= m <= 64``.
    alpha, beta : int or float
        Jacobi parameters. Any real value is accepted.
    x : float or ndarray
        Evaluation point(s).
    """
    _check_degree("degree", degree, JACOBI_MAX_DEGREE)
    x = np.asarray(x, dtype=float)
    if degree == 0:
        out = np.ones_like(x)
        return float(out) if out.ndim == 0 else out
    lo = (x - 1.0) / 2.0
    hi = (x + 1.0) / 2.0
    terms = []
    for k in range(degree + 1):
        c = gbinom(degree + alpha, k) * gbinom(degree + beta, degree - k)
        if c == 0:
            continue
        terms.append(float(c) * lo ** (degree - k) * hi ** k)
    out = compensated_sum(terms, np.zeros_like(x))
    return float(out) if np.ndim(out) == 0 else out


def legendre_recurrence(degree: int, x):
    """Legendre polynomial by the Bonnet three-term recurrence (reference path)."""
    x = np.asarray(x, dtype=float)
    p_prev, p = np.ones_like(x), x.copy()
    if degree == 0:
        return p_prev
    for k in range(1, degree):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p


def hermite2_coefficient(m: int, n: int, k: int) -> int:
    """Exact integer ``(-1)^k m! n! / (k! (m-k)! (n-k)!)``."""
    c = factorial(m) * factorial(n) // (factorial(k) * factorial(m - k) * factorial(n - k))
    return -c if k % 2 else c


def hermite2(m: int, n: int, eps, eta):
    r"""Two-variable Hermite polynomial :math:`H_{m,n}(\epsilon, \eta)`.

    .. math::

        H_{m,n}(\epsilon,\eta) = \sum_{k=0}^{\min(m,n)}
        \frac{(-1)^k m!\,n!}{k!\,(m-k)!\,(n-k)!}\,\epsilon^{m-k}\eta^{n-k}

    It is the ``t^m t'^n / (m! n!)`` coefficient of ``exp(-t t' + eps t + eta t')``.
    """
    _check_degree("m", m, HERMITE2_MAX_DEGREE)
    _check_degree("n", n, HERMITE2_MAX_DEGREE)
    eps = np.asarray(eps, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    zero = np.zeros(np.broadcast(eps, eta).shape, dtype=complex)
    terms = (
        float(hermite2_coefficient(m, n, k)) * eps ** (m - k) * eta ** (n - k)
        for k in range(min(m, n) + 1)
    )
    out = compensated_sum(terms, zero)
    return complex(out) if np.ndim(out) == 0 else out


def laguerre(n: int, x):
    """Laguerre polynomial ``L_n(x) = sum_k C(n, k) (-x)^k / k!``."""
    _check_degree("n", n, LAGUERRE_MAX_DEGREE)
    x = np.asarray(x, dtype=float)
    terms = (
        float(Fraction(math.comb(n, k) * (-1) ** k, factorial(k))) * x ** k
        for k in range(n + 1)
    )
    out = compensated_sum(terms, np.zeros_like(x))
    return float(out) if np.ndim(out) == 0 else out
