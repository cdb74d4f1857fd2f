"""Wigner function of the state in closed form, plus grid slices.

Conventions: ``alpha = (q1 + i p1)/sqrt2``, ``beta = (q2 + i p2)/sqrt2`` and the
single-mode Wigner operator carries ``1/pi``, so the two-mode vacuum has
``W(0, 0) = 1/pi^2`` and ``W`` integrates to one against ``dq1 dp1 dq2 dp2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import GridTooLarge, ValidationError
from .phase import PhasePoint
from .specfun import factorial, hermite2, laguerre
from .state import StateSpec, normalization

IMAG_TOL = 1e-10
NEGATIVE_THRESHOLD = -1e-12
MAX_GRID_POINTS = 10**6
AXES = ("q1", "p1", "q2", "p2")


@dataclass(frozen=True)
class SqueezedFrame:
    alpha_bar: complex
    beta_bar: complex


@dataclass(frozen=True)
class WfAux:
    A: complex
    B: complex


def squeezed_frame(lam: float, pt: PhasePoint) -> SqueezedFrame:
    """``alpha_bar = alpha cosh - beta* sinh``, ``beta_bar = beta cosh - alpha* sinh``."""
    c, s = math.cosh(lam), math.sinh(lam)
    a = np.asarray(pt.alpha)
    b = np.asarray(pt.beta)
    return SqueezedFrame(a * c - np.conj(b) * s, b * c - np.conj(a) * s)


def wf_aux(lam: float, frame: SqueezedFrame) -> WfAux:
    r = -2j * math.sqrt(math.tanh(lam))
    return WfAux(A=r * frame.alpha_bar, B=r * frame.beta_bar)


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def wf_point_complex(spec: StateSpec, pt: PhasePoint):
    """Closed-form double sum before discarding the (round-off) imaginary part."""
    lam, m, n = spec.lam, spec.m, spec.n
    frame = squeezed_frame(lam, pt)
    aux = wf_aux(lam, frame)
    gauss = np.exp(-2 * np.abs(frame.alpha_bar) ** 2 - 2 * np.abs(frame.beta_bar) ** 2)
    pref = math.sinh(2 * lam) ** (m + n) / (2 ** (m + n) * normalization(spec)) / math.pi**2
    th = math.tanh(lam)
    mn2 = float(factorial(m) * factorial(n)) ** 2
    total = np.zeros(np.shape(gauss), dtype=complex)
    for l in range(m + 1):
        for k in range(n + 1):
            w = mn2 * (-th) ** (l + k) / (
                factorial(l) * factorial(k) * float(factorial(m - l) * factorial(n - k)) ** 2
            )
            h = hermite2(m - l, n - k, aux.B, aux.A)
            total = total + w * h * np.conj(h)
    return pref * gauss * total


def wf_point(spec: StateSpec, pt: PhasePoint):
    """Wigner function ``W(alpha, beta)``; arrays in ``pt`` give an array back.

    A weighted double sum over ``|H_{m-l, n-k}(B, A)|^2`` multiplied by the
    squeezed-vacuum Gaussian in the squeezed frame.
    """
    w = wf_point_complex(spec, pt)
    resid = np.max(np.abs(np.imag(w))) if np.size(w) else 0.0
    if resid > IMAG_TOL:
        raise ArithmeticError(f"Wigner sum left imaginary residue {resid:.2e}")
    return _scalar_or_array(np.real(w))


def wf_special_subtract_b_only(spec: StateSpec, pt: PhasePoint):
    """``m = 0`` case: ``(-1)^n / pi^2 exp(-2|alpha_bar|^2 - 2|beta_bar|^2) L_n(4|alpha_bar|^2)``."""
    if spec.m != 0:
        raise ValidationError("wf_special_subtract_b_only requires m == 0")
    frame = squeezed_frame(spec.lam, pt)
    ab2 = np.abs(frame.alpha_bar) ** 2
    gauss = np.exp(-2 * ab2 - 2 * np.abs(frame.beta_bar) ** 2)
    return _scalar_or_array((-1) ** spec.n / math.pi**2 * gauss * laguerre(spec.n, 4 * ab2))


# -- grids ------------------------------------------------------------------


@dataclass(frozen=True)
class GridRequest:
    """A rectangular 2D slice through the 4D phase space.

    ``x_axis`` and ``y_axis`` name two of ``q1, p1, q2, p2``; the other two are
    held at ``fixed`` (default 0). Defaults reproduce the ``(0, 0, p1, p2)`` slice.
    """

    x_axis: str = "p1"
    y_axis: str = "p2"
    x_range: tuple = (-3.0, 3.0)
    y_range: tuple = (-3.0, 3.0)
    x_steps: int = 61
    y_steps: int = 61
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.x_axis not in AXES or self.y_axis not in AXES or self.x_axis == self.y_axis:
            raise ValidationError(f"slice axes must be two distinct names from {AXES}")
        for name in self.fixed:
            if name not in AXES or name in (self.x_axis, self.y_axis):
                raise ValidationError(f"fixed coordinate {name!r} is not a held axis")
        if self.x_steps < 1 or self.y_steps < 1:
            raise ValidationError("step counts must be positive")

    @classmethod
    def slice(cls, name: str, **kw) -> "GridRequest":
        """``"p1p2"`` is the ``(0, 0, p1, p2)`` slice, ``"q1q2"`` the ``(q1, q2, 0, 0)`` one."""
        if len(name) != 4 or name[:2] not in AXES or name[2:] not in AXES:
            raise ValidationError(f"unknown slice {name!r}")
        return cls(x_axis=name[:2], y_axis=name[2:], **kw)

    @property
    def n_points(self) -> int:
        return self.x_steps * self.y_steps

    def axes(self):
        return (
            np.linspace(*self.x_range, self.x_steps),
            np.linspace(*self.y_range, self.y_steps),
        )

    def points(self) -> PhasePoint:
        xs, ys = self.axes()
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        coords = {name: np.full(X.shape, float(self.fixed.get(name, 0.0))) for name in AXES}
        coords[self.x_axis] = X
        coords[self.y_axis] = Y
        return PhasePoint.from_quadratures(coords["q1"], coords["p1"], coords["q2"], coords["p2"])

    def describe(self) -> dict:
        held = {name: float(self.fixed.get(name, 0.0)) for name in AXES if name not in (self.x_axis, self.y_axis)}
        return {
            "x_axis": self.x_axis,
            "y_axis": self.y_axis,
            "x_range": list(self.x_range),
            "y_range": list(self.y_range),
            "x_steps": self.x_steps,
            "y_steps": self.y_steps,
            "fixed": held,
        }


@dataclass(frozen=True)
class WignerGrid:
    request: GridRequest
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray  # values[i, j] at (x[i], y[j])
    min_value: float
    min_location: PhasePoint
    negative_fraction: float

    def summary(self) -> dict:
        loc = self.min_location
        return {
            "slice": self.request.describe(),
            "min_value": self.min_value,
            "min_location": {k: float(v) for k, v in zip(AXES, loc.quadratures())},
            "negative_fraction": self.negative_fraction,
        }


def wf_grid(
    spec: StateSpec,
    request: GridRequest | None = None,
    evaluator: Callable[[StateSpec, PhasePoint], np.ndarray] | None = None,
) -> WignerGrid:
    """Evaluate the Wigner function on a slice and summarize its negativity.

    ``evaluator`` defaults to :func:`wf_point`; pass e.g. an evolved-state
    evaluator from :mod:`tpssv.channel` to slice a decohered state instead.
    ``negative_fraction`` counts sample points below ``-1e-12``.
    """
    request = request or GridRequest()
    if request.n_points > MAX_GRID_POINTS:
        raise GridTooLarge(f"{request.n_points} points requested, limit {MAX_GRID_POINTS}")
    evaluator = evaluator or wf_point
    pts = request.points()
    values = np.asarray(evaluator(spec, pts), dtype=float).reshape(request.x_steps, request.y_steps)
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    xs, ys = request.axes()
    loc = PhasePoint(pts.alpha[i, j], pts.beta[i, j])
    return WignerGrid(
        request=request,
        x=xs,
        y=ys,
        values=values,
        min_value=float(values[i, j]),
        min_location=loc,
        negative_fraction=float(np.mean(values < NEGATIVE_THRESHOLD)),
    )


def diagonal_profile(grid: WignerGrid, anti: bool = False) -> np.ndarray:
    """Values along the main (or anti-) diagonal of a square grid."""
    v = grid.values
    if v.shape[0] != v.shape[1]:
        raise ValidationError("diagonal profile needs a square grid")
    return np.diag(v[:, ::-1]) if anti else np.diag(v)


def count_extrema(profile: np.ndarray) -> tuple[int, int]:
    """Strict interior local minima and maxima of a 1D profile (heuristic)."""
    p = np.asarray(profile)
    mid = p[1:-1]
    minima = int(np.sum((mid < p[:-2]) & (mid < p[2:])))
    maxima = int(np.sum((mid > p[:-2]) & (mid > p[2:])))
    return minima, maxima


def riemann_integral_4d(spec: StateSpec, half_width: float, steps: int, evaluator=None) -> float:
    """Midpoint-rule integral of ``W`` over the cube ``[-half_width, half_width]^4`` in ``(q1, p1, q2, p2)``."""
    evaluator = evaluator or wf_point
    h = 2 * half_width / steps
    axis = -half_width + h * (np.arange(steps) + 0.5)
    q1, p1 = np.meshgrid(axis, axis, indexing="ij")
    total = 0.0
    for q2 in axis:
        for p2 in axis:
            pts = PhasePoint.from_quadratures(q1, p1, q2, p2)
            total += float(np.sum(evaluator(spec, pts)))
    return total * h**4
