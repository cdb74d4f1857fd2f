"""Photon-subtracted two-mode squeezed vacuum: statistics, Wigner function and decoherence."""

from .channel import ChannelSpec, evolve_density, threshold_time, wf_evolved_point
from .errors import (
    CutoffTooSmall,
    DomainError,
    GridTooLarge,
    LeakageTooLarge,
    SeriesNotConverged,
    TPSSVError,
    ValidationError,
)
from .moments import antibunching, cross_correlation, moments, quadrature_variances
from .phase import PhasePoint
from .state import StateSpec, density_matrix, fock_amplitudes, normalization, pnd
from .wigner import GridRequest, wf_grid, wf_point

__all__ = [
    "ChannelSpec",
    "CutoffTooSmall",
    "DomainError",
    "GridRequest",
    "GridTooLarge",
    "LeakageTooLarge",
    "PhasePoint",
    "SeriesNotConverged",
    "StateSpec",
    "TPSSVError",
    "ValidationError",
    "antibunching",
    "cross_correlation",
    "density_matrix",
    "evolve_density",
    "fock_amplitudes",
    "moments",
    "normalization",
    "pnd",
    "quadrature_variances",
    "threshold_time",
    "wf_evolved_point",
    "wf_grid",
    "wf_point",
]
