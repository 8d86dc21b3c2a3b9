"""Arrival-time statistics from the modulus of the probability current.

The detector at X < 0 is purely kinematic: the arrival distribution is
``|j(X, t)|`` normalized over the time window, and the mean and spread are its
first two moments.  There is no absorption or back-action.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import EnsembleSpec
from .errors import DomainError, NumericalGuardError
from .hydrodynamics import current
from .quadrature import quad_integrate
from .regime import Regime

__all__ = ["ArrivalStatistics", "arrival_distribution", "arrival_sweep"]


@dataclass(frozen=True)
class ArrivalStatistics:
    """Normalized arrival-time distribution at one detector position.

    ``tail_fraction`` is |j| at the end of the window relative to its peak: a
    diagnostic for how much of the slowly decaying late-time current the
    window truncates.
    """

    detector_x: float
    t_grid: np.ndarray
    pdf: np.ndarray
    mean_t: float
    sd_t: float
    tail_fraction: float


def arrival_distribution(
    spec: EnsembleSpec, regime: Regime, detector_x: float, t_grid
) -> ArrivalStatistics:
    """Arrival-time pdf |j(X, t)| / integral |j|, with mean and spread."""
    if not detector_x < 0.0:
        raise DomainError(f"detector must sit at x < 0, got {detector_x}")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 3:
        raise DomainError("t_grid must be a 1-D grid with at least 3 points")
    if t[0] < 0.0:
        raise DomainError("t_grid must start at t >= 0")
    flux_mod = np.abs(current(spec, regime, detector_x, t))
    norm = float(quad_integrate(t, flux_mod))
    if norm < 1e-12:
        raise NumericalGuardError(
            f"current never reaches detector at x={detector_x} (integral {norm:.3e})"
        )
    pdf = flux_mod / norm
    mean_t = float(quad_integrate(t, t * pdf))
    var_t = float(quad_integrate(t, (t - mean_t) ** 2 * pdf))
    peak = float(np.max(flux_mod))
    return ArrivalStatistics(
        detector_x=float(detector_x),
        t_grid=t,
        pdf=pdf,
        mean_t=mean_t,
        sd_t=float(np.sqrt(max(var_t, 0.0))),
        tail_fraction=float(flux_mod[-1] / peak) if peak > 0.0 else 0.0,
    )


def arrival_sweep(
    spec: EnsembleSpec, regimes, detector_x: float, t_grid
) -> list[ArrivalStatistics]:
    """One arrival distribution per regime; regimes must be ordered in epsilon."""
    regimes = list(regimes)
    if not regimes:
        raise DomainError("regime list must be non-empty")
    eps = [r.epsilon for r in regimes]
    diffs = np.diff(eps)
    if len(eps) > 1 and not (np.all(diffs > 0.0) or np.all(diffs < 0.0)):
        raise DomainError("regimes must be strictly ordered by epsilon")
    return [arrival_distribution(spec, r, detector_x, t_grid) for r in regimes]
