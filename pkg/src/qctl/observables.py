"""Moments, uncertainties, Ehrenfest residuals, and the wall's effective force.

Momentum moments are computed in the position representation from the
analytic component wave functions: the mean from ``hb Im{conj(psi) psi'}``
and the second moment from ``hb^2 |psi'|^2``, which is exact on the half-line
because the wall node kills the boundary term of the integration by parts.
Mixtures weight the component expectations equally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import (
    EnsembleSpec,
    component_amplitudes,
    component_gradients,
    norm_constant,
    position_density,
)
from .errors import DomainError
from .quadrature import as_grid, quad_integrate
from .regime import Regime

__all__ = [
    "ObservableRecord",
    "position_moments",
    "momentum_moments",
    "effective_force",
    "ehrenfest_residual",
    "heisenberg_check",
    "observable_record",
]


@dataclass(frozen=True)
class ObservableRecord:
    """Snapshot of ensemble observables at one time."""

    t: float
    mean_x: float
    mean_p: float
    sd_x: float
    sd_p: float
    uncertainty_product: float
    f_nc: float


def position_moments(spec: EnsembleSpec, regime: Regime, t, grid):
    """Mean and standard deviation of position by quadrature of the diagonal."""
    x = as_grid(grid)
    rho = position_density(spec, regime, x, t)
    trace = float(quad_integrate(x, rho))
    mean = float(quad_integrate(x, x * rho)) / trace
    var = float(quad_integrate(x, (x - mean) ** 2 * rho)) / trace
    return mean, float(np.sqrt(max(var, 0.0)))


def momentum_moments(spec: EnsembleSpec, regime: Regime, t, grid):
    """Mean and standard deviation of momentum from component wave functions."""
    x = as_grid(grid)
    hb = regime.hbar_tilde
    norm = norm_constant(spec, regime)
    psi_a, psi_b = component_amplitudes(spec, regime, x, t)
    grad_a, grad_b = component_gradients(spec, regime, x, t)
    if spec.kind == "pure":
        psi = psi_a + psi_b
        grad = grad_a + grad_b
        trace = 0.5 * float(quad_integrate(x, np.abs(psi) ** 2)) / norm
        mean = 0.5 * hb * float(quad_integrate(x, np.imag(np.conj(psi) * grad))) / norm
        second = 0.5 * hb**2 * float(quad_integrate(x, np.abs(grad) ** 2)) / norm
    else:
        trace = (
            0.5
            * float(quad_integrate(x, np.abs(psi_a) ** 2 + np.abs(psi_b) ** 2))
            / norm
        )
        mean = (
            0.5
            * hb
            * float(
                quad_integrate(
                    x, np.imag(np.conj(psi_a) * grad_a) + np.imag(np.conj(psi_b) * grad_b)
                )
            )
            / norm
        )
        second = (
            0.5
            * hb**2
            * float(quad_integrate(x, np.abs(grad_a) ** 2 + np.abs(grad_b) ** 2))
            / norm
        )
    mean /= trace
    second /= trace
    return mean, float(np.sqrt(max(second - mean**2, 0.0)))


def effective_force(spec: EnsembleSpec, regime: Regime, t):
    """Non-classical effective force from the boundary gradient at the wall.

    For the mixture this is
    ``-(1/2) (hb^2 / 2m) (|d psi_a/dx|^2 + |d psi_b/dx|^2)`` at x = 0; the
    pure state uses the gradient of the full superposition instead.  Both are
    exactly d<p>/dt for the corresponding normalized state.
    """
    norm = norm_constant(spec, regime)
    grad_a, grad_b = component_gradients(spec, regime, 0.0, t)
    scale = regime.hbar_tilde**2 / (2.0 * spec.mass)
    if spec.kind == "pure":
        boundary = np.abs(grad_a + grad_b) ** 2
    else:
        boundary = np.abs(grad_a) ** 2 + np.abs(grad_b) ** 2
    return -0.5 * scale * boundary / norm


def ehrenfest_residual(spec: EnsembleSpec, regime: Regime, t, grid, dt_fd: float = 1e-3):
    """Residuals of the two Ehrenfest identities at time t.

    r1 = d<x>/dt - <p>/m and r2 = d<p>/dt - f_nc, with time derivatives by
    central differences of step ``dt_fd`` (so tolerances should budget for
    O(dt_fd^2) truncation).
    """
    if not t - dt_fd >= 0.0:
        raise DomainError(f"need t >= dt_fd for central differences, got t={t}")
    x_plus, _ = position_moments(spec, regime, t + dt_fd, grid)
    x_minus, _ = position_moments(spec, regime, t - dt_fd, grid)
    p_plus, _ = momentum_moments(spec, regime, t + dt_fd, grid)
    p_minus, _ = momentum_moments(spec, regime, t - dt_fd, grid)
    mean_p, _ = momentum_moments(spec, regime, t, grid)
    r1 = (x_plus - x_minus) / (2.0 * dt_fd) - mean_p / spec.mass
    r2 = (p_plus - p_minus) / (2.0 * dt_fd) - float(effective_force(spec, regime, t))
    return r1, r2


def heisenberg_check(record: ObservableRecord, regime: Regime):
    """Margin of the rescaled uncertainty relation; holds iff margin >= -1e-9."""
    margin = record.uncertainty_product - 0.5 * regime.hbar_tilde
    return margin >= -1e-9, margin


def observable_record(spec: EnsembleSpec, regime: Regime, t, grid) -> ObservableRecord:
    """Assemble the full observable snapshot at time t."""
    mean_x, sd_x = position_moments(spec, regime, t, grid)
    mean_p, sd_p = momentum_moments(spec, regime, t, grid)
    return ObservableRecord(
        t=float(t),
        mean_x=mean_x,
        mean_p=mean_p,
        sd_x=sd_x,
        sd_p=sd_p,
        uncertainty_product=sd_x * sd_p,
        f_nc=float(effective_force(spec, regime, t)),
    )
