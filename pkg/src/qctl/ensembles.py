"""Two-packet ensembles on the half-line: superposition and statistical mixture.

The pure state is ``N (psi_a + psi_b) / sqrt(2)`` and the mixture is the
equal-weight sum of the component projectors; both are built from hard-wall
packet amplitudes, so density-matrix elements vanish whenever either argument
is at or beyond the wall.  Normalization constants are fixed once from the
t = 0 trace by quadrature and reused at all times; any residual trace drift is
a diagnostic, never silently renormalized away.

``wall=False`` switches the components to free-space amplitudes.  That variant
exists for oracle checks (free-packet velocity fields, rigid Wigner transport)
where the wall must be absent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalGuardError
from .packets import (
    GaussianPacket,
    free_amplitude,
    free_amplitude_gradient,
    wall_amplitude,
    wall_amplitude_gradient,
)
from .quadrature import as_grid, quad_integrate, quadrature_weights
from .regime import Regime

__all__ = [
    "EnsembleSpec",
    "component_amplitudes",
    "component_gradients",
    "norm_constant",
    "pure_density",
    "mixed_density",
    "density",
    "position_density",
    "purity",
    "fringe_visibility",
]

_KINDS = ("pure", "mixed")

# Imaginary residue limit for diagonal density elements: hermiticity makes the
# diagonal exactly real, so anything above this is an implementation bug.
_IMAG_FAIL = 1e-9


@dataclass(frozen=True)
class EnsembleSpec:
    """Equal-weight pair of Gaussian packets, superposed or mixed."""

    kind: str
    packet_a: GaussianPacket
    packet_b: GaussianPacket
    weights: tuple[float, float] = (0.5, 0.5)
    wall: bool = True

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.packet_a.mass != self.packet_b.mass:
            raise DomainError("both packets must share the same mass")
        if self.weights != (0.5, 0.5):
            raise DomainError("only equal weights (0.5, 0.5) are supported")

    @property
    def packets(self) -> tuple[GaussianPacket, GaussianPacket]:
        return (self.packet_a, self.packet_b)

    @property
    def mass(self) -> float:
        return self.packet_a.mass

    def as_kind(self, kind: str) -> "EnsembleSpec":
        return self if kind == self.kind else replace(self, kind=kind)


def component_amplitudes(spec: EnsembleSpec, regime: Regime, x, t):
    """Component amplitudes (psi_a, psi_b), wall-truncated unless wall=False."""
    amp = wall_amplitude if spec.wall else free_amplitude
    return amp(spec.packet_a, regime, x, t), amp(spec.packet_b, regime, x, t)


def component_gradients(spec: EnsembleSpec, regime: Regime, x, t):
    """Spatial gradients of the component amplitudes."""
    grad = wall_amplitude_gradient if spec.wall else free_amplitude_gradient
    return grad(spec.packet_a, regime, x, t), grad(spec.packet_b, regime, x, t)


def _norm_grid(spec: EnsembleSpec) -> np.ndarray:
    """Internal t = 0 grid wide enough that tail truncation is negligible."""
    pad = 16.0
    lo = min(p.x0 - pad * p.sigma0 for p in spec.packets)
    hi = 0.0 if spec.wall else max(p.x0 + pad * p.sigma0 for p in spec.packets)
    return np.linspace(lo, hi, 8193)


@lru_cache(maxsize=None)
def norm_constant(spec: EnsembleSpec, regime: Regime) -> float:
    """Trace of the unnormalized density at t = 0, computed once by quadrature.

    Densities divide by this constant; for the pure state it equals
    1 / N^2 with N the superposition normalization constant.
    """
    x = _norm_grid(spec)
    psi_a, psi_b = component_amplitudes(spec, regime, x, 0.0)
    if spec.kind == "pure":
        raw = 0.5 * np.abs(psi_a + psi_b) ** 2
    else:
        raw = 0.5 * (np.abs(psi_a) ** 2 + np.abs(psi_b) ** 2)
    value = float(quad_integrate(x, raw))
    if not value > 0.0:
        raise DomainError("ensemble has no support at t = 0")
    return value


def pure_density(spec: EnsembleSpec, regime: Regime, x, y, t):
    """Superposition density matrix N^2 (psi_a+psi_b)(x) conj(psi_a+psi_b)(y) / 2."""
    if spec.kind != "pure":
        raise DomainError(f"pure_density requires a pure spec, got {spec.kind!r}")
    norm = norm_constant(spec, regime)
    ax, bx = component_amplitudes(spec, regime, x, t)
    ay, by = component_amplitudes(spec, regime, y, t)
    return 0.5 * (ax + bx) * np.conj(ay + by) / norm


def mixed_density(spec: EnsembleSpec, regime: Regime, x, y, t):
    """Statistical mixture (psi_a(x) conj psi_a(y) + psi_b(x) conj psi_b(y)) / 2."""
    if spec.kind != "mixed":
        raise DomainError(f"mixed_density requires a mixed spec, got {spec.kind!r}")
    norm = norm_constant(spec, regime)
    ax, bx = component_amplitudes(spec, regime, x, t)
    ay, by = component_amplitudes(spec, regime, y, t)
    return 0.5 * (ax * np.conj(ay) + bx * np.conj(by)) / norm


def density(spec: EnsembleSpec, regime: Regime, x, y, t):
    """Density-matrix element for either ensemble kind."""
    if spec.kind == "pure":
        return pure_density(spec, regime, x, y, t)
    return mixed_density(spec, regime, x, y, t)


def position_density(spec: EnsembleSpec, regime: Regime, x, t):
    """Real diagonal of the density matrix.

    Raises :class:`NumericalGuardError` if the imaginary residue of the
    diagonal exceeds 1e-9; hermiticity makes it vanish identically, so a large
    residue means a broken formula rather than roundoff.
    """
    diagonal = density(spec, regime, x, x, t)
    imag_max = float(np.max(np.abs(np.imag(np.atleast_1d(diagonal)))))
    if imag_max > _IMAG_FAIL:
        raise NumericalGuardError(
            f"diagonal density has imaginary residue {imag_max:.3e} > {_IMAG_FAIL:.0e}"
        )
    return np.real(diagonal)


def purity(spec: EnsembleSpec, regime: Regime, t, grid, block_size: int = 512) -> float:
    """tr(rho^2) by 2-D quadrature of |rho(x, y)|^2 over the grid.

    The double integral is accumulated in fixed-order row blocks so results
    are deterministic and memory stays bounded for large grids.
    """
    x = as_grid(grid)
    w = quadrature_weights(x)
    norm = norm_constant(spec, regime)
    psi_a, psi_b = component_amplitudes(spec, regime, x, t)
    total = 0.0
    for start in range(0, x.size, block_size):
        stop = min(start + block_size, x.size)
        if spec.kind == "pure":
            row = psi_a[start:stop] + psi_b[start:stop]
            block = 0.5 * row[:, None] * np.conj(psi_a + psi_b)[None, :] / norm
        else:
            block = (
                0.5
                * (
                    psi_a[start:stop, None] * np.conj(psi_a)[None, :]
                    + psi_b[start:stop, None] * np.conj(psi_b)[None, :]
                )
                / norm
            )
        weight_block = w[start:stop, None] * w[None, :]
        total += float(np.sum(np.abs(block) ** 2 * weight_block))
    return total


def fringe_visibility(
    spec: EnsembleSpec,
    regime: Regime,
    t: float,
    window: tuple[float, float] = (-10.0, 0.0),
    sigma_obs: float = 0.25,
) -> float:
    """Interference visibility at a fixed observational resolution.

    Both the pure and the mixed densities are smoothed with a Gaussian of
    width ``sigma_obs`` (the resolution of an observer or plot), and the
    visibility is the peak of the smoothed pure-minus-mixed difference
    relative to the smoothed incoherent background:

        V = max |rho_pure_s - rho_mixed_s| / max rho_mixed_s   over the window.

    Raw fringe contrast is independent of the regime wherever the two packet
    envelopes coincide, so "washing out" of the pattern is only measurable at
    fixed resolution: the fringe wavelength shrinks with hbar_tilde and the
    smoothed contrast falls off as exp(-2 pi^2 sigma_obs^2 / lambda^2),
    strictly monotonically in epsilon.
    """
    lo, hi = window
    if not lo < hi:
        raise DomainError(f"window must be increasing, got {window}")
    if not sigma_obs > 0.0:
        raise DomainError(f"sigma_obs must be positive, got {sigma_obs}")
    momentum_gap = abs(spec.packet_a.p0 - spec.packet_b.p0)
    wavelength = (
        2.0 * np.pi * regime.hbar_tilde / momentum_gap if momentum_gap > 0.0 else np.inf
    )
    dx = min(sigma_obs / 8.0, wavelength / 16.0 if np.isfinite(wavelength) else np.inf)
    pad = 6.0 * sigma_obs
    n = int(np.ceil((hi - lo + 2.0 * pad) / dx)) + 1
    x = np.linspace(lo - pad, hi + pad, n)
    dx = x[1] - x[0]

    rho_pure = np.asarray(position_density(spec.as_kind("pure"), regime, x, t))
    rho_mixed = np.asarray(position_density(spec.as_kind("mixed"), regime, x, t))

    half = int(np.ceil(6.0 * sigma_obs / dx))
    offsets = np.arange(-half, half + 1) * dx
    kernel = np.exp(-0.5 * (offsets / sigma_obs) ** 2)
    kernel /= kernel.sum()
    pure_s = np.convolve(rho_pure, kernel, mode="same")
    mixed_s = np.convolve(rho_mixed, kernel, mode="same")

    inside = (x >= lo) & (x <= hi)
    background = float(np.max(mixed_s[inside]))
    if background <= 0.0:
        raise DomainError("window has no density to measure visibility against")
    return float(np.max(np.abs(pure_s[inside] - mixed_s[inside]))) / background
