"""Scaled quantum-to-classical transition simulations.

Gaussian ensembles (superpositions and statistical mixtures) scatter off a
hard wall while a transition parameter rescales Planck's constant, sweeping
the dynamics continuously between the quantum and classical regimes.
"""

from .arrival import ArrivalStatistics, arrival_distribution, arrival_sweep
from .config import (
    ArrivalSettings,
    ExperimentConfig,
    SpatialGrid,
    TimeGrid,
    TrajectorySettings,
    WignerSettings,
    load_config,
    parse_config,
    serialize_config,
)
from .ensembles import (
    EnsembleSpec,
    density,
    fringe_visibility,
    mixed_density,
    norm_constant,
    position_density,
    pure_density,
    purity,
)
from .errors import ConfigError, DomainError, LowDensityError, NumericalGuardError
from .hydrodynamics import (
    DENSITY_FLOOR,
    Trajectory,
    current,
    integrate_trajectory,
    trajectory_fan,
    velocity,
)
from .observables import (
    ObservableRecord,
    effective_force,
    ehrenfest_residual,
    heisenberg_check,
    momentum_moments,
    observable_record,
    position_moments,
)
from .packets import (
    GaussianPacket,
    complex_width,
    free_amplitude,
    free_amplitude_gradient,
    packet_center,
    wall_amplitude,
    wall_amplitude_gradient,
)
from .phase_space import WignerField, free_liouville_residual, wigner_transform
from .quadrature import quad_integrate, quadrature_weights
from .regime import Regime, make_regime
from .runner import run_experiment

__all__ = [
    "ArrivalSettings",
    "ArrivalStatistics",
    "ConfigError",
    "DENSITY_FLOOR",
    "DomainError",
    "EnsembleSpec",
    "ExperimentConfig",
    "GaussianPacket",
    "LowDensityError",
    "NumericalGuardError",
    "ObservableRecord",
    "Regime",
    "SpatialGrid",
    "TimeGrid",
    "Trajectory",
    "TrajectorySettings",
    "WignerField",
    "WignerSettings",
    "arrival_distribution",
    "arrival_sweep",
    "complex_width",
    "current",
    "density",
    "effective_force",
    "ehrenfest_residual",
    "free_amplitude",
    "free_amplitude_gradient",
    "free_liouville_residual",
    "fringe_visibility",
    "heisenberg_check",
    "integrate_trajectory",
    "load_config",
    "make_regime",
    "mixed_density",
    "momentum_moments",
    "norm_constant",
    "observable_record",
    "packet_center",
    "parse_config",
    "position_density",
    "position_moments",
    "pure_density",
    "purity",
    "quad_integrate",
    "quadrature_weights",
    "run_experiment",
    "serialize_config",
    "trajectory_fan",
    "velocity",
    "wall_amplitude",
    "wall_amplitude_gradient",
    "wigner_transform",
]
