"""Experiment orchestration: one CSV per (run kind, epsilon) plus a manifest.

Outputs are deterministic: fixed evaluation and summation order, 17
significant digits, LF line endings, and no run-time data inside CSV bodies.
The manifest echoes the configuration and records norm-drift diagnostics and
the wall clock.
"""

from __future__ import annotations

import json
import time as _time
from pathlib import Path

import numpy as np

from .arrival import arrival_distribution
from .config import ExperimentConfig, config_to_dict
from .ensembles import EnsembleSpec, position_density
from .hydrodynamics import trajectory_fan
from .observables import observable_record
from .phase_space import default_r_span, wigner_transform
from .quadrature import quad_integrate
from .regime import Regime, make_regime

__all__ = ["run_experiment"]


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(row) + "\n")


def _eps_tag(epsilon: float) -> str:
    return f"{epsilon:g}"


def _seed_positions(config: ExperimentConfig, spec: EnsembleSpec, regime: Regime) -> np.ndarray:
    settings = config.trajectories
    if settings.seeds is not None:
        return np.asarray(settings.seeds, dtype=float)
    if settings.seeding == "uniform":
        return np.linspace(settings.x_lo, settings.x_hi, settings.n_seeds)
    # Born-rule seeding: deterministic quantile midpoints of the t=0 density.
    x = np.linspace(settings.x_lo, settings.x_hi, 4001)
    rho = np.asarray(position_density(spec, regime, x, 0.0))
    cdf = np.concatenate(([0.0], np.cumsum(0.5 * (rho[1:] + rho[:-1]) * np.diff(x))))
    cdf /= cdf[-1]
    quantiles = (np.arange(settings.n_seeds) + 0.5) / settings.n_seeds
    return np.interp(quantiles, cdf, x)


def _run_density(
    config: ExperimentConfig, regime: Regime, out_dir: Path, written: list[Path]
) -> None:
    x = config.grid.points()
    times = config.time.points()
    pure = config.ensemble("pure")
    mixed = config.ensemble("mixed")
    path = out_dir / f"density_eps{_eps_tag(regime.epsilon)}.csv"
    written.append(path)

    def rows():
        for t in times:
            rho_p = np.asarray(position_density(pure, regime, x, t))
            rho_m = np.asarray(position_density(mixed, regime, x, t))
            t_str = _fmt(t)
            for i in range(x.size):
                yield (t_str, _fmt(x[i]), _fmt(rho_p[i]), _fmt(rho_m[i]))

    _write_csv(
        path,
        ["t [time]", "x [length]", "density_pure [1/length]", "density_mixed [1/length]"],
        rows(),
    )


def _run_trajectories(
    config: ExperimentConfig,
    regime: Regime,
    out_dir: Path,
    written: list[Path],
    diagnostics: dict,
) -> None:
    settings = config.trajectories
    path = out_dir / f"trajectories_eps{_eps_tag(regime.epsilon)}.csv"
    written.append(path)
    fans = {}
    seed_lists = {}
    for kind in ("pure", "mixed"):
        spec = config.ensemble(kind)
        seeds = _seed_positions(config, spec, regime)
        seed_lists[kind] = seeds
        fans[kind] = trajectory_fan(spec, regime, seeds, settings.t_end, settings.dt)

    n_steps = int(round(settings.t_end / settings.dt))
    keep = np.arange(0, n_steps + 1, settings.record_every)
    if keep[-1] != n_steps:
        keep = np.append(keep, n_steps)
    times = np.arange(n_steps + 1) * settings.dt

    header = ["t [time]"]
    for kind in ("pure", "mixed"):
        header += [f"x_{kind}[{seed:.6g}] [length]" for seed in seed_lists[kind]]

    def rows():
        for k in keep:
            row = [_fmt(times[k])]
            for kind in ("pure", "mixed"):
                for trajectory in fans[kind]:
                    if k < trajectory.positions.size:
                        row.append(_fmt(trajectory.positions[k]))
                    else:
                        row.append("nan")
            yield row

    _write_csv(path, header, rows())
    diagnostics[f"stalled_eps{_eps_tag(regime.epsilon)}"] = {
        kind: sum(1 for tr in fans[kind] if tr.status != "completed") for kind in fans
    }


def _run_arrival(config: ExperimentConfig, out_dir: Path, written: list[Path]) -> None:
    t_grid = np.linspace(0.0, config.arrival.t_max, config.arrival.n_points)
    summary_rows = []
    for eps in config.epsilons:
        regime = make_regime(eps, config.hbar)
        stats = {
            kind: arrival_distribution(
                config.ensemble(kind), regime, config.detector_x, t_grid
            )
            for kind in ("pure", "mixed")
        }
        path = out_dir / f"arrival_eps{_eps_tag(eps)}.csv"
        written.append(path)
        _write_csv(
            path,
            ["t [time]", "pdf_pure [1/time]", "pdf_mixed [1/time]"],
            (
                (_fmt(t_grid[i]), _fmt(stats["pure"].pdf[i]), _fmt(stats["mixed"].pdf[i]))
                for i in range(t_grid.size)
            ),
        )
        summary_rows.append(
            (
                _fmt(eps),
                _fmt(stats["pure"].mean_t),
                _fmt(stats["pure"].sd_t),
                _fmt(stats["mixed"].mean_t),
                _fmt(stats["mixed"].sd_t),
            )
        )
    summary = out_dir / "arrival_summary.csv"
    written.append(summary)
    _write_csv(
        summary,
        [
            "epsilon [1]",
            "mean_t_pure [time]",
            "sd_t_pure [time]",
            "mean_t_mixed [time]",
            "sd_t_mixed [time]",
        ],
        summary_rows,
    )


def _run_observables(
    config: ExperimentConfig, regime: Regime, out_dir: Path, written: list[Path]
) -> None:
    x = config.grid.points()
    times = config.time.points()
    path = out_dir / f"observables_eps{_eps_tag(regime.epsilon)}.csv"
    written.append(path)
    header = ["t [time]"]
    for kind in ("pure", "mixed"):
        header += [
            f"mean_x_{kind} [length]",
            f"sd_x_{kind} [length]",
            f"mean_p_{kind} [momentum]",
            f"sd_p_{kind} [momentum]",
            f"uncertainty_product_{kind} [action]",
            f"f_nc_{kind} [force]",
            f"heisenberg_margin_{kind} [action]",
        ]

    def rows():
        for t in times:
            row = [_fmt(t)]
            for kind in ("pure", "mixed"):
                record = observable_record(config.ensemble(kind), regime, t, x)
                margin = record.uncertainty_product - 0.5 * regime.hbar_tilde
                row += [
                    _fmt(record.mean_x),
                    _fmt(record.sd_x),
                    _fmt(record.mean_p),
                    _fmt(record.sd_p),
                    _fmt(record.uncertainty_product),
                    _fmt(record.f_nc),
                    _fmt(margin),
                ]
            yield row

    _write_csv(path, header, rows())


def _run_wigner(
    config: ExperimentConfig, regime: Regime, out_dir: Path, written: list[Path]
) -> None:
    settings = config.wigner
    R = np.linspace(settings.x_min, 0.0, settings.n_x)
    u = np.linspace(-settings.u_max, settings.u_max, settings.n_u)
    path = out_dir / f"wigner_eps{_eps_tag(regime.epsilon)}.csv"
    written.append(path)

    def rows():
        for t in settings.times:
            fields = {
                kind: wigner_transform(
                    config.ensemble(kind),
                    regime,
                    t,
                    R,
                    u,
                    r_span=default_r_span(
                        config.ensemble(kind), regime, t, factor=settings.rel_span
                    ),
                    n_r=settings.n_rel,
                )
                for kind in ("pure", "mixed")
            }
            t_str = _fmt(t)
            for i in range(R.size):
                R_str = _fmt(R[i])
                for j in range(u.size):
                    yield (
                        t_str,
                        R_str,
                        _fmt(u[j]),
                        _fmt(fields["pure"].values[i, j]),
                        _fmt(fields["mixed"].values[i, j]),
                    )

    _write_csv(
        path,
        [
            "t [time]",
            "R [length]",
            "u [momentum]",
            "w_pure [1/action]",
            "w_mixed [1/action]",
        ],
        rows(),
    )


def _trace_drift(config: ExperimentConfig, regime: Regime) -> dict:
    x = config.grid.points()
    drift = {}
    for kind in ("pure", "mixed"):
        spec = config.ensemble(kind)
        trace_start = float(quad_integrate(x, position_density(spec, regime, x, 0.0)))
        trace_end = float(
            quad_integrate(x, position_density(spec, regime, x, config.time.t_max))
        )
        drift[kind] = {"trace_t0": trace_start, "trace_t_end": trace_end}
    return drift


def run_experiment(config: ExperimentConfig, out_dir=None) -> dict:
    """Run the configured experiment; returns the manifest dictionary.

    Partial outputs are removed if any stage fails.
    """
    target = Path(out_dir if out_dir is not None else config.out_dir)
    target.mkdir(parents=True, exist_ok=True)
    started = _time.perf_counter()
    written: list[Path] = []
    diagnostics: dict = {"trace": {}}
    try:
        if config.run_kind == "arrival":
            _run_arrival(config, target, written)
        else:
            for eps in config.epsilons:
                regime = make_regime(eps, config.hbar)
                if config.run_kind == "density":
                    _run_density(config, regime, target, written)
                elif config.run_kind == "trajectories":
                    _run_trajectories(config, regime, target, written, diagnostics)
                elif config.run_kind == "observables":
                    _run_observables(config, regime, target, written)
                elif config.run_kind == "wigner":
                    _run_wigner(config, regime, target, written)
        for eps in config.epsilons:
            diagnostics["trace"][_eps_tag(eps)] = _trace_drift(
                config, make_regime(eps, config.hbar)
            )
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        raise

    manifest = {
        "config": config_to_dict(config),
        "outputs": sorted(p.name for p in written),
        "diagnostics": diagnostics,
        "wall_clock_seconds": _time.perf_counter() - started,
    }
    with open(target / "manifest.json", "w", encoding="utf-8", newline="\n") as handle:
        json.dump(manifest, handle, indent=2)
        handle.write("\n")
    return manifest
