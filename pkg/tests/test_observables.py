import numpy as np
import pytest

from qctl import (
    EnsembleSpec,
    GaussianPacket,
    complex_width,
    effective_force,
    ehrenfest_residual,
    heisenberg_check,
    make_regime,
    momentum_moments,
    observable_record,
    position_moments,
)

GRID = np.linspace(-60.0, 0.0, 4097)


def test_position_moments_of_initial_gaussian(quantum, packet_a):
    spec = EnsembleSpec("pure", packet_a, packet_a)
    mean, sd = position_moments(spec, quantum, 0.0, GRID)
    assert mean == pytest.approx(-5.0, abs=1e-4)
    assert sd == pytest.approx(1.0, abs=1e-4)


def test_position_spread_follows_complex_width(quantum, packet_a):
    # Oracle: free Gaussian spreading, sd(t) = |st|.
    spec = EnsembleSpec("pure", packet_a, packet_a, wall=False)
    t = 2.0
    grid = np.linspace(-60.0, 20.0, 4097)
    _, sd = position_moments(spec, quantum, t, grid)
    assert sd == pytest.approx(abs(complex_width(packet_a, quantum, t)), rel=1e-6)


def test_mixture_mean_position(quantum, mixed_spec):
    mean, _ = position_moments(mixed_spec, quantum, 0.0, GRID)
    assert mean == pytest.approx(-10.0, abs=1e-4)


def test_opposite_kicks_cancel_mean_momentum(quantum, mixed_spec):
    # Cancellation holds up to the wall-truncation tail of the closer packet
    # (relative norm defect ~ 4e-6 at 5 sigma0).
    mean_p, _ = momentum_moments(mixed_spec, quantum, 0.0, GRID)
    assert mean_p == pytest.approx(0.0, abs=1e-5)


def test_single_packet_momentum_moments(quantum):
    packet = GaussianPacket(sigma0=1.0, x0=-10.0, p0=-2.0, mass=1.0)
    spec = EnsembleSpec("pure", packet, packet)
    mean_p, sd_p = momentum_moments(spec, quantum, 0.0, np.linspace(-40.0, 0.0, 4097))
    assert mean_p == pytest.approx(packet.p0, rel=1e-6)
    assert sd_p == pytest.approx(quantum.hbar_tilde / (2.0 * packet.sigma0), rel=1e-6)


def test_mean_momentum_after_reflection(nearly_classical, mixed_spec):
    # Past the collision both lumps move away from the wall.
    mean_p, _ = momentum_moments(mixed_spec, nearly_classical, 12.0, GRID)
    assert mean_p < 0.0
    assert mean_p == pytest.approx(-2.0, abs=0.1)


@pytest.mark.parametrize("t", [1.0, 5.0, 9.0])
def test_ehrenfest_identities_for_mixture(t, quantum, mixed_spec):
    r1, r2 = ehrenfest_residual(mixed_spec, quantum, t, GRID)
    assert abs(r1) < 1e-4
    assert abs(r2) < 1e-3


def test_ehrenfest_for_free_packet(quantum, packet_a):
    spec = EnsembleSpec("pure", packet_a, packet_a, wall=False)
    grid = np.linspace(-60.0, 20.0, 4097)
    r1, r2 = ehrenfest_residual(spec, quantum, 2.0, grid)
    assert abs(r1) < 1e-6
    assert abs(r2) < 1e-6


def test_effective_force_sign_and_quiescence(quantum, mixed_spec):
    times = np.linspace(0.0, 15.0, 151)
    force = np.asarray(effective_force(mixed_spec, quantum, times))
    assert np.all(force <= 0.0)
    # Oracle: hand-evaluated boundary gradients of the initial Gaussians,
    # |d psi/dx|^2 at the wall = 4 [(x0/2s^2)^2 + (p0/hb)^2] |psi(0)|^2.
    from qctl import norm_constant

    hb = quantum.hbar_tilde
    expected = 0.0
    for packet in mixed_spec.packets:
        peak_sq = (2.0 * np.pi * packet.sigma0**2) ** -0.5 * np.exp(
            -packet.x0**2 / (2.0 * packet.sigma0**2)
        )
        slope_sq = 4.0 * ((packet.x0 / (2.0 * packet.sigma0**2)) ** 2 + (packet.p0 / hb) ** 2)
        expected += slope_sq * peak_sq
    expected *= -(hb**2) / (4.0 * mixed_spec.mass) / norm_constant(mixed_spec, quantum)
    assert force[0] == pytest.approx(expected, rel=1e-10)
    assert abs(force[0]) < 1e-4


def test_effective_force_peaks_at_classical_collision_time(nearly_classical, mixed_spec):
    times = np.linspace(0.0, 15.0, 1501)
    force = np.asarray(effective_force(mixed_spec, nearly_classical, times))
    peak_time = times[int(np.argmax(np.abs(force)))]
    assert 6.5 <= peak_time <= 8.5


def test_heisenberg_margin_minimum_uncertainty(quantum):
    packet = GaussianPacket(sigma0=1.0, x0=-10.0, p0=-2.0, mass=1.0)
    spec = EnsembleSpec("pure", packet, packet)
    record = observable_record(spec, quantum, 0.0, np.linspace(-40.0, 0.0, 4097))
    ok, margin = heisenberg_check(record, quantum)
    assert ok
    assert margin == pytest.approx(0.0, abs=1e-6)


def test_heisenberg_margin_degenerate_mixture(quantum):
    packet = GaussianPacket(sigma0=1.0, x0=-10.0, p0=-2.0, mass=1.0)
    spec = EnsembleSpec("mixed", packet, packet)
    record = observable_record(spec, quantum, 0.0, np.linspace(-40.0, 0.0, 4097))
    ok, margin = heisenberg_check(record, quantum)
    assert ok
    assert margin == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("epsilon", [1.0, 0.5, 0.01])
def test_heisenberg_holds_through_collision(epsilon, mixed_spec):
    regime = make_regime(epsilon)
    grid = np.linspace(-90.0, 0.0, 4097)
    for t in (0.0, 4.0, 7.5, 11.0):
        record = observable_record(mixed_spec, regime, t, grid)
        ok, margin = heisenberg_check(record, regime)
        assert ok, f"margin {margin} at t={t}, eps={epsilon}"


def test_position_spread_shrinks_toward_classical(
    quantum, nearly_classical, mixed_spec
):
    _, sd_quantum = position_moments(mixed_spec, quantum, 3.0, GRID)
    _, sd_classical = position_moments(mixed_spec, nearly_classical, 3.0, GRID)
    assert sd_classical < sd_quantum


def test_uncertainty_product_inversion_near_collision(
    quantum, nearly_classical, mixed_spec
):
    # Around the reflection the nearly classical product exceeds the quantum
    # one somewhere in the window, even though it is smaller at late times.
    grid = np.linspace(-90.0, 0.0, 4097)
    inverted = False
    for t in np.arange(6.0, 8.01, 0.5):
        product_q = observable_record(mixed_spec, quantum, t, grid).uncertainty_product
        product_c = observable_record(
            mixed_spec, nearly_classical, t, grid
        ).uncertainty_product
        if product_c > product_q:
            inverted = True
    assert inverted


def test_record_fields_are_consistent(quantum, mixed_spec):
    record = observable_record(mixed_spec, quantum, 4.0, GRID)
    assert record.uncertainty_product == pytest.approx(record.sd_x * record.sd_p, rel=1e-12)
    assert record.sd_x >= 0.0 and record.sd_p >= 0.0
    assert record.f_nc <= 0.0
