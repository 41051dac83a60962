import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import trapezoid

from coriolis_ai import (
    ClosureVector,
    WavePacket,
    cesium_species,
    effective_temperature,
    overlap,
    rate_contrast_factor,
    sigma_from_temperature,
    thermal_de_broglie,
    velocity_selection_sigma,
    wavefunction,
)

from conftest import HBAR, KB, M_CS, V_R

MEASURED_PACKET = WavePacket((105e-9, 86e-9, 813e-9))


def grid_overlap(sigma, delta, n=49, span=9.0):
    """Trapezoid-rule value of the integral of psi(r + delta) psi(r) over a 3-D grid."""
    sigma = np.asarray(sigma)
    delta = np.asarray(delta)
    axes = [np.linspace(-d / 2 - span * s, -d / 2 + span * s, n) for s, d in zip(sigma, delta)]
    X, Y, Z = np.meshgrid(*axes, indexing="ij")
    r = np.stack([X, Y, Z], axis=-1)

    def psi(p):
        return (math.pi**3 * np.prod(sigma) ** 2) ** -0.25 * np.exp(-0.5 * np.sum((p / sigma) ** 2, axis=-1))

    f = psi(r + delta) * psi(r)
    return trapezoid(trapezoid(trapezoid(f, axes[2], axis=2), axes[1], axis=1), axes[0], axis=0)


def test_zero_displacement():
    assert overlap(MEASURED_PACKET, np.zeros(3)) == 1.0


def test_uncompensated_overlap_in_position_form():
    assert overlap(MEASURED_PACKET, [0.33e-6, 0, 0]) == pytest.approx(math.exp(-(0.33**2) / (4 * 0.105**2)), rel=1e-12)
    assert overlap(MEASURED_PACKET, [0.33e-6, 0, 0]) == pytest.approx(0.085, abs=0.001)


def test_rate_form_contrast_factor():
    assert 0.24 <= rate_contrast_factor(57.4e-6, 34e-6) <= 0.28
    assert rate_contrast_factor(57.4, 34.0) == pytest.approx(math.exp(-(57.4**2) / (2 * 34.0**2)), rel=1e-14)
    with pytest.raises(ValueError):
        rate_contrast_factor(1.0, 0.0)


def test_accepts_closure_vector():
    d = np.array([1e-7, -2e-8, 3e-7])
    assert overlap(MEASURED_PACKET, ClosureVector(d)) == overlap(MEASURED_PACKET, d)


def test_single_axis_matches_one_dimensional_formula():
    for axis, s in enumerate(MEASURED_PACKET.sigma):
        d = np.zeros(3)
        d[axis] = 1.7 * s
        assert overlap(MEASURED_PACKET, d) == pytest.approx(math.exp(-(1.7**2) / 4), rel=1e-13)
        assert overlap(MEASURED_PACKET, d) == pytest.approx(grid_overlap(MEASURED_PACKET.sigma, d), rel=1e-6)


def test_wavefunction_normalized():
    s = np.array(MEASURED_PACKET.sigma)
    axes = [np.linspace(-8 * v, 8 * v, 41) for v in s]
    X, Y, Z = np.meshgrid(*axes, indexing="ij")
    f = wavefunction(MEASURED_PACKET, np.stack([X, Y, Z], -1)) ** 2
    total = trapezoid(trapezoid(trapezoid(f, axes[2], axis=2), axes[1], axis=1), axes[0], axis=0)
    assert total == pytest.approx(1.0, rel=1e-9)


packets = st.tuples(*[st.floats(50e-9, 1e-6)] * 3)
fractions = st.tuples(*[st.floats(-1, 1)] * 3)


@settings(max_examples=100, deadline=None)
@given(packets, fractions, st.floats(0, 3))
def test_closed_form_matches_grid_integral(sigma, direction, scale):
    s = np.array(sigma)
    u = np.array(direction)
    norm = np.linalg.norm(u)
    delta = np.zeros(3) if norm == 0 else scale * s.min() * u / norm
    assert overlap(WavePacket(sigma), delta) == pytest.approx(grid_overlap(s, delta), rel=1e-6)


@given(packets, fractions, st.permutations([0, 1, 2]))
def test_invariant_under_axis_permutation(sigma, direction, perm):
    d = np.array(direction) * 1e-6
    rotated = WavePacket(tuple(np.array(sigma)[perm]))
    assert overlap(rotated, d[perm]) == pytest.approx(overlap(WavePacket(sigma), d), rel=1e-14)


@given(packets, fractions)
def test_even_in_displacement(sigma, direction):
    p = WavePacket(sigma)
    d = np.array(direction) * 1e-6
    assert overlap(p, -d) == overlap(p, d)
    assert overlap(p, d) * overlap(p, -d) == pytest.approx(overlap(p, d) ** 2, rel=1e-15)
    assert 0 < overlap(p, d) <= 1 or overlap(p, d) == 0.0


def test_packet_validation():
    with pytest.raises(ValueError):
        WavePacket((1e-7, 0.0, 1e-7))
    with pytest.raises(ValueError):
        WavePacket((1e-7, 1e-7))
    np.testing.assert_allclose(MEASURED_PACKET.matrix, np.diag([105e-9**-2, 86e-9**-2, 813e-9**-2]), rtol=1e-15)


@pytest.mark.parametrize("sigma, quoted, tol", [(105e-9, 0.33e-6, 0.005e-6), (86e-9, 0.49e-6, 0.005e-6), (813e-9, 5.5e-9, 0.05e-9)])
def test_effective_temperatures(cs, sigma, quoted, tol):
    exact = HBAR**2 / (M_CS * KB * sigma**2)
    assert effective_temperature(cs, sigma) == pytest.approx(exact, rel=1e-12)
    assert abs(effective_temperature(cs, sigma) - quoted) <= tol


@given(st.floats(1e-12, 1e-3))
def test_effective_temperature_inverse(temperature):
    cs = cesium_species()
    assert effective_temperature(cs, sigma_from_temperature(cs, temperature)) == pytest.approx(temperature, rel=1e-12)


def test_thermal_de_broglie(cs):
    lam = 2 * math.pi * HBAR / math.sqrt(2 * math.pi * M_CS * KB * 2e-6)
    assert thermal_de_broglie(cs, 2e-6) == pytest.approx(lam, rel=1e-12)
    assert thermal_de_broglie(cs, 2e-6) == pytest.approx(107e-9, rel=0.005)
    assert thermal_de_broglie(cs, 1.2e-6) == pytest.approx(
        2 * math.pi * HBAR / math.sqrt(2 * math.pi * M_CS * KB * 1.2e-6), rel=1e-12
    )
    assert thermal_de_broglie(cs, 8e-6) == pytest.approx(thermal_de_broglie(cs, 2e-6) / 2, rel=1e-14)
    with pytest.raises(ValueError):
        thermal_de_broglie(cs, 0.0)


def test_velocity_selection(cs):
    assert velocity_selection_sigma(cs, 500e-6) == pytest.approx(V_R * 500e-6 / 2, rel=1e-12)
    assert round(velocity_selection_sigma(cs, 500e-6) * 1e9, -1) == 880
    assert velocity_selection_sigma(cs, 250e-6) == pytest.approx(440e-9, rel=2e-3)
    assert velocity_selection_sigma(cs, 0.0) == 0.0
