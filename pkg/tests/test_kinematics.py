import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from coriolis_ai import (
    NORTH,
    PhysicalConstants,
    SequenceGeometry,
    applied_rotation,
    cesium_species,
    closure_error,
    combine_axis_rates,
    compensated_rate,
    mirror_axes,
    relative_velocities,
)

from conftest import LAT, OMEGA_E, V_R

OMEGA_H = OMEGA_E * math.cos(LAT)
rates = st.floats(-200e-6, 200e-6)


def test_relative_velocities_uncompensated(cs):
    g = SequenceGeometry(bragg_order=1, T=0.1, T_prime=0.005)
    v = relative_velocities(cs, g)
    kick = 2 * V_R
    np.testing.assert_allclose(v.v12, [0, 0, kick], rtol=1e-12)
    np.testing.assert_allclose(v.v23, [kick * OMEGA_H * 0.1, 0, 0], rtol=1e-9, atol=1e-25)
    np.testing.assert_allclose(v.v34, [kick * OMEGA_H * 0.205, 0, -kick], rtol=1e-9, atol=1e-25)
    np.testing.assert_array_equal(v.v4inf, 0.0)


def test_non_rotating_frame_closes():
    cs = cesium_species(PhysicalConstants(earth_rotation_rate=0.0))
    g = SequenceGeometry(bragg_order=5, T=0.25, T_prime=0.002)
    v = relative_velocities(cs, g)
    np.testing.assert_array_equal(v.v23, 0.0)
    np.testing.assert_allclose(v.v34, [0, 0, -10 * V_R], rtol=1e-12)
    np.testing.assert_array_equal(closure_error(cs, g).delta, 0.0)


def test_full_compensation_removes_horizontal_velocity(cs):
    g = SequenceGeometry(bragg_order=5, T=0.25, mirror_azimuth=0.0, comp_rate_yp=OMEGA_H)
    v = relative_velocities(cs, g)
    assert np.all(np.abs(v.v23[:2]) < 1e-20)
    np.testing.assert_array_equal(v.v4inf, 0.0)


@given(st.integers(1, 6), st.floats(0.01, 0.4), st.floats(0, 0.02), rates, rates)
def test_velocities_integrate_to_closure_error(n, T, Tp, rx, ry):
    cs = cesium_species()
    g = SequenceGeometry(bragg_order=n, T=T, T_prime=Tp, comp_rate_xp=rx, comp_rate_yp=ry)
    v = relative_velocities(cs, g)
    np.testing.assert_allclose(v.displacement(T, Tp), closure_error(cs, g).delta, rtol=1e-9, atol=1e-20)


def test_compensated_rate_uncompensated():
    assert compensated_rate(SequenceGeometry(bragg_order=5, T=0.25)) == pytest.approx(OMEGA_H, rel=1e-9)
    # the site value quoted as 57.4 urad/s
    assert compensated_rate(SequenceGeometry(bragg_order=5, T=0.25)) * 1e6 == pytest.approx(57.4, abs=0.2)


def test_single_axis_cancellation():
    g = SequenceGeometry(bragg_order=5, T=0.25, mirror_azimuth=0.0, comp_rate_yp=OMEGA_H)
    assert abs(compensated_rate(g)) < 1e-18


def test_positive_rate_reduces_effective_rate():
    g = SequenceGeometry(bragg_order=5, T=0.25)
    assert compensated_rate(g.replace(comp_rate_yp=10e-6)) < compensated_rate(g)


def test_closure_uncompensated_250ms(cs, geom250):
    d = closure_error(cs, geom250)
    expected = 4 * 5 * V_R * OMEGA_H * 0.25 * 0.252
    np.testing.assert_allclose(d.delta, [expected, 0, 0], rtol=1e-9, atol=1e-20)
    assert d.magnitude == pytest.approx(0.26e-6, rel=0.02)
    # quoted 0.33 um is within a factor 1.3 of the closed form
    assert 1 / 1.3 < d.magnitude / 0.33e-6 < 1.3


def test_closure_first_order_100ms(cs):
    g = SequenceGeometry(bragg_order=1, T=0.1, T_prime=0.005)
    assert closure_error(cs, g).magnitude == pytest.approx(8.5e-9, rel=0.01)


def test_closure_perfect_compensation(cs):
    g = SequenceGeometry(bragg_order=5, T=0.25, mirror_azimuth=0.0, comp_rate_yp=OMEGA_H)
    assert closure_error(cs, g).magnitude < 1e-20


def test_closure_vertical_from_delay(cs):
    g = SequenceGeometry(bragg_order=5, T=0.25, mirror_azimuth=0.0, comp_rate_yp=OMEGA_H, final_pulse_delay=23.1e-6)
    d = closure_error(cs, g).delta
    assert d[2] == pytest.approx(10 * V_R * 23.1e-6, rel=1e-12)
    assert d[2] == pytest.approx(813e-9, rel=2e-3)


@given(st.integers(1, 5), st.floats(0.05, 0.3), st.floats(0, 0.01), rates, rates)
def test_closure_linear_in_n(n, T, Tp, rx, ry):
    cs = cesium_species()
    g = SequenceGeometry(bragg_order=n, T=T, T_prime=Tp, comp_rate_xp=rx, comp_rate_yp=ry)
    np.testing.assert_allclose(
        closure_error(cs, g.replace(bragg_order=2 * n)).delta, 2 * closure_error(cs, g).delta, rtol=1e-12, atol=1e-30
    )


@given(st.floats(0.05, 0.3), st.floats(0, 0.01), rates)
def test_closure_linear_in_area(T, Tp, ry):
    cs = cesium_species()
    g = SequenceGeometry(bragg_order=5, T=T, T_prime=Tp, comp_rate_yp=ry)
    Tp2 = 2 * (T + Tp) - T  # doubles T (T + T')
    a = closure_error(cs, g).delta
    b = closure_error(cs, g.replace(T_prime=Tp2)).delta
    np.testing.assert_allclose(b, 2 * a, rtol=1e-12, atol=1e-30)


@given(st.floats(1e-7, 100e-6))
def test_closure_linear_and_antisymmetric_in_effective_rate(e):
    cs = cesium_species()
    base = SequenceGeometry(bragg_order=5, T=0.2, T_prime=0.002, mirror_azimuth=0.0)
    plus = closure_error(cs, base.replace(comp_rate_yp=OMEGA_H - e)).delta
    minus = closure_error(cs, base.replace(comp_rate_yp=OMEGA_H + e)).delta
    double = closure_error(cs, base.replace(comp_rate_yp=OMEGA_H - 2 * e)).delta
    # the cancellation at OMEGA_H costs some digits, so compare against the scale of the terms
    scale = np.abs(closure_error(cs, base).delta).max()
    assert np.abs(plus + minus).max() <= 1e-12 * scale
    assert np.abs(double - 2 * plus).max() <= 1e-12 * scale


@given(st.floats(0, 100e-6), st.floats(0.3, 1.2))
def test_compensation_equivalent_to_slower_planet(r, lat):
    cs = cesium_species()
    g = SequenceGeometry(bragg_order=5, T=0.2, T_prime=0.002, latitude=lat, mirror_azimuth=0.0, comp_rate_yp=r)
    eff = compensated_rate(g)
    assert eff == pytest.approx(OMEGA_E * math.cos(lat) - r, abs=1e-18)
    planet = PhysicalConstants(earth_rotation_rate=abs(eff) / math.cos(lat))
    other = closure_error(cs, g.replace(comp_rate_yp=0.0), planet).delta * math.copysign(1.0, eff)
    np.testing.assert_allclose(closure_error(cs, g).delta, other, rtol=1e-9, atol=1e-22)


@given(st.floats(0.05, 3.09), st.floats(-1, 1))
def test_mirror_axes_unit_and_angle(gamma, azimuth):
    ax = mirror_axes(SequenceGeometry(bragg_order=1, T=0.1, axis_angle=gamma, mirror_azimuth=azimuth))
    assert np.linalg.norm(ax.axis_xp) == pytest.approx(1.0, abs=1e-15)
    assert np.linalg.norm(ax.axis_yp) == pytest.approx(1.0, abs=1e-15)
    assert ax.axis_xp[2] == ax.axis_yp[2] == 0.0
    assert ax.angle == pytest.approx(gamma, abs=1e-12)


def test_default_yp_axis_near_north():
    ax = mirror_axes(SequenceGeometry(bragg_order=1, T=0.1))
    assert ax.axis_yp @ NORTH > 0.9


def test_combine_axis_rates_measured_optima():
    r = combine_axis_rates(51.3, 22.0, math.radians(82))
    assert r == pytest.approx(58.6, abs=0.05)
    assert abs(r - 58.5) <= 1.0


def test_combine_axis_rates_trivial():
    assert combine_axis_rates(7.0, 0.0, 1.234) == 7.0
    assert combine_axis_rates(3.0, 3.0, math.pi / 2) == pytest.approx(3.0 * math.sqrt(2), rel=1e-15)
    with pytest.raises(ValueError):
        combine_axis_rates(1.0, 1.0, 0.0)


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_combine_axis_rates_euclidean_at_right_angle(a, b):
    assert combine_axis_rates(a, b, math.pi / 2) == pytest.approx(math.hypot(a, b), rel=1e-12, abs=1e-12)


def test_combined_rate_matches_applied_vector():
    g = SequenceGeometry(bragg_order=5, T=0.18, comp_rate_yp=51.3e-6, comp_rate_xp=-22e-6)
    assert np.linalg.norm(applied_rotation(g)) == pytest.approx(
        combine_axis_rates(51.3e-6, 22e-6, g.axis_angle), rel=1e-12
    )
