import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from coriolis_ai import (
    CONSTANTS,
    AtomSpecies,
    GeometryError,
    LaunchState,
    PhysicalConstants,
    SequenceGeometry,
    cesium_species,
    validate_geometry,
)

from conftest import HBAR, K_CS, M_CS, V_R, W_R


def test_h_is_two_pi_hbar():
    assert CONSTANTS.h == pytest.approx(2 * math.pi * CONSTANTS.hbar, rel=1e-12)


def test_constants_positive():
    with pytest.raises(ValueError):
        PhysicalConstants(hbar=-1.0)
    with pytest.raises(ValueError):
        PhysicalConstants(standard_gravity=0.0)


def test_non_rotating_planet_allowed():
    assert PhysicalConstants(earth_rotation_rate=0.0).earth_rotation_rate == 0.0


def test_cesium_recoil_velocity(cs):
    assert cs.recoil_velocity == pytest.approx(V_R, rel=1e-12)
    assert cs.recoil_velocity == pytest.approx(3.52e-3, rel=2e-3)


def test_cesium_recoil_frequency(cs):
    assert cs.recoil_rate == pytest.approx(W_R, rel=1e-12)
    assert cs.recoil_rate / (2 * math.pi) == pytest.approx(2.07e3, rel=3e-3)


def test_packet_separation_at_250ms(cs):
    # 2n v_r T at 2n = 10
    assert 10 * cs.recoil_velocity * 0.25 == pytest.approx(8.8e-3, rel=2e-3)


def test_cesium_inputs(cs):
    assert cs.mass == M_CS
    assert cs.wavenumber == pytest.approx(K_CS, rel=1e-15)


@given(st.floats(1e-27, 1e-24), st.floats(1e6, 1e8))
def test_recoil_derived_bit_identically(mass, k):
    a = AtomSpecies("x", mass, k)
    b = AtomSpecies("x", mass, k)
    assert a.recoil_velocity == b.recoil_velocity == HBAR * k / mass
    assert a.recoil_rate == k * a.recoil_velocity / 2


def test_species_rejects_nonpositive():
    with pytest.raises(ValueError):
        AtomSpecies("x", 0.0, 1.0)
    with pytest.raises(ValueError):
        AtomSpecies("x", 1.0, -1.0)


def test_ten_recoil_geometry_valid():
    validate_geometry(SequenceGeometry(bragg_order=5, T=0.25, T_prime=0.002))


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"T": 0.0}, "T"),
        ({"T": -1.0}, "T"),
        ({"axis_angle": 0.0}, "axis_angle"),
        ({"axis_angle": math.pi}, "axis_angle"),
        ({"bragg_order": 0}, "bragg_order"),
        ({"bragg_order": 2.5}, "bragg_order"),
        ({"T_prime": -1e-3}, "T_prime"),
        ({"latitude": 2.0}, "latitude"),
        ({"comp_rate_yp": math.nan}, "comp_rate_yp"),
    ],
)
def test_invalid_geometry_names_field(changes, field):
    g = replace(SequenceGeometry(bragg_order=5, T=0.25), **changes)
    with pytest.raises(GeometryError) as info:
        validate_geometry(g)
    assert info.value.field == field
    assert field in str(info.value)


def test_geometry_replace_and_momentum_order():
    g = SequenceGeometry(bragg_order=5, T=0.25)
    assert g.momentum_order == 10
    assert g.replace(T=0.1).T == 0.1 and g.T == 0.25


def test_launch_state():
    s = LaunchState((0.01, -0.02), 1.2e-6)
    np.testing.assert_array_equal(s.velocity, [0.01, -0.02, 0.0])
    with pytest.raises(ValueError):
        LaunchState((0, 0), 0.0)


def test_species_uses_its_constants():
    c = PhysicalConstants(hbar=2 * CONSTANTS.hbar)
    assert cesium_species(c).recoil_velocity == pytest.approx(2 * V_R, rel=1e-12)
