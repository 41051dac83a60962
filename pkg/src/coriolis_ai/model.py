"""
Physical constants, atom species and sequence configuration records.

Everything here is SI. Values that the rest of the package derives (recoil
velocity, recoil frequency, Planck's constant from hbar) are computed on
access and never stored, so two objects built from the same inputs always
agree bit for bit.

Lab frame used throughout: x points west, y points south, z points up along
the interferometer laser at the first beam splitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "AtomSpecies",
    "SequenceGeometry",
    "LaunchState",
    "GeometryError",
    "cesium_species",
    "validate_geometry",
    "BERKELEY_LATITUDE",
    "MIRROR_AXIS_ANGLE",
    "MIRROR_AZIMUTH",
]

BERKELEY_LATITUDE = math.radians(37.87)
MIRROR_AXIS_ANGLE = math.radians(82.0)
# Orientation of the y' actuator axis relative to the horizontal projection of
# Earth's rotation axis; reproduces both measured single-axis optima.
MIRROR_AZIMUTH = math.radians(21.6)

CS133_MASS = 2.20694650e-25  # kg
CS_D2_WAVELENGTH = 852.347e-9  # m


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA-2010 level constants, in one place."""

    hbar: float = 1.054571726e-34
    boltzmann: float = 1.3806488e-23
    earth_rotation_rate: float = 7.2921150e-5
    standard_gravity: float = 9.80665

    def __post_init__(self):
        for name in ("hbar", "boltzmann", "standard_gravity"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        # zero is allowed so a non-rotating frame can be modelled
        if self.earth_rotation_rate < 0:
            raise ValueError("earth_rotation_rate must be non-negative")

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class AtomSpecies:
    """An atom of given mass interrogated with light of single-photon wavenumber k."""

    name: str
    mass: float
    wavenumber: float
    constants: PhysicalConstants = field(default=CONSTANTS, repr=False)

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if not self.wavenumber > 0:
            raise ValueError("wavenumber must be positive")

    @property
    def recoil_velocity(self) -> float:
        """v_r = hbar k / m, in m/s."""
        return self.constants.hbar * self.wavenumber / self.mass

    @property
    def recoil_rate(self) -> float:
        """omega_r = hbar k^2 / (2m), in rad/s."""
        return self.wavenumber * self.recoil_velocity / 2.0


def cesium_species(constants: PhysicalConstants = CONSTANTS) -> AtomSpecies:
    """Cesium-133 on the 852 nm D2 line."""
    return AtomSpecies("Cs133", CS133_MASS, 2.0 * math.pi / CS_D2_WAVELENGTH, constants)


class GeometryError(ValueError):
    """A SequenceGeometry field violates its invariant. ``field`` names it."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class SequenceGeometry:
    """
    Timing and orientation of one conjugate Ramsey-Borde sequence.

    Attributes
    ----------
    bragg_order : int
        n; each beam splitter transfers 2n photon momenta.
    T, T_prime : float
        Pulse separation times [s]: t1->t2 (and t3->t4) and t2->t3.
    final_pulse_delay : float
        Shift of the last pulse away from nominal closure [s].
    latitude : float
        Site latitude [rad].
    axis_angle : float
        Angle enclosed by the two tip-tilt actuator axes x', y' [rad].
    comp_rate_xp, comp_rate_yp : float
        Mirror rotation rates applied about x' and y' [rad/s]. A positive
        y' rate opposes the horizontal component of Earth's rotation; see
        :func:`coriolis_ai.kinematics.mirror_axes` for the x' sense.
    mirror_azimuth : float
        Angle of the y' axis away from the horizontal projection of Earth's
        rotation axis [rad].
    """

    bragg_order: int
    T: float
    T_prime: float = 0.0
    final_pulse_delay: float = 0.0
    latitude: float = BERKELEY_LATITUDE
    axis_angle: float = MIRROR_AXIS_ANGLE
    comp_rate_xp: float = 0.0
    comp_rate_yp: float = 0.0
    mirror_azimuth: float = MIRROR_AZIMUTH

    def replace(self, **changes) -> "SequenceGeometry":
        return replace(self, **changes)

    @property
    def momentum_order(self) -> int:
        """2n, the number of photon recoils per beam splitter."""
        return 2 * self.bragg_order


def validate_geometry(g: SequenceGeometry) -> None:
    """Raise :class:`GeometryError` naming the first field that is out of range."""
    if not isinstance(g.bragg_order, (int, np.integer)) or isinstance(g.bragg_order, bool):
        raise GeometryError("bragg_order", "must be an integer")
    if g.bragg_order < 1:
        raise GeometryError("bragg_order", f"must be >= 1, got {g.bragg_order}")
    if not g.T > 0:
        raise GeometryError("T", f"must be > 0, got {g.T}")
    if not g.T_prime >= 0:
        raise GeometryError("T_prime", f"must be >= 0, got {g.T_prime}")
    if not 0 < g.axis_angle < math.pi:
        raise GeometryError("axis_angle", f"must lie in (0, pi), got {g.axis_angle}")
    if not abs(g.latitude) <= math.pi / 2:
        raise GeometryError("latitude", f"must lie in [-pi/2, pi/2], got {g.latitude}")
    for name in ("final_pulse_delay", "comp_rate_xp", "comp_rate_yp", "mirror_azimuth"):
        if not math.isfinite(getattr(g, name)):
            raise GeometryError(name, "must be finite")


@dataclass(frozen=True)
class LaunchState:
    """Initial horizontal velocity (x west, y south) [m/s] and ensemble temperature [K]."""

    horizontal_velocity: tuple[float, float] = (0.0, 0.0)
    ensemble_temperature: float = 1.2e-6

    def __post_init__(self):
        if not self.ensemble_temperature > 0:
            raise ValueError("ensemble_temperature must be positive")

    @property
    def velocity(self) -> np.ndarray:
        vx, vy = self.horizontal_velocity
        return np.array([vx, vy, 0.0])
