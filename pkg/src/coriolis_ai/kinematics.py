"""
Closure error of the interferometer in the inertial frame.

To first order in Earth's rotation rate, the laser direction rotates about
the horizontal projection of Earth's axis, so the momentum kicks at the second
and later beam splitters acquire a small horizontal component. The tip-tilt
mirror counter-rotates the laser; whatever horizontal rotation rate remains
(the residual) leaves the two wave packets displaced at the final pulse by

    delta = 4 n v_r T (T + T') * (z_hat x residual)

plus a vertical term 2 n v_r tau when the final pulse is delayed by tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CONSTANTS, AtomSpecies, PhysicalConstants, SequenceGeometry, validate_geometry

__all__ = [
    "ClosureVector",
    "RelativeVelocitySet",
    "MirrorAxes",
    "NORTH",
    "WEST",
    "UP",
    "mirror_axes",
    "applied_rotation",
    "earth_horizontal_rotation",
    "residual_rotation",
    "compensated_rate",
    "relative_velocities",
    "closure_error",
    "combine_axis_rates",
]

WEST = np.array([1.0, 0.0, 0.0])
NORTH = np.array([0.0, -1.0, 0.0])
UP = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class ClosureVector:
    """Wave-packet mismatch at the final pulse, lab frame (x west, y south, z up) [m]."""

    delta: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.delta, dtype=float).reshape(3)
        if not np.all(np.isfinite(d)):
            raise ValueError("closure vector must be finite")
        object.__setattr__(self, "delta", d)

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.delta))

    def __neg__(self) -> "ClosureVector":
        return ClosureVector(-self.delta)


@dataclass(frozen=True)
class RelativeVelocitySet:
    """Relative velocity of the two arms on [t1,t2], [t2,t3], [t3,t4], [t4,inf) [m/s]."""

    v12: np.ndarray
    v23: np.ndarray
    v34: np.ndarray
    v4inf: np.ndarray

    def displacement(self, T: float, T_prime: float) -> np.ndarray:
        """Integrate the piecewise-constant relative velocity up to the nominal final pulse."""
        return self.v12 * T + self.v23 * T_prime + self.v34 * T


@dataclass(frozen=True)
class MirrorAxes:
    """Unit vectors of the tip-tilt actuator axes x', y' in the horizontal plane."""

    axis_xp: np.ndarray
    axis_yp: np.ndarray

    @property
    def angle(self) -> float:
        c = float(np.clip(self.axis_xp @ self.axis_yp, -1.0, 1.0))
        return math.acos(c)


def _horizontal(angle: float) -> np.ndarray:
    # unit vector rotated by `angle` from north toward west
    return math.cos(angle) * NORTH + math.sin(angle) * WEST


def mirror_axes(geometry: SequenceGeometry) -> MirrorAxes:
    """
    Actuator axes for ``geometry``.

    The y' axis sits ``mirror_azimuth`` away from north, oriented so that a
    positive y' rate opposes Earth's horizontal rotation. The x' axis encloses
    ``axis_angle`` with it. A positive x' rate rotates the mirror about
    ``-axis_xp``, which is the convention under which :func:`combine_axis_rates`
    takes the x' optimum with its sign flipped.
    """
    yp = _horizontal(geometry.mirror_azimuth)
    xp = _horizontal(geometry.mirror_azimuth - geometry.axis_angle)
    return MirrorAxes(axis_xp=xp, axis_yp=yp)


def applied_rotation(geometry: SequenceGeometry) -> np.ndarray:
    """Rotation-rate vector [rad/s] that the mirror removes from the laser's motion."""
    axes = mirror_axes(geometry)
    return geometry.comp_rate_yp * axes.axis_yp - geometry.comp_rate_xp * axes.axis_xp


def earth_horizontal_rotation(latitude: float, constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    return constants.earth_rotation_rate * math.cos(latitude) * NORTH


def residual_rotation(geometry: SequenceGeometry, constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    """Horizontal rotation rate left after compensation [rad/s]."""
    return earth_horizontal_rotation(geometry.latitude, constants) - applied_rotation(geometry)


def compensated_rate(geometry: SequenceGeometry, constants: PhysicalConstants = CONSTANTS) -> float:
    """
    Effective rotation rate along Earth's horizontal axis after compensation,
    Omega_E cos(latitude) minus the projection of the applied mirror rotation.
    """
    validate_geometry(geometry)
    return float(residual_rotation(geometry, constants) @ NORTH)


def relative_velocities(
    species: AtomSpecies, geometry: SequenceGeometry, constants: PhysicalConstants | None = None
) -> RelativeVelocitySet:
    validate_geometry(geometry)
    constants = species.constants if constants is None else constants
    kick = geometry.momentum_order * species.recoil_velocity
    tilt = np.cross(UP, residual_rotation(geometry, constants))
    T, Tp = geometry.T, geometry.T_prime
    return RelativeVelocitySet(
        v12=kick * UP,
        v23=kick * T * tilt,
        v34=kick * ((2 * T + Tp) * tilt - UP),
        v4inf=np.zeros(3),
    )


def closure_error(
    species: AtomSpecies, geometry: SequenceGeometry, constants: PhysicalConstants | None = None
) -> ClosureVector:
    """Displacement between the interfering packets at the final pulse."""
    validate_geometry(geometry)
    constants = species.constants if constants is None else constants
    n = geometry.bragg_order
    v_r = species.recoil_velocity
    T, Tp = geometry.T, geometry.T_prime
    horizontal = 4 * n * v_r * T * (T + Tp) * np.cross(UP, residual_rotation(geometry, constants))
    vertical = 2 * n * v_r * geometry.final_pulse_delay * UP
    return ClosureVector(horizontal + vertical)


def combine_axis_rates(r1: float, r2: float, gamma: float) -> float:
    """Magnitude of r1 a1 + r2 a2 for unit axes a1, a2 enclosing angle gamma."""
    if not 0 < gamma < math.pi:
        raise ValueError(f"gamma must lie in (0, pi), got {gamma}")
    return math.sqrt(r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * math.cos(gamma))
