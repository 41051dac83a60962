"""
Phase budget of a simultaneous conjugate Ramsey-Borde pair, and the
rotation-induced systematic of a Mach-Zehnder gravimeter.

Earth's rotation vector in the lab frame (x west, y south, z up) is taken as
Omega_E * (0, -cos(latitude), sin(latitude)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kinematics import UP
from .model import CONSTANTS, AtomSpecies, PhysicalConstants, SequenceGeometry, validate_geometry

__all__ = [
    "PhaseBudget",
    "conjugate_phases",
    "gravitational_area_phase",
    "earth_rotation_vector",
    "mach_zehnder_wavevector",
    "mach_zehnder_rotation_phase",
    "delta_g",
]


@dataclass(frozen=True)
class PhaseBudget:
    """
    Phases of the conjugate pair.

    The gravity (and vibration) term enters the two interferometers with
    opposite sign, so the lower one reads cos(recoil - gravity), which is
    cos(gravity - recoil). Against a common vibration phase the two fringes
    are therefore offset by recoil + recoil, and ``differential`` is that
    offset, 16 n^2 omega_r T, i.e. ``total_upper + total_lower``.
    """

    recoil_phase: float
    gravity_phase: float

    @property
    def total_upper(self) -> float:
        return self.recoil_phase + self.gravity_phase

    @property
    def total_lower(self) -> float:
        return self.recoil_phase - self.gravity_phase

    @property
    def differential(self) -> float:
        # 2 * recoil, computed directly so it carries no gravity rounding
        return 2.0 * self.recoil_phase

    def as_dict(self) -> dict:
        return {
            "recoil_phase_rad": self.recoil_phase,
            "gravity_phase_rad": self.gravity_phase,
            "total_upper_rad": self.total_upper,
            "total_lower_rad": self.total_lower,
            "differential_rad": self.differential,
        }


def conjugate_phases(species: AtomSpecies, geometry: SequenceGeometry, g: float | None = None) -> PhaseBudget:
    """
    Phases of the upper (+) and lower (-) interferometer:

        dphi(+/-) = 8 n^2 omega_r T  +/-  n k g T (T + T')
    """
    validate_geometry(geometry)
    if g is None:
        g = species.constants.standard_gravity
    if g < 0:
        raise ValueError("g must be non-negative")
    n, T, Tp = geometry.bragg_order, geometry.T, geometry.T_prime
    recoil = 8 * n * n * species.recoil_rate * T
    gravity = n * species.wavenumber * g * T * (T + Tp)
    return PhaseBudget(recoil_phase=recoil, gravity_phase=gravity)


def gravitational_area_phase(species: AtomSpecies, geometry: SequenceGeometry, g: float | None = None) -> float:
    """Space-time-area figure of merit 2 n k g T (T + T')."""
    validate_geometry(geometry)
    if g is None:
        g = species.constants.standard_gravity
    T, Tp = geometry.T, geometry.T_prime
    return geometry.momentum_order * species.wavenumber * g * T * (T + Tp)


def earth_rotation_vector(latitude: float, constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    return constants.earth_rotation_rate * np.array([0.0, -math.cos(latitude), math.sin(latitude)])


def _as_3vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).ravel()
    if v.shape == (2,):
        v = np.append(v, 0.0)
    if v.shape != (3,):
        raise ValueError("velocity must have 2 (horizontal) or 3 components")
    return v


def mach_zehnder_wavevector(species: AtomSpecies, convention: str = "effective", bragg_order: int = 1) -> float:
    """
    Magnitude of k entering the Mach-Zehnder rotation phase.

    ``"effective"`` uses the momentum transferred per beam splitter, 2 n k;
    ``"single_photon"`` uses k itself.
    """
    if convention == "effective":
        return 2 * bragg_order * species.wavenumber
    if convention == "single_photon":
        return species.wavenumber
    raise ValueError(f"unknown wavevector convention {convention!r}")


def mach_zehnder_rotation_phase(
    species: AtomSpecies,
    v0,
    T: float,
    latitude: float,
    *,
    convention: str = "effective",
    bragg_order: int = 1,
    constants: PhysicalConstants = CONSTANTS,
) -> float:
    """2 Omega_E . (v0 x k) T^2 for a vertical laser, k along +z."""
    if not T > 0:
        raise ValueError("T must be positive")
    k = mach_zehnder_wavevector(species, convention, bragg_order) * UP
    v0 = _as_3vector(v0)
    return float(2.0 * earth_rotation_vector(latitude, constants) @ np.cross(v0, k) * T * T)


def delta_g(v0, latitude: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Gravity bias 2 Omega_E . (v0 x z_hat) [m/s^2] of a Mach-Zehnder gravimeter."""
    v0 = _as_3vector(v0)
    return float(2.0 * earth_rotation_vector(latitude, constants) @ np.cross(v0, UP))
