"""
Gaussian wave packets with a diagonal width matrix.

    psi(x) = (det A / pi^3)^(1/4) exp(-x.A.x / 2),   A = diag(sigma_i^-2)

Free evolution is unitary, so the overlap of two such packets does not depend
on how long they have flown; only their relative displacement matters:

    <psi(r + delta) | psi(r)> = exp(-delta.A.delta / 4)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kinematics import ClosureVector
from .model import AtomSpecies

__all__ = [
    "WavePacket",
    "wavefunction",
    "overlap",
    "rate_contrast_factor",
    "effective_temperature",
    "sigma_from_temperature",
    "thermal_de_broglie",
    "velocity_selection_sigma",
]


@dataclass(frozen=True)
class WavePacket:
    """Principal-frame widths (sigma_x, sigma_y, sigma_z) [m], aligned with the lab axes."""

    sigma: tuple[float, float, float]

    def __post_init__(self):
        s = tuple(float(v) for v in self.sigma)
        if len(s) != 3:
            raise ValueError("sigma needs three components")
        if not all(v > 0 and math.isfinite(v) for v in s):
            raise ValueError(f"all widths must be positive, got {s}")
        object.__setattr__(self, "sigma", s)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(1.0 / np.square(self.sigma))


def wavefunction(packet: WavePacket, r: np.ndarray) -> np.ndarray:
    """Evaluate the normalized packet at points ``r`` of shape (..., 3)."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(packet.sigma)
    norm = (1.0 / (math.pi**3 * np.prod(s) ** 2)) ** 0.25
    return norm * np.exp(-0.5 * np.sum((r / s) ** 2, axis=-1))


def overlap(packet: WavePacket, delta: ClosureVector | np.ndarray) -> float:
    d = delta.delta if isinstance(delta, ClosureVector) else np.asarray(delta, dtype=float)
    return float(np.exp(-0.25 * np.sum((d / np.asarray(packet.sigma)) ** 2)))


def rate_contrast_factor(rate: float, sigma_rate: float) -> float:
    """exp(-rate^2 / (2 sigma_rate^2)): contrast loss written in rotation-rate units."""
    if not sigma_rate > 0:
        raise ValueError("sigma_rate must be positive")
    return math.exp(-(rate * rate) / (2.0 * sigma_rate * sigma_rate))


def effective_temperature(species: AtomSpecies, sigma_i: float) -> float:
    """
    Temperature-equivalent of one packet's momentum spread along one axis.

    From <p_i^2 / 2m> = hbar^2 / (2 m sigma_i^2) set equal to k_B T_i / 2.
    """
    if not sigma_i > 0:
        raise ValueError("sigma_i must be positive")
    c = species.constants
    return c.hbar**2 / (species.mass * c.boltzmann * sigma_i**2)


def sigma_from_temperature(species: AtomSpecies, temperature: float) -> float:
    """Inverse of :func:`effective_temperature`."""
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    c = species.constants
    return c.hbar / math.sqrt(species.mass * c.boltzmann * temperature)


def thermal_de_broglie(species: AtomSpecies, temperature: float) -> float:
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    c = species.constants
    return c.h / math.sqrt(2.0 * math.pi * species.mass * c.boltzmann * temperature)


def velocity_selection_sigma(species: AtomSpecies, pulse_sigma: float) -> float:
    """
    Vertical packet size set by a Gaussian velocity-selection pulse.

    ``pulse_sigma`` is the 1/sqrt(e) intensity duration of the pulse; the
    result is v_r * pulse_sigma / 2.
    """
    if pulse_sigma < 0:
        raise ValueError("pulse_sigma must be non-negative")
    return species.recoil_velocity * pulse_sigma / 2.0
