"""
Monte-Carlo shot generator for a pair of simultaneous conjugate interferometers.

Each shot draws one vibration phase common to both interferometers. The
normalized population differences are

    x = c cos(phi),     y = c cos(phi + d),

with d = 16 n^2 omega_r T the differential recoil phase and c the fringe
contrast, i.e. the baseline contrast at perfect overlap times the wave-packet
overlap at the final pulse. Plotting y against x traces an ellipse whose
shape encodes d.

Randomness for shot j of scan point i comes from a generator seeded with
(seed, i, j), so results do not depend on how the work is split across
threads. Scans that must be statistically independent of each other (one per
T in a multi-T run, say) take a tuple seed such as (seed, t_index).
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .kinematics import closure_error
from .model import AtomSpecies, PhysicalConstants, SequenceGeometry, validate_geometry
from .wavepacket import WavePacket, overlap

__all__ = [
    "DEFAULT_BASELINE_CONTRAST",
    "SCAN_PARAMETERS",
    "NoiseModel",
    "ShotRecord",
    "shot_rng",
    "differential_phase",
    "fringe_contrast",
    "simulate_shot",
    "simulate_scan",
]

# Peak contrast at perfect overlap for T = 130 ... 250 ms, read off the
# published contrast-vs-rotation scans. Non-normative.
DEFAULT_BASELINE_CONTRAST = {0.130: 0.40, 0.160: 0.33, 0.180: 0.27, 0.220: 0.21, 0.250: 0.17}

SCAN_PARAMETERS = ("comp_rate_xp", "comp_rate_yp", "final_pulse_delay")


def _uniform_phase(rng: np.random.Generator) -> float:
    return rng.uniform(0.0, 2.0 * math.pi)


@dataclass(frozen=True)
class NoiseModel:
    """
    Shot-noise configuration.

    ``baseline_contrast`` is either a constant, a mapping T [s] -> contrast
    (linearly interpolated, clamped at the ends), or a callable of T.
    ``detection_noise_sigma`` is additive Gaussian noise on each normalized
    population. The 0.003 default is roughly atom shot noise for a few 1e4
    detected atoms; it is a placeholder, not a measured value. Larger values
    bias the ellipse-projection contrast upward near zero contrast, which
    narrows fitted scan widths.
    """

    detection_noise_sigma: float = 0.003
    baseline_contrast: float | Mapping[float, float] | Callable[[float], float] = field(
        default_factory=lambda: dict(DEFAULT_BASELINE_CONTRAST)
    )
    vibration_phase: Callable[[np.random.Generator], float] = field(default=_uniform_phase, repr=False)

    def __post_init__(self):
        if not self.detection_noise_sigma >= 0:
            raise ValueError("detection_noise_sigma must be >= 0")
        if isinstance(self.baseline_contrast, Mapping):
            for v in self.baseline_contrast.values():
                self._check_contrast(v)
        elif not callable(self.baseline_contrast):
            self._check_contrast(self.baseline_contrast)

    @staticmethod
    def _check_contrast(value: float) -> None:
        if not 0 < value <= 1:
            raise ValueError(f"baseline contrast must lie in (0, 1], got {value}")

    def baseline(self, T: float) -> float:
        b = self.baseline_contrast
        if isinstance(b, Mapping):
            ts = np.array(sorted(b))
            value = float(np.interp(T, ts, [b[t] for t in ts]))
        elif callable(b):
            value = float(b(T))
        else:
            value = float(b)
        self._check_contrast(value)
        return value


@dataclass(frozen=True)
class ShotRecord:
    """Normalized output populations A, B (upper) and C, D (lower) of one shot."""

    pop_a: float
    pop_b: float
    pop_c: float
    pop_d: float

    @property
    def x(self) -> float:
        return _difference(self.pop_a, self.pop_b)

    @property
    def y(self) -> float:
        return _difference(self.pop_c, self.pop_d)


def _difference(p: float, q: float) -> float:
    s = p + q
    return 0.0 if s == 0 else (p - q) / s


def shot_rng(seed: int | Sequence[int], point_index: int, shot_index: int) -> np.random.Generator:
    """Generator for one shot. ``seed`` may be a tuple to give independent scans their own streams."""
    key = [seed] if isinstance(seed, (int, np.integer)) else list(seed)
    return np.random.default_rng([*key, point_index, shot_index])


def differential_phase(species: AtomSpecies, geometry: SequenceGeometry) -> float:
    """16 n^2 omega_r T reduced to [0, 2 pi)."""
    n = geometry.bragg_order
    return math.fmod(16 * n * n * species.recoil_rate * geometry.T, 2.0 * math.pi)


def fringe_contrast(
    species: AtomSpecies,
    geometry: SequenceGeometry,
    packet: WavePacket,
    noise: NoiseModel,
    constants: PhysicalConstants | None = None,
) -> float:
    return noise.baseline(geometry.T) * overlap(packet, closure_error(species, geometry, constants))


def _draw(contrast: float, d: float, noise: NoiseModel, rng: np.random.Generator) -> ShotRecord:
    phi = noise.vibration_phase(rng)
    x = contrast * math.cos(phi)
    y = contrast * math.cos(phi + d)
    pops = np.array([(1 + x) / 2, (1 - x) / 2, (1 + y) / 2, (1 - y) / 2])
    if noise.detection_noise_sigma > 0:
        pops = pops + rng.normal(0.0, noise.detection_noise_sigma, 4)
    pops = np.clip(pops, 0.0, 1.0)
    return ShotRecord(*(float(p) for p in pops))


def simulate_shot(
    species: AtomSpecies,
    geometry: SequenceGeometry,
    packet: WavePacket,
    noise: NoiseModel,
    rng: np.random.Generator | int | Sequence[int],
    constants: PhysicalConstants | None = None,
) -> ShotRecord:
    validate_geometry(geometry)
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    c = fringe_contrast(species, geometry, packet, noise, constants)
    return _draw(c, differential_phase(species, geometry), noise, rng)


def simulate_scan(
    species: AtomSpecies,
    geometry: SequenceGeometry,
    packet: WavePacket,
    noise: NoiseModel,
    parameter: str,
    values: Sequence[float],
    shots_per_point: int,
    seed: int | Sequence[int],
    *,
    workers: int = 1,
    constants: PhysicalConstants | None = None,
) -> list[tuple[float, list[ShotRecord]]]:
    """
    Simulate ``shots_per_point`` shots at each value of ``parameter``.

    ``parameter`` is one of :data:`SCAN_PARAMETERS`; values are SI (rad/s or s).
    """
    if parameter not in SCAN_PARAMETERS:
        raise ValueError(f"unknown scan parameter {parameter!r}; expected one of {SCAN_PARAMETERS}")
    if shots_per_point < 0:
        raise ValueError("shots_per_point must be >= 0")
    validate_geometry(geometry)
    values = [float(v) for v in values]

    def run_point(i: int) -> tuple[float, list[ShotRecord]]:
        g = geometry.replace(**{parameter: values[i]})
        c = fringe_contrast(species, g, packet, noise, constants)
        d = differential_phase(species, g)
        return values[i], [_draw(c, d, noise, shot_rng(seed, i, j)) for j in range(shots_per_point)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_point, range(len(values))))
    return [run_point(i) for i in range(len(values))]
