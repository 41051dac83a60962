"""
Experiment configuration files and built-in presets.

A config is a single ``[experiment]`` section of ``key = value`` lines. Every
dimensional key carries its unit in the name, and values are converted to SI
only when module-level objects are built::

    [experiment]
    bragg_order = 5
    T_ms = 130, 160, 180, 220, 250
    T_prime_ms = 2
    rate_xp_urad_per_s = -26.2
    scan_parameter = comp_rate_yp
    scan_urad_per_s = -250, 350, 15; -150, 250, 10; ...

Mirror rates scan in urad/s (``scan_urad_per_s`` or ``scan_values_urad_per_s``),
the final-pulse delay in us (``scan_us`` or ``scan_values_us``). A range is
``start, stop, step`` with both ends included; give one range for all T or one
per T separated by ``;``.

Sign convention: a positive y' rate opposes the horizontal component of
Earth's rotation. x' rates are counted so that the two single-axis optima
combine as sqrt(r_y^2 + r_x^2 - 2 r_y r_x cos(axis_angle)).
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .model import CONSTANTS, AtomSpecies, LaunchState, PhysicalConstants, SequenceGeometry, cesium_species
from .synth import DEFAULT_BASELINE_CONTRAST, SCAN_PARAMETERS, NoiseModel
from .wavepacket import WavePacket

__all__ = ["ConfigError", "ExperimentConfig", "PRESETS", "load_config", "preset", "scan_unit"]

SECTION = "experiment"
SPECIES = {"cesium": cesium_species}


class ConfigError(ValueError):
    """Invalid or unknown configuration entry."""


def scan_unit(parameter: str) -> tuple[str, float]:
    """(key suffix, factor to SI) for a scan parameter."""
    if parameter == "final_pulse_delay":
        return "us", 1e-6
    return "urad_per_s", 1e-6


@dataclass(frozen=True)
class ExperimentConfig:
    species: str = "cesium"
    bragg_order: int = 5
    T_ms: tuple[float, ...] = (250.0,)
    T_prime_ms: float = 2.0
    delay_us: float = 0.0
    latitude_deg: float = 37.87
    axis_angle_deg: float = 82.0
    mirror_azimuth_deg: float = 21.6
    rate_xp_urad_per_s: float = 0.0
    rate_yp_urad_per_s: float = 0.0
    earth_rate_urad_per_s: float = CONSTANTS.earth_rotation_rate * 1e6
    sigma_x_nm: float = 105.0
    sigma_y_nm: float = 86.0
    sigma_z_nm: float = 813.0
    detection_noise: float = 0.003
    baseline_contrast: tuple[tuple[float, float], ...] = tuple(
        (round(t * 1e3, 6), c) for t, c in sorted(DEFAULT_BASELINE_CONTRAST.items())
    )
    scan_parameter: str = "comp_rate_yp"
    scan_ranges: tuple[tuple[float, float, float], ...] = ()
    scan_values: tuple[float, ...] = ()
    shots_per_point: int = 100
    bin_size: int = 20
    width_convention: str = "amplitude"
    weighted_fit: bool = True
    seed: int = 1
    workers: int = 1
    out_dir: str = "out"
    v0_cm_per_s: tuple[float, float] = (1.0, 0.0)
    ensemble_temperature_uK: float = 1.2
    velocity_selection_us: float = 500.0
    sigma_rate_urad_per_s: float = 0.0
    mz_wavevector: str = "effective"
    compensation_residual: float = 0.017

    def __post_init__(self):
        self.validate()

    # ------------------------------------------------------------------ checks
    def validate(self) -> None:
        if self.species not in SPECIES:
            raise ConfigError(f"species: unknown {self.species!r}; choose from {sorted(SPECIES)}")
        if self.bragg_order < 1:
            raise ConfigError("bragg_order must be >= 1")
        if not self.T_ms or any(not t > 0 for t in self.T_ms):
            raise ConfigError("T_ms must list one or more positive values")
        if self.T_prime_ms < 0:
            raise ConfigError("T_prime_ms must be >= 0")
        if not 0 < self.axis_angle_deg < 180:
            raise ConfigError("axis_angle_deg must lie in (0, 180)")
        if abs(self.latitude_deg) > 90:
            raise ConfigError("latitude_deg must lie in [-90, 90]")
        if self.earth_rate_urad_per_s < 0:
            raise ConfigError("earth_rate_urad_per_s must be >= 0")
        if min(self.sigma_x_nm, self.sigma_y_nm, self.sigma_z_nm) <= 0:
            raise ConfigError("packet widths must be positive")
        if self.detection_noise < 0:
            raise ConfigError("detection_noise must be >= 0")
        if not self.baseline_contrast or any(not 0 < c <= 1 for _, c in self.baseline_contrast):
            raise ConfigError("baseline_contrast values must lie in (0, 1]")
        if self.scan_parameter not in SCAN_PARAMETERS:
            raise ConfigError(f"scan_parameter must be one of {SCAN_PARAMETERS}")
        if self.scan_ranges and self.scan_values:
            raise ConfigError("give either a scan range or explicit scan values, not both")
        if self.scan_ranges and len(self.scan_ranges) not in (1, len(self.T_ms)):
            raise ConfigError("give one scan range, or one per T_ms value")
        if self.shots_per_point < 0:
            raise ConfigError("shots_per_point must be >= 0")
        if self.bin_size < 6:
            raise ConfigError("bin_size must be >= 6")
        if self.width_convention not in ("amplitude", "intensity"):
            raise ConfigError("width_convention must be 'amplitude' or 'intensity'")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.ensemble_temperature_uK <= 0:
            raise ConfigError("ensemble_temperature_uK must be positive")
        if self.velocity_selection_us < 0 or self.sigma_rate_urad_per_s < 0:
            raise ConfigError("velocity_selection_us and sigma_rate_urad_per_s must be >= 0")
        if self.mz_wavevector not in ("effective", "single_photon"):
            raise ConfigError("mz_wavevector must be 'effective' or 'single_photon'")
        if len(self.v0_cm_per_s) != 2:
            raise ConfigError("v0_cm_per_s needs two components (west, south)")
        if self.compensation_residual < 0:
            raise ConfigError("compensation_residual must be >= 0")

    # ------------------------------------------------------- module-level objects
    @property
    def constants(self) -> PhysicalConstants:
        return replace(CONSTANTS, earth_rotation_rate=self.earth_rate_urad_per_s * 1e-6)

    def atom(self) -> AtomSpecies:
        return SPECIES[self.species](self.constants)

    def geometry(self, T_ms: float | None = None) -> SequenceGeometry:
        T_ms = self.T_ms[0] if T_ms is None else T_ms
        return SequenceGeometry(
            bragg_order=int(self.bragg_order),
            T=T_ms * 1e-3,
            T_prime=self.T_prime_ms * 1e-3,
            final_pulse_delay=self.delay_us * 1e-6,
            latitude=math.radians(self.latitude_deg),
            axis_angle=math.radians(self.axis_angle_deg),
            comp_rate_xp=self.rate_xp_urad_per_s * 1e-6,
            comp_rate_yp=self.rate_yp_urad_per_s * 1e-6,
            mirror_azimuth=math.radians(self.mirror_azimuth_deg),
        )

    def packet(self) -> WavePacket:
        return WavePacket((self.sigma_x_nm * 1e-9, self.sigma_y_nm * 1e-9, self.sigma_z_nm * 1e-9))

    def noise(self) -> NoiseModel:
        return NoiseModel(
            detection_noise_sigma=self.detection_noise,
            baseline_contrast={t * 1e-3: c for t, c in self.baseline_contrast},
        )

    def launch(self) -> LaunchState:
        v = self.v0_cm_per_s
        return LaunchState((v[0] * 1e-2, v[1] * 1e-2), self.ensemble_temperature_uK * 1e-6)

    def scan_points(self, index: int = 0) -> np.ndarray:
        """Scan values [SI] for the ``index``-th T."""
        _, factor = scan_unit(self.scan_parameter)
        if self.scan_values:
            return np.array(self.scan_values, dtype=float) * factor
        if not self.scan_ranges:
            raise ConfigError("no scan range configured")
        start, stop, step = self.scan_ranges[index if len(self.scan_ranges) > 1 else 0]
        if not step > 0 or stop < start:
            raise ConfigError(f"empty scan range {start}, {stop}, {step}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return (start + step * np.arange(n)) * factor

    # -------------------------------------------------------------- serialization
    def to_string(self) -> str:
        lines = [f"[{SECTION}]"]
        suffix, _ = scan_unit(self.scan_parameter)
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "scan_ranges":
                if value:
                    lines.append(f"scan_{suffix} = " + "; ".join(", ".join(_fmt(v) for v in r) for r in value))
                continue
            if f.name == "scan_values":
                if value:
                    lines.append(f"scan_values_{suffix} = " + ", ".join(_fmt(v) for v in value))
                continue
            if f.name == "baseline_contrast":
                lines.append(f"{f.name} = " + ", ".join(f"{_fmt(t)}:{_fmt(c)}" for t, c in value))
                continue
            lines.append(f"{f.name} = {_fmt(value)}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_string())

    @classmethod
    def from_string(cls, text: str, base: "ExperimentConfig | None" = None) -> "ExperimentConfig":
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as err:
            raise ConfigError(f"cannot parse config: {err}") from None
        extra = [s for s in parser.sections() if s != SECTION]
        if extra:
            raise ConfigError(f"unknown section(s) {extra}; expected [{SECTION}]")
        items = dict(parser.items(SECTION)) if parser.has_section(SECTION) else {}
        return cls.from_mapping(items, base)

    @classmethod
    def from_mapping(cls, items: dict, base: "ExperimentConfig | None" = None) -> "ExperimentConfig":
        base = base or cls()
        # scan ranges and values are only accepted under their unit-bearing keys
        known = {f.name for f in fields(cls)} - {"scan_ranges", "scan_values"}
        changes: dict = {}
        scan_keys = {}
        for key, raw in items.items():
            raw = str(raw).strip()
            if key.startswith("scan_") and key not in known:
                scan_keys[key] = raw
                continue
            if key not in known:
                raise ConfigError(f"unknown key {key!r}")
            try:
                changes[key] = _parse(key, raw, type(getattr(base, key)))
            except (TypeError, ValueError) as err:
                raise ConfigError(f"{key}: cannot parse {raw!r} ({err})") from None
        parameter = changes.get("scan_parameter", base.scan_parameter)
        suffix, _ = scan_unit(parameter)
        for key, raw in scan_keys.items():
            try:
                if key == f"scan_{suffix}":
                    changes["scan_ranges"] = _parse_ranges(raw)
                    changes.setdefault("scan_values", ())
                elif key == f"scan_values_{suffix}":
                    changes["scan_values"] = tuple(float(v) for v in raw.split(","))
                    changes.setdefault("scan_ranges", ())
                else:
                    raise ConfigError(f"unknown key {key!r} for scan_parameter {parameter!r} (units: {suffix})")
            except ValueError as err:
                if isinstance(err, ConfigError):
                    raise
                raise ConfigError(f"{key}: cannot parse {raw!r} ({err})") from None
        return replace(base, **changes)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def _parse(key: str, raw: str, kind: type):
    if key == "baseline_contrast":
        pairs = []
        for item in raw.split(","):
            t, c = item.split(":")
            pairs.append((float(t), float(c)))
        return tuple(sorted(pairs))
    if kind is bool:
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValueError("expected a boolean")
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    if kind is tuple:
        return tuple(float(v) for v in raw.split(","))
    return raw


def _parse_ranges(raw: str) -> tuple[tuple[float, float, float], ...]:
    ranges = []
    for part in raw.split(";"):
        values = tuple(float(v) for v in part.split(","))
        if len(values) != 3:
            raise ValueError("a range is 'start, stop, step'")
        ranges.append(values)
    return tuple(ranges)


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    return ExperimentConfig.from_string(text, base)


# Global optimum of both mirror rates for the default geometry, rounded.
_OPTIMUM_YP = 50.54
_OPTIMUM_XP = -21.40

PRESETS: dict[str, dict] = {
    "table1": {
        "T_ms": (130.0, 160.0, 180.0, 220.0, 250.0),
        "rate_xp_urad_per_s": -26.2,
        "scan_parameter": "comp_rate_yp",
        "scan_ranges": (
            (-250.0, 350.0, 15.0),
            (-150.0, 250.0, 10.0),
            (-120.0, 220.0, 8.5),
            (-50.0, 150.0, 5.0),
            (-30.0, 130.0, 4.0),
        ),
    },
    "fig3": {
        "T_ms": (180.0,),
        "rate_xp_urad_per_s": 0.0,
        "scan_parameter": "comp_rate_yp",
        "scan_values": (0.0, 50.2),
        "shots_per_point": 400,
    },
    "fig5-left": {
        "T_ms": (180.0,),
        "rate_yp_urad_per_s": 69.8,
        "scan_parameter": "comp_rate_xp",
        "scan_ranges": ((-150.0, 110.0, 6.5),),
    },
    "fig5-right": {
        "T_ms": (180.0,),
        "rate_xp_urad_per_s": _OPTIMUM_XP,
        "rate_yp_urad_per_s": _OPTIMUM_YP,
        "scan_parameter": "final_pulse_delay",
        "scan_ranges": ((-80.0, 80.0, 4.0),),
        "width_convention": "intensity",
    },
    "report": {
        "T_ms": (250.0,),
    },
}


def preset(name: str) -> ExperimentConfig:
    try:
        overrides = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(ExperimentConfig(), **overrides)
