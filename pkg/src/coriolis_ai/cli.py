"""
Command-line front end.

    coriolis-ai scan    --preset table1 --out out/
    coriolis-ai report  --preset report
    coriolis-ai analyze out/shots_T180ms.csv --preset fig5-left

Exit codes: 0 ok, 1 usage, 2 configuration, 3 numerical or fit failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    FitError,
    binned_contrast,
    fit_gaussian_scan,
    packet_sigma_from_delay_width,
    packet_sigma_from_scan_width,
    predicted_scan,
    shots_to_points,
)
from .config import ConfigError, ExperimentConfig, load_config, preset
from .ellipse import EllipseFitError, fit_ellipse
from .kinematics import closure_error, compensated_rate, residual_rotation
from .phases import conjugate_phases, delta_g, gravitational_area_phase, mach_zehnder_rotation_phase
from .synth import differential_phase, simulate_scan
from .tables import SCHEMA_VERSION, SchemaError, read_shots_csv, write_binned_csv, write_json, write_shots_csv
from .wavepacket import (
    effective_temperature,
    overlap,
    rate_contrast_factor,
    thermal_de_broglie,
    velocity_selection_sigma,
)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

SIGN_CONVENTION = (
    "Rates in urad/s. A positive y' rate opposes the horizontal component of Earth's rotation; "
    "x' rates are counted so the single-axis optima combine as "
    "sqrt(r_y^2 + r_x^2 - 2 r_y r_x cos(axis_angle))."
)


AREA_PHASE_FLAG = (
    "direct evaluation of the formula; the published 6.3e7 rad for 2n=10, T=250 ms "
    "is not reproduced with T'=2 ms (about 4.6e7 rad) and its T' is unstated"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="coriolis-ai",
        description="Coriolis compensation and wave-packet overlap in light-pulse atom interferometers.",
        epilog=SIGN_CONVENTION,
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", type=Path, help="key = value config file ([experiment] section)")
        p.add_argument("--preset", help="start from a built-in preset (table1, fig3, fig5-left, fig5-right, report)")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument("--unweighted-fit", action="store_true", help="fit contrast scans without error weights")

    p = sub.add_parser("scan", help="simulate a scan, bin contrasts and fit a Gaussian", epilog=SIGN_CONVENTION)
    common(p)
    p.add_argument("--shots", type=int, help="shots per scan point")
    p.add_argument("--workers", type=int, help="threads for shot generation")

    p = sub.add_parser("report", help="phase budget, closure error and systematics as JSON", epilog=SIGN_CONVENTION)
    common(p)

    p = sub.add_parser("analyze", help="bin and fit an existing shot table", epilog=SIGN_CONVENTION)
    common(p)
    p.add_argument("shots_csv", type=Path)
    p.add_argument("--t-ms", type=float, help="pulse separation T of the table, if the config lists several")
    return parser


def resolve_config(args) -> ExperimentConfig:
    cfg = preset(args.preset) if args.preset else ExperimentConfig()
    if args.config is not None:
        cfg = load_config(args.config, base=cfg)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.out is not None:
        changes["out_dir"] = str(args.out)
    if getattr(args, "shots", None) is not None:
        changes["shots_per_point"] = args.shots
    if getattr(args, "workers", None) is not None:
        changes["workers"] = args.workers
    if args.unweighted_fit:
        changes["weighted_fit"] = False
    return replace(cfg, **changes) if changes else cfg


def _metadata(cfg: ExperimentConfig, command: str) -> dict:
    return {
        "command": command,
        "version": __version__,
        "seed": cfg.seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _tag(T_ms: float) -> str:
    return f"T{T_ms:g}ms"


def analyze_groups(cfg: ExperimentConfig, T_ms: float, groups) -> dict:
    """Ellipse, binned-contrast and Gaussian-scan analysis of grouped shots."""
    species = cfg.atom()
    geometry = cfg.geometry(T_ms)
    parameter = cfg.scan_parameter
    points = []
    for value, shots in groups:
        pts = shots_to_points(shots)
        entry = {"parameter_value": float(value), "n_shots": len(pts)}
        try:
            entry["ellipse"] = fit_ellipse(pts).as_dict()
        except EllipseFitError as err:
            entry["ellipse"] = None
            entry["ellipse_error"] = str(err)
        points.append(entry)

    binned = binned_contrast([(v, shots_to_points(s)) for v, s in groups], cfg.bin_size)
    for entry, b in zip(points, binned):
        entry.update(contrast=b.contrast, stderr=b.stderr, n_bins=b.n_bins)

    record = {
        "schema_version": SCHEMA_VERSION,
        "parameter": parameter,
        "parameter_unit": "s" if parameter == "final_pulse_delay" else "rad/s",
        "T_s": geometry.T,
        "T_prime_s": geometry.T_prime,
        "bragg_order": geometry.bragg_order,
        "bin_size": cfg.bin_size,
        "points": points,
        "scan_fit": None,
        "packet_sigma_m": None,
    }
    if len(binned) >= 5:
        fit = fit_gaussian_scan(
            [b.parameter for b in binned],
            [b.contrast for b in binned],
            [b.stderr for b in binned] if cfg.weighted_fit else None,
            weighted=cfg.weighted_fit,
            width_convention=cfg.width_convention,
        )
        record["scan_fit"] = fit.as_dict()
        if parameter == "final_pulse_delay":
            record["packet_sigma_m"] = packet_sigma_from_delay_width(species, geometry, fit.width)
            record["packet_sigma_axis"] = "z"
        elif fit.width_convention == "amplitude":
            record["packet_sigma_m"] = packet_sigma_from_scan_width(species, geometry, fit.width)
            record["packet_sigma_axis"] = "x" if parameter == "comp_rate_yp" else "y"
    return record


def cmd_scan(cfg: ExperimentConfig) -> dict:
    species, packet, noise = cfg.atom(), cfg.packet(), cfg.noise()
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = {"schema_version": SCHEMA_VERSION, "scans": [], "metadata": _metadata(cfg, "scan")}
    for i, T_ms in enumerate(cfg.T_ms):
        geometry = cfg.geometry(T_ms)
        values = cfg.scan_points(i)
        log.info("T = %g ms: %d points x %d shots", T_ms, len(values), cfg.shots_per_point)
        scan = simulate_scan(
            species, geometry, packet, noise, cfg.scan_parameter, values, cfg.shots_per_point, (cfg.seed, i),
            workers=cfg.workers,
        )
        tag = _tag(T_ms)
        write_shots_csv(out / f"shots_{tag}.csv", scan)
        record = analyze_groups(cfg, T_ms, scan)
        write_binned_csv(
            out / f"binned_{tag}.csv",
            binned_contrast([(v, shots_to_points(s)) for v, s in scan], cfg.bin_size),
        )
        center, width, peak = predicted_scan(species, geometry, packet, cfg.scan_parameter, cfg.width_convention)
        record["model"] = {"center": center, "width": width, "peak_overlap": peak}
        record["metadata"] = _metadata(cfg, "scan")
        write_json(out / f"fit_{tag}.json", record)
        summary["scans"].append({k: v for k, v in record.items() if k not in ("points", "metadata")})
    cfg.save(out / "config.ini")
    write_json(out / "scan_summary.json", summary)
    return summary


def cmd_analyze(cfg: ExperimentConfig, csv_path: Path, T_ms: float | None = None) -> dict:
    if T_ms is None:
        if len(cfg.T_ms) != 1:
            raise ConfigError("config lists several T_ms values; pick one with --t-ms")
        T_ms = cfg.T_ms[0]
    groups = read_shots_csv(csv_path)
    record = analyze_groups(cfg, T_ms, groups)
    record["metadata"] = _metadata(cfg, "analyze")
    record["metadata"]["source"] = str(csv_path)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / f"analysis_{Path(csv_path).stem}.json", record)
    return record


def cmd_report(cfg: ExperimentConfig) -> dict:
    species, packet = cfg.atom(), cfg.packet()
    constants = species.constants
    geometry = cfg.geometry()
    launch = cfg.launch()
    g = constants.standard_gravity

    budget = conjugate_phases(species, geometry)
    delta = closure_error(species, geometry)
    uncompensated = closure_error(species, geometry.replace(comp_rate_xp=0.0, comp_rate_yp=0.0))
    omega_eff = compensated_rate(geometry, constants)
    T, Tp, n = geometry.T, geometry.T_prime, geometry.bragg_order
    geom_factor = 2 * math.sqrt(2) * n * species.recoil_velocity * T * (T + Tp)
    if cfg.sigma_rate_urad_per_s > 0:
        sigma_rate = cfg.sigma_rate_urad_per_s * 1e-6
    else:
        sigma_rate = packet.sigma[0] / geom_factor
    dg = delta_g(launch.velocity, geometry.latitude, constants)
    residual = np.linalg.norm(residual_rotation(geometry, constants))
    earth_h = constants.earth_rotation_rate * math.cos(geometry.latitude)

    return {
        "schema_version": SCHEMA_VERSION,
        "inputs": {
            "bragg_order": n,
            "T_s": T,
            "T_prime_s": Tp,
            "final_pulse_delay_s": geometry.final_pulse_delay,
            "latitude_rad": geometry.latitude,
            "comp_rate_xp_rad_per_s": geometry.comp_rate_xp,
            "comp_rate_yp_rad_per_s": geometry.comp_rate_yp,
            "packet_sigma_m": list(packet.sigma),
        },
        "species": {
            "name": species.name,
            "recoil_velocity_m_per_s": species.recoil_velocity,
            "recoil_frequency_hz": species.recoil_rate / (2 * math.pi),
            "packet_separation_m": geometry.momentum_order * species.recoil_velocity * T,
        },
        "phases": {
            **budget.as_dict(),
            "differential_mod_2pi_rad": differential_phase(species, geometry),
            "gravitational_area_phase_rad": gravitational_area_phase(species, geometry),
            "gravitational_area_phase_formula": "2 n k g T (T + T')",
            "gravitational_area_phase_flag": AREA_PHASE_FLAG,
        },
        "closure": {
            "effective_rate_rad_per_s": omega_eff,
            "residual_rotation_rad_per_s": float(residual),
            "closure_error_m": delta.delta,
            "closure_error_uncompensated_m": uncompensated.delta,
        },
        "contrast_factor": {
            "overlap": overlap(packet, delta),
            "overlap_uncompensated": overlap(packet, uncompensated),
            "rate_form_uncompensated": rate_contrast_factor(earth_h, sigma_rate),
            "rate_form_sigma_rad_per_s": sigma_rate,
        },
        "systematics": {
            "mz_wavevector_convention": cfg.mz_wavevector,
            "mz_rotation_phase_rad": mach_zehnder_rotation_phase(
                species, launch.velocity, T, geometry.latitude,
                convention=cfg.mz_wavevector, bragg_order=n, constants=constants,
            ),
            "delta_g_uncompensated_m_per_s2": dg,
            "delta_g_uncompensated_over_g": dg / g,
            "compensation_residual_fraction": cfg.compensation_residual,
            "delta_g_compensated_m_per_s2": dg * cfg.compensation_residual,
            "delta_g_compensated_over_g": dg * cfg.compensation_residual / g,
        },
        "packet": {
            "effective_temperature_K": [effective_temperature(species, s) for s in packet.sigma],
            "ensemble_temperature_K": launch.ensemble_temperature,
            "thermal_de_broglie_m": thermal_de_broglie(species, launch.ensemble_temperature),
            "velocity_selection_sigma_m": velocity_selection_sigma(species, cfg.velocity_selection_us * 1e-6),
        },
        "metadata": _metadata(cfg, "report"),
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "scan":
            summary = cmd_scan(cfg)
            print(json.dumps({"out_dir": cfg.out_dir, "scans": len(summary["scans"])}))
        elif args.command == "report":
            record = cmd_report(cfg)
            out = Path(cfg.out_dir) if args.out is not None else None
            if out is not None:
                out.mkdir(parents=True, exist_ok=True)
                write_json(out / "report.json", record)
            from .tables import _jsonable

            print(json.dumps(_jsonable(record), indent=2, sort_keys=True))
        elif args.command == "analyze":
            record = cmd_analyze(cfg, args.shots_csv, args.t_ms)
            print(json.dumps({"scan_fit": record["scan_fit"], "packet_sigma_m": record["packet_sigma_m"]}))
    except (ConfigError, SchemaError) as err:
        print(f"coriolis-ai: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (FitError, EllipseFitError, ValueError, FloatingPointError) as err:
        print(f"coriolis-ai: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
