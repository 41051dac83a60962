"""
From shots to physics: binned contrast, Gaussian scan fits, and conversion of
fitted scan widths into wave-packet sizes.

Two Gaussian width conventions are supported for scan fits:

``"amplitude"``
    contrast = offset + amplitude * exp(-(p - center)^2 / (2 width^2)).
    Used for rotation-rate scans; with the overlap model this gives
    sigma = 2 sqrt(2) n v_r T (T + T') sigma_rate.
``"intensity"``
    contrast = offset + amplitude * exp(-(p - center)^2 / (4 width^2)), so
    ``width`` is the 1/sqrt(e) half width of contrast squared. Used for
    final-pulse delay scans, where it gives sigma_z = 2 n v_r width.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass

import numpy as np
from scipy import optimize

from .ellipse import EllipseFitError, fit_ellipse
from .kinematics import closure_error
from .model import AtomSpecies, PhysicalConstants, SequenceGeometry, validate_geometry
from .synth import SCAN_PARAMETERS, ShotRecord
from .wavepacket import WavePacket

__all__ = [
    "FitError",
    "BinnedContrast",
    "ScanFit",
    "WIDTH_CONVENTIONS",
    "shots_to_points",
    "bin_contrasts",
    "binned_contrast",
    "gaussian_profile",
    "fit_gaussian_scan",
    "packet_sigma_from_scan_width",
    "packet_sigma_from_delay_width",
    "weighted_mean",
    "predicted_scan",
]

WIDTH_CONVENTIONS = {"amplitude": 2.0, "intensity": 4.0}


class FitError(RuntimeError):
    """A fit failed to converge, hit a singular Jacobian, or could not be formed."""


@dataclass(frozen=True)
class BinnedContrast:
    parameter: float
    contrast: float
    stderr: float
    n_bins: int


@dataclass(frozen=True)
class ScanFit:
    center: float
    width: float
    amplitude: float
    offset: float
    center_err: float
    width_err: float
    amplitude_err: float
    offset_err: float
    width_convention: str = "amplitude"
    weighted: bool = True
    chi2: float = float("nan")
    dof: int = 0
    covariance_scale: float = 1.0

    def as_dict(self) -> dict:
        return asdict(self)


def shots_to_points(shots: Sequence[ShotRecord] | np.ndarray) -> np.ndarray:
    if isinstance(shots, np.ndarray):
        return shots.reshape(-1, 2).astype(float)
    return np.array([(s.x, s.y) for s in shots], dtype=float).reshape(-1, 2)


def bin_contrasts(points: np.ndarray, bin_size: int = 20) -> np.ndarray:
    """Upper-interferometer fringe amplitude from an ellipse fit to each full bin."""
    n_bins = len(points) // bin_size
    out = np.empty(n_bins)
    for i in range(n_bins):
        out[i] = fit_ellipse(points[i * bin_size : (i + 1) * bin_size]).amplitude_x
    return out


def binned_contrast(groups, bin_size: int = 20) -> list[BinnedContrast]:
    """
    Contrast and standard error for each scan point.

    ``groups`` is a sequence of (parameter value, shots) where shots are
    :class:`ShotRecord` objects or an (N, 2) array of (x, y). Shots are split
    into consecutive bins of ``bin_size``; leftover shots are dropped. Each
    group needs at least two full bins.
    """
    if bin_size < 6:
        raise ValueError("bin_size must be >= 6 for an ellipse fit")
    result = []
    for value, shots in groups:
        points = shots_to_points(shots)
        n_bins = len(points) // bin_size
        if n_bins < 2:
            raise ValueError(
                f"parameter {value!r}: {len(points)} shots give {n_bins} bins of {bin_size}; need >= 2"
            )
        try:
            c = bin_contrasts(points, bin_size)
        except EllipseFitError as err:
            raise FitError(f"parameter {value!r}: ellipse fit failed: {err}") from err
        result.append(BinnedContrast(float(value), float(c.mean()), float(c.std(ddof=1) / math.sqrt(n_bins)), n_bins))
    return result


def gaussian_profile(p, center, width, amplitude, offset, width_convention: str = "amplitude"):
    k = WIDTH_CONVENTIONS[width_convention]
    p = np.asarray(p, dtype=float)
    return offset + amplitude * np.exp(-((p - center) ** 2) / (k * width * width))


def _initial_guess(p: np.ndarray, c: np.ndarray, width_convention: str) -> np.ndarray:
    i = int(np.argmax(c))
    offset = float(c.min())
    amplitude = float(c.max() - offset)
    above = p[c >= offset + amplitude / 2]
    fwhm = float(above.max() - above.min()) if above.size > 1 else 0.0
    if fwhm <= 0:
        fwhm = float(np.ptp(p)) / 4 or 1.0
    # half the FWHM for the amplitude convention
    width = fwhm / 2 if width_convention == "amplitude" else fwhm / (2 * math.sqrt(2))
    return np.array([p[i], width, amplitude, offset])


def fit_gaussian_scan(
    parameter,
    contrast,
    stderr=None,
    *,
    weighted: bool = True,
    width_convention: str = "amplitude",
    scale_covariance: bool = True,
    max_nfev: int = 5000,
) -> ScanFit:
    """
    Weighted Levenberg-Marquardt fit of a Gaussian plus offset.

    With ``weighted=True`` the residuals are divided by ``stderr`` and the
    parameter errors come from the inverse normal matrix. Standard errors
    estimated from a handful of bins are themselves noisy and tend to
    overweight lucky points, so by default the covariance is inflated by the
    reduced chi-square when that exceeds one; pass ``scale_covariance=False``
    for the bare absolute-sigma errors. With ``weighted=False`` every point
    counts equally and the covariance is always scaled by the reduced
    chi-square.
    """
    if width_convention not in WIDTH_CONVENTIONS:
        raise ValueError(f"unknown width convention {width_convention!r}")
    p = np.asarray(parameter, dtype=float)
    c = np.asarray(contrast, dtype=float)
    if p.shape != c.shape or p.ndim != 1:
        raise ValueError("parameter and contrast must be 1-D arrays of equal length")
    if len(p) < 5:
        raise ValueError(f"need at least 5 scan points, got {len(p)}")
    if weighted:
        if stderr is None:
            raise ValueError("weighted fit needs standard errors")
        s = np.asarray(stderr, dtype=float)
        if s.shape != p.shape or not np.all(s > 0):
            raise ValueError("standard errors must be positive, one per point")
    else:
        s = np.ones_like(p)

    def residuals(q):
        return (gaussian_profile(p, *q, width_convention) - c) / s

    x0 = _initial_guess(p, c, width_convention)
    try:
        res = optimize.least_squares(
            residuals, x0, method="lm", x_scale="jac", xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=max_nfev
        )
    except (ValueError, np.linalg.LinAlgError) as err:
        raise FitError(f"Gaussian fit failed: {err}") from err
    if res.status <= 0 or not np.all(np.isfinite(res.x)):
        raise FitError(f"Gaussian fit did not converge: {res.message}")

    center, width, amplitude, offset = res.x
    width = abs(width)
    J = res.jac
    JTJ = J.T @ J
    if not np.all(np.isfinite(JTJ)) or np.linalg.cond(JTJ) > 1e14:
        raise FitError("singular Jacobian at the Gaussian fit solution")
    cov = np.linalg.inv(JTJ)
    chi2 = float(np.sum(res.fun**2))
    dof = len(p) - 4
    reduced = chi2 / dof if dof > 0 else 0.0
    scale = 1.0
    if not weighted or (scale_covariance and reduced > 1.0):
        scale = reduced
    cov = cov * scale
    err = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    if amplitude < 0:
        raise FitError("Gaussian fit converged to a dip (negative amplitude)")
    return ScanFit(
        center=float(center),
        width=float(width),
        amplitude=float(amplitude),
        offset=float(offset),
        center_err=float(err[0]),
        width_err=float(err[1]),
        amplitude_err=float(err[2]),
        offset_err=float(err[3]),
        width_convention=width_convention,
        weighted=weighted,
        chi2=chi2,
        dof=dof,
        covariance_scale=scale,
    )


def packet_sigma_from_scan_width(species: AtomSpecies, geometry: SequenceGeometry, sigma_omega: float) -> float:
    """Packet width [m] from the amplitude-convention width of a rotation-rate scan [rad/s]."""
    validate_geometry(geometry)
    if not sigma_omega > 0:
        raise ValueError("sigma_omega must be positive")
    T, Tp = geometry.T, geometry.T_prime
    return 2 * math.sqrt(2) * geometry.bragg_order * species.recoil_velocity * T * (T + Tp) * sigma_omega


def packet_sigma_from_delay_width(species: AtomSpecies, geometry: SequenceGeometry, sigma_tau: float) -> float:
    """Vertical packet width [m] from the intensity-convention width of a delay scan [s]."""
    validate_geometry(geometry)
    if sigma_tau < 0:
        raise ValueError("sigma_tau must be non-negative")
    return geometry.momentum_order * species.recoil_velocity * sigma_tau


def weighted_mean(values, errors) -> tuple[float, float]:
    """Inverse-variance weighted mean and its standard error."""
    v = np.atleast_1d(np.asarray(values, dtype=float))
    e = np.atleast_1d(np.asarray(errors, dtype=float))
    if v.size == 0 or v.shape != e.shape:
        raise ValueError("need at least one value and one error per value")
    if not np.all(e > 0):
        raise ValueError("error bars must be positive")
    w = 1.0 / e**2
    return float(np.sum(w * v) / np.sum(w)), float(1.0 / math.sqrt(np.sum(w)))


def predicted_scan(
    species: AtomSpecies,
    geometry: SequenceGeometry,
    packet: WavePacket,
    parameter: str,
    width_convention: str = "amplitude",
    constants: PhysicalConstants | None = None,
) -> tuple[float, float, float]:
    """
    Noise-free overlap profile along one scan parameter.

    The closure error is affine in each scan parameter, so the overlap is an
    exact Gaussian in it. Returns (center, width, peak overlap) with the width
    in ``width_convention``. The other parameters stay at their values in
    ``geometry``.
    """
    if parameter not in SCAN_PARAMETERS:
        raise ValueError(f"unknown scan parameter {parameter!r}")
    d0 = closure_error(species, geometry.replace(**{parameter: 0.0}), constants).delta
    slope = closure_error(species, geometry.replace(**{parameter: 1.0}), constants).delta - d0
    A = packet.matrix
    curvature = float(slope @ A @ slope)
    if not curvature > 0:
        raise ValueError(f"overlap does not depend on {parameter}")
    center = -float(slope @ A @ d0) / curvature
    # exp(-curvature (p - center)^2 / 4) = exp(-(p - center)^2 / (k width^2))
    width = math.sqrt(4.0 / (WIDTH_CONVENTIONS[width_convention] * curvature))
    d_best = d0 + center * slope
    return center, width, float(np.exp(-0.25 * d_best @ A @ d_best))
