"""
Direct least-squares ellipse fit for conjugate-interferometer readout.

The conic a x^2 + b xy + c y^2 + d x + e y + f = 0 is fit algebraically under
the constraint 4ac - b^2 = 1, which admits only ellipses (Fitzgibbon, Pilu &
Fisher 1999, in the numerically stable form of Halir & Flusser 1998). The
data are centered and scaled before the fit and the conic is mapped back.

For points x = A cos(t), y = B cos(t + phi) about some center, the centered
conic satisfies cos(phi) = -b / (2 sqrt(ac)). The ellipse cannot tell phi from
2 pi - phi, so the recovered phase lies in (0, pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["EllipseFit", "EllipseFitError", "fit_ellipse", "conic_residuals"]


class EllipseFitError(ValueError):
    """Input cannot be fit by an ellipse (too few points, degenerate, or not an ellipse)."""


@dataclass(frozen=True)
class EllipseFit:
    """
    Fitted ellipse.

    ``coefficients`` is (a, b, c, d, e, f), unit norm, sign chosen so a > 0.
    ``contrast_x`` and ``contrast_y`` are the full lengths of the projection of
    the ellipse onto each axis (peak to peak); the fringe amplitude of each
    interferometer is half of that.
    """

    coefficients: np.ndarray
    center: np.ndarray
    contrast_x: float
    contrast_y: float
    differential_phase: float

    @property
    def amplitude_x(self) -> float:
        return self.contrast_x / 2.0

    @property
    def amplitude_y(self) -> float:
        return self.contrast_y / 2.0

    @property
    def discriminant(self) -> float:
        a, b, c = self.coefficients[:3]
        return b * b - 4 * a * c

    def as_dict(self) -> dict:
        return {
            "coefficients": [float(v) for v in self.coefficients],
            "center": [float(v) for v in self.center],
            "contrast_x": self.contrast_x,
            "contrast_y": self.contrast_y,
            "differential_phase_rad": self.differential_phase,
        }


def _direct_fit(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    D1 = np.column_stack((u * u, u * v, v * v))
    D2 = np.column_stack((u, v, np.ones_like(u)))
    S1 = D1.T @ D1
    S2 = D1.T @ D2
    S3 = D2.T @ D2
    if np.linalg.cond(S3) > 1e12:
        raise EllipseFitError("points are degenerate (collinear or coincident)")
    T = -np.linalg.solve(S3, S2.T)
    reduced = S1 + S2 @ T
    # premultiply by the inverse of the 3x3 constraint block
    M = np.vstack([reduced[2] / 2.0, -reduced[1], reduced[0] / 2.0])
    evals, evecs = np.linalg.eig(M)
    evecs = np.real(evecs)
    constraint = 4 * evecs[0] * evecs[2] - evecs[1] ** 2
    candidates = np.flatnonzero(constraint > 0)
    if candidates.size == 0:
        raise EllipseFitError("no elliptical solution")
    if candidates.size > 1:
        # near-exact data: keep the smallest algebraic residual per unit constraint
        cost = [abs(evecs[:, i] @ reduced @ evecs[:, i]) / constraint[i] for i in candidates]
        candidates = candidates[[int(np.argmin(cost))]]
    a1 = evecs[:, candidates[0]]
    return np.concatenate((a1, T @ a1))


def _unscale(coef: np.ndarray, mx: float, my: float, sx: float, sy: float) -> np.ndarray:
    # conic in u=(x-mx)/sx, v=(y-my)/sy  ->  conic in x, y
    a, b, c, d, e, f = coef
    A = a / sx**2
    B = b / (sx * sy)
    C = c / sy**2
    D = d / sx
    E = e / sy
    return np.array(
        [
            A,
            B,
            C,
            D - 2 * A * mx - B * my,
            E - 2 * C * my - B * mx,
            A * mx * mx + B * mx * my + C * my * my - D * mx - E * my + f,
        ]
    )


def conic_residuals(coefficients, points) -> np.ndarray:
    """Algebraic residual of each point under the conic."""
    a, b, c, d, e, f = coefficients
    x, y = np.asarray(points, dtype=float).T
    return a * x * x + b * x * y + c * y * y + d * x + e * y + f


def fit_ellipse(points) -> EllipseFit:
    """
    Fit an ellipse to ``points`` of shape (N, 2), N >= 6.

    Raises :class:`EllipseFitError` on too few points, degenerate input, or
    when no proper ellipse results.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise EllipseFitError(f"expected an (N, 2) array of points, got shape {pts.shape}")
    if len(pts) < 6:
        raise EllipseFitError(f"need at least 6 points, got {len(pts)}")
    if not np.all(np.isfinite(pts)):
        raise EllipseFitError("points must be finite")
    mx, my = pts.mean(axis=0)
    sx, sy = pts.std(axis=0)
    if sx == 0 or sy == 0:
        raise EllipseFitError("points are degenerate (zero spread along an axis)")
    u = (pts[:, 0] - mx) / sx
    v = (pts[:, 1] - my) / sy

    coef = _unscale(_direct_fit(u, v), mx, my, sx, sy)
    coef = coef / np.linalg.norm(coef)
    if coef[0] < 0:
        coef = -coef
    a, b, c, d, e, f = coef
    det = 4 * a * c - b * b
    if not det > 0:
        raise EllipseFitError("fitted conic is not an ellipse")
    x0, y0 = np.linalg.solve([[2 * a, b], [b, 2 * c]], [-d, -e])
    k = -(a * x0 * x0 + b * x0 * y0 + c * y0 * y0 + d * x0 + e * y0 + f)
    if not k > 0:
        raise EllipseFitError("fitted conic is an imaginary ellipse")
    half_x = math.sqrt(4 * k * c / det)
    half_y = math.sqrt(4 * k * a / det)
    cos_phi = float(np.clip(-b / (2 * math.sqrt(a * c)), -1.0, 1.0))
    return EllipseFit(
        coefficients=coef,
        center=np.array([x0, y0]),
        contrast_x=2 * half_x,
        contrast_y=2 * half_y,
        differential_phase=math.acos(cos_phi),
    )
