"""Eigenangle extraction, characteristic polynomial at 1, and excision."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from excised_rmt.groups import GroupKind, GroupMatrix, GroupSpec

_MODULUS_TOL = 1e-6


class SpectralError(RuntimeError):
    """Eigen-solve failure or tolerance breach."""


@dataclass(frozen=True)
class EigenangleSpectrum:
    """Sorted eigenangles in (-pi, pi] of one group matrix."""

    spec: GroupSpec
    angles: np.ndarray


@dataclass(frozen=True)
class CharPolyValue:
    """det(I - A) together with its magnitude."""

    value: complex
    magnitude: float


@dataclass(frozen=True)
class ExcisionRule:
    """Keep samples with |det(I - A)| >= c * exp((1 - k) * n_std / 2)."""

    c: float
    k: int
    n_std: float

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("cutoff constant c must be nonnegative")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("weight k must be an integer >= 1")

    @property
    def threshold(self) -> float:
        return self.c * math.exp((1.0 - self.k) * self.n_std / 2.0)


def _canonical_angles(w: np.ndarray) -> np.ndarray:
    """Project eigenvalues radially to the unit circle and take angles.

    Ties at -pi are mapped to +pi so every angle lies in (-pi, pi].
    """
    mod = np.abs(w)
    drift = np.max(np.abs(mod - 1.0))
    if drift > _MODULUS_TOL:
        raise SpectralError(f"eigenvalue modulus drifted from 1 by {drift:.3e}")
    theta = np.arctan2(w.imag, w.real)
    return np.where(theta <= -np.pi, np.pi, theta)


def _symmetrize(theta: np.ndarray, forced_zero: bool) -> np.ndarray:
    """Enforce the theta -> -theta symmetry on a batch of angle rows.

    Angles are ranked by magnitude; for odd orthogonal matrices the
    smallest-magnitude angle is the structural zero and is pinned to 0
    exactly.  The remaining angles are paired consecutively and each pair
    is replaced by +/- the mean magnitude.
    """
    mags = np.sort(np.abs(theta), axis=1)
    if forced_zero:
        mags = mags[:, 1:]
    paired = 0.5 * (mags[:, 0::2] + mags[:, 1::2])
    parts = [-paired, paired]
    if forced_zero:
        parts.append(np.zeros((theta.shape[0], 1)))
    out = np.concatenate(parts, axis=1)
    # a pair of angles exactly at pi averages to pi; its negative copy
    # belongs at +pi in the canonical branch
    out = np.where(out <= -np.pi, np.pi, out)
    out.sort(axis=1)
    return out


def eigenangles_batch(spec: GroupSpec, mats: np.ndarray) -> np.ndarray:
    """Eigenangles for a (B, dim, dim) stack; returns (B, dim) sorted rows."""
    w = np.linalg.eigvals(mats)
    theta = _canonical_angles(w)
    if spec.group is GroupKind.Unitary:
        theta.sort(axis=1)
        return theta
    return _symmetrize(theta, forced_zero=spec.group is GroupKind.SOOdd)


def eigenangles(a: GroupMatrix) -> EigenangleSpectrum:
    angles = eigenangles_batch(a.spec, a.entries[None, :, :])[0]
    return EigenangleSpectrum(spec=a.spec, angles=angles)


def char_poly_batch(
    mats: np.ndarray, check: bool = True, rel_tol: float = 1e-6, abs_tol: float = 1e-9
) -> np.ndarray:
    """det(I - A) for a stack of matrices, via LU with a product cross-check.

    The LU value is authoritative; the spectral product over (1 - e^{i
    theta_j}) must agree within relative rel_tol (plus a small absolute
    floor for the structurally singular odd orthogonal case).
    """
    dim = mats.shape[-1]
    eye = np.eye(dim, dtype=mats.dtype)
    lu = np.linalg.det(eye[None, :, :] - mats)
    if check:
        w = np.linalg.eigvals(mats)
        w = w / np.abs(w)
        prod = np.prod(1.0 - w, axis=1)
        gap = np.abs(lu - prod)
        allow = rel_tol * np.maximum(np.abs(lu), np.abs(prod)) + abs_tol
        if np.any(gap > allow):
            worst = int(np.argmax(gap - allow))
            raise SpectralError(
                "characteristic polynomial cross-check failed: "
                f"LU={lu[worst]!r} product={prod[worst]!r}"
            )
    return lu


def char_poly_at_one(a: GroupMatrix) -> CharPolyValue:
    value = complex(char_poly_batch(a.entries[None, :, :])[0])
    return CharPolyValue(value=value, magnitude=abs(value))


def first_eigenangle(
    s: EigenangleSpectrum, exclude_forced_zero: bool = False
) -> Optional[float]:
    """Smallest strictly positive angle, or None if there is none.

    With exclude_forced_zero on an odd orthogonal spectrum the structural
    zero (identified by index of smallest magnitude, not by a threshold)
    is removed first; since that angle sits at exactly 0 it is never
    positive, so the flag only matters for callers who treat the zero as a
    reportable lowest angle.
    """
    angles = s.angles
    if s.spec.group is GroupKind.SOOdd and exclude_forced_zero:
        idx = int(np.argmin(np.abs(angles)))
        angles = np.delete(angles, idx)
    positive = angles[angles > 0.0]
    if positive.size == 0:
        return None
    return float(positive.min())


def first_angles_batch(angle_rows: np.ndarray) -> np.ndarray:
    """Smallest strictly positive angle per row; rows without one get NaN."""
    masked = np.where(angle_rows > 0.0, angle_rows, np.inf)
    out = masked.min(axis=1)
    return np.where(np.isinf(out), np.nan, out)


def excise(
    values: Iterable[Tuple[CharPolyValue, object]], rule: ExcisionRule
) -> Tuple[list, int, int]:
    """Filter a stream of (CharPolyValue, payload) by the excision threshold.

    Returns (kept_items, kept_count, total_count); kept items satisfy
    magnitude >= threshold exactly.
    """
    threshold = rule.threshold
    kept = []
    total = 0
    for cpv, payload in values:
        total += 1
        if cpv.magnitude >= threshold:
            kept.append((cpv, payload))
    return kept, len(kept), total


def excise_mask(magnitudes: np.ndarray, rule: ExcisionRule) -> np.ndarray:
    """Boolean keep-mask for an array of |det(I - A)| magnitudes."""
    return np.asarray(magnitudes) >= rule.threshold
