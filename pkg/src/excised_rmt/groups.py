"""Reproducible Haar-measure sampling from the four classical compact groups.

Sampling recipes:

- U(N): complex Ginibre matrix -> QR; each column of Q divided by the phase
  of the matching R diagonal entry so R has positive real diagonal.
- SO(n): real Ginibre -> QR with sign correction; if det = -1 the last
  column is negated to land on the det = +1 component.
- USp(2N): quaternionic Ginibre -> quaternionic modified Gram-Schmidt
  (quaternions stored as pairs of complex numbers, i.e. 2x2 complex
  blocks), embedded as a 2Nx2N complex matrix preserving the skew form
  J = [[0, I], [-I, 0]].

All randomness is a pure function of (master_seed, sample_index): each
sample owns a counter-based Philox stream and Gaussians come from
Box-Muller, so results are identical regardless of scheduling or worker
count.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


class GroupKind(enum.Enum):
    SOEven = "so_even"
    SOOdd = "so_odd"
    USp = "usp"
    Unitary = "unitary"


@dataclass(frozen=True)
class GroupSpec:
    """A compact group choice plus its half-size parameter N."""

    group: GroupKind
    n: int

    def __post_init__(self):
        if not isinstance(self.group, GroupKind):
            raise TypeError("group must be a GroupKind")
        if int(self.n) < 1 or int(self.n) != self.n:
            raise ValueError("half-size N must be a positive integer")

    @property
    def dim(self) -> int:
        if self.group is GroupKind.SOEven:
            return 2 * self.n
        if self.group is GroupKind.SOOdd:
            return 2 * self.n + 1
        if self.group is GroupKind.USp:
            return 2 * self.n
        return self.n


@dataclass(frozen=True)
class SeedSpec:
    """Addresses one sample in a reproducible stream."""

    master_seed: int
    sample_index: int


class GroupInvariantError(RuntimeError):
    """A constructed matrix failed its group invariants (internal defect)."""


@dataclass(frozen=True)
class GroupMatrix:
    spec: GroupSpec
    entries: np.ndarray  # complex128, shape (dim, dim)


def symplectic_form(n: int) -> np.ndarray:
    """The skew form J with blocks [[0, I_n], [-I_n, 0]]."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def _generator(master_seed: int, sample_index: int) -> np.random.Generator:
    key = (int(master_seed) & _MASK64) | ((int(sample_index) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def _gaussians(gen: np.random.Generator, count: int) -> np.ndarray:
    """Standard normals via Box-Muller on counter-based uniforms."""
    pairs = (count + 1) // 2
    u1 = gen.random(pairs)
    u2 = gen.random(pairs)
    # 1 - u1 lies in (0, 1], keeping the logarithm finite.
    r = np.sqrt(-2.0 * np.log1p(-u1))
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(2.0 * np.pi * u2)
    z[1::2] = r * np.sin(2.0 * np.pi * u2)
    return z[:count]


def _gaussian_count(spec: GroupSpec) -> int:
    d = spec.dim
    if spec.group in (GroupKind.SOEven, GroupKind.SOOdd):
        return d * d
    if spec.group is GroupKind.Unitary:
        return 2 * d * d
    return 4 * spec.n * spec.n  # quaternionic: two complex matrices of size N


def _unitary_from_ginibre(z: np.ndarray) -> np.ndarray:
    """Batched QR with phase correction; z has shape (B, n, n)."""
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1).copy()
    mod = np.abs(d)
    mod[mod == 0.0] = 1.0
    phase = d / mod
    if np.iscomplexobj(z):
        q = q * np.conj(phase)[:, None, :]
    else:
        q = q * np.sign(np.where(phase == 0.0, 1.0, phase))[:, None, :]
    return q


def _so_batch(dim: int, g: np.ndarray) -> np.ndarray:
    q = _unitary_from_ginibre(g.reshape(-1, dim, dim))
    det = np.linalg.det(q)
    flip = det < 0.0
    q[flip, :, -1] = -q[flip, :, -1]
    return q


def _quaternion_mgs(x: np.ndarray, y: np.ndarray) -> None:
    """In-place quaternionic modified Gram-Schmidt over columns.

    A quaternion q = a + b j is stored as the complex pair (a, b); column c
    of the quaternionic matrix is (x[:, :, c], y[:, :, c]).  The diagonal
    of the implicit R is real and positive, which is exactly the phase
    convention that makes the QR map Haar-distributed.
    """
    ncols = x.shape[-1]
    for c in range(ncols):
        a = x[:, :, c]
        b = y[:, :, c]
        for _ in range(2):  # one re-orthogonalization pass for tight tolerance
            for d in range(c):
                u = x[:, :, d]
                v = y[:, :, d]
                # quaternionic inner product <u, w> accumulated per entry:
                # conj(u_i) * w_i = (conj(u)a + v conj(b), conj(u)b - v conj(a))
                sa = np.sum(np.conj(u) * a + v * np.conj(b), axis=1)
                sb = np.sum(np.conj(u) * b - v * np.conj(a), axis=1)
                a -= u * sa[:, None] - v * np.conj(sb)[:, None]
                b -= u * sb[:, None] + v * np.conj(sa)[:, None]
        norm = np.sqrt(np.sum(np.abs(a) ** 2 + np.abs(b) ** 2, axis=1))
        a /= norm[:, None]
        b /= norm[:, None]


def _usp_batch(n: int, g: np.ndarray) -> np.ndarray:
    batch = g.shape[0]
    g = g.reshape(batch, 4, n, n)
    x = (g[:, 0] + 1j * g[:, 1]).copy()
    y = (g[:, 2] + 1j * g[:, 3]).copy()
    _quaternion_mgs(x, y)
    u = np.empty((batch, 2 * n, 2 * n), dtype=np.complex128)
    u[:, :n, :n] = x
    u[:, :n, n:] = y
    u[:, n:, :n] = -np.conj(y)
    u[:, n:, n:] = np.conj(x)
    return u


def sample_batch(spec: GroupSpec, master_seed: int, start: int, count: int) -> np.ndarray:
    """Samples `count` matrices for indices start..start+count-1.

    Returns a (count, dim, dim) array; real dtype for the SO groups,
    complex128 otherwise.  Element i equals the single-sample result for
    sample_index = start + i.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    need = _gaussian_count(spec)
    raw = np.empty((count, need))
    for i in range(count):
        raw[i] = _gaussians(_generator(master_seed, start + i), need)
    d = spec.dim
    if spec.group in (GroupKind.SOEven, GroupKind.SOOdd):
        return _so_batch(d, raw)
    if spec.group is GroupKind.Unitary:
        z = raw[:, : d * d] + 1j * raw[:, d * d :]
        return _unitary_from_ginibre(z.reshape(count, d, d))
    return _usp_batch(spec.n, raw)


def sample(spec: GroupSpec, seed: SeedSpec, check: bool = True) -> GroupMatrix:
    """One Haar sample; a pure function of (spec, seed)."""
    entries = sample_batch(spec, seed.master_seed, seed.sample_index, 1)[0]
    mat = GroupMatrix(spec=spec, entries=np.asarray(entries, dtype=np.complex128))
    if check:
        verify_invariants(mat)
    return mat


def sample_stream(spec: GroupSpec, master_seed: int, count: int, batch: int = 1024):
    """Yields GroupMatrix objects for sample indices 0..count-1 in order."""
    if count < 1:
        raise ValueError("count must be >= 1")
    start = 0
    while start < count:
        size = min(batch, count - start)
        block = sample_batch(spec, master_seed, start, size)
        for i in range(size):
            yield GroupMatrix(spec=spec, entries=np.asarray(block[i], dtype=np.complex128))
        start += size


def verify_invariants(mat: GroupMatrix, unitary_tol: float = 1e-10, det_tol: float = 1e-8) -> None:
    """Checks unitarity, determinant, and symplectic-form invariants.

    Raises GroupInvariantError on violation; such a failure indicates an
    internal sampling defect, not bad user input.
    """
    a = mat.entries
    d = mat.spec.dim
    gram = a @ a.conj().T
    err = np.max(np.abs(gram - np.eye(d)))
    if err > unitary_tol:
        raise GroupInvariantError(f"unitarity violated: max |A A^* - I| = {err:.3e}")
    if mat.spec.group in (GroupKind.SOEven, GroupKind.SOOdd):
        if np.max(np.abs(a.imag)) != 0.0:
            raise GroupInvariantError("orthogonal sample has nonzero imaginary part")
        det = np.linalg.det(a.real)
        if abs(det - 1.0) > det_tol:
            raise GroupInvariantError(f"determinant {det} is not +1 within {det_tol}")
    elif mat.spec.group is GroupKind.USp:
        j = symplectic_form(mat.spec.n)
        err = np.max(np.abs(a.T @ j @ a - j))
        if err > unitary_tol:
            raise GroupInvariantError(f"symplectic form violated: max |A^T J A - J| = {err:.3e}")


def haar_shift(mat: GroupMatrix, u0: np.ndarray) -> np.ndarray:
    """Left-translate a sample by a fixed unitary (for invariance checks)."""
    return u0 @ mat.entries


_GROUP_NAMES = {
    "so_even": GroupKind.SOEven,
    "soeven": GroupKind.SOEven,
    "so_odd": GroupKind.SOOdd,
    "soodd": GroupKind.SOOdd,
    "usp": GroupKind.USp,
    "unitary": GroupKind.Unitary,
    "u": GroupKind.Unitary,
}


def group_from_name(name: str) -> GroupKind:
    try:
        return _GROUP_NAMES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown group name: {name!r}") from None
