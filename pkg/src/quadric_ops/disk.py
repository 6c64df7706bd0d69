"""Circular harmonics and orthonormal polynomials on the unit disk.

All bases are orthonormal under unit-mass measures: the normalised arc
measure on the circle and ``varpi_mu(x) = (1 - |x|^2)**(mu - 1/2)`` divided by
its mass on the disk.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import BasisIndexError, GeometryError, ParameterDomainError
from .poly1d import JacobiParams, RecurrenceCoefficients, jacobi_recurrence

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CircularHarmonicIndex:
    """Degree ``m`` harmonic; ``ell = 1`` is the cosine, ``ell = 2`` the sine."""

    m: int
    ell: int = 1

    def __post_init__(self):
        if self.m < 0 or self.ell not in (1, 2) or (self.m == 0 and self.ell == 2):
            raise BasisIndexError(f"invalid circular harmonic index (m={self.m}, ell={self.ell})")


@dataclass(frozen=True)
class DiskBasisIndex:
    """Disk basis index: total degree ``n``, radial index ``m`` and harmonic label.

    The harmonic degree is ``n - 2m``.
    """

    n: int
    m: int
    ell: int = 1

    def __post_init__(self):
        if self.n < 0 or not 0 <= 2 * self.m <= self.n:
            raise BasisIndexError(f"invalid disk index (n={self.n}, m={self.m})")
        h = self.n - 2 * self.m
        if self.ell not in (1, 2) or (h == 0 and self.ell == 2):
            raise BasisIndexError(f"invalid harmonic label ell={self.ell} for harmonic degree {h}")

    @property
    def harmonic_degree(self) -> int:
        return self.n - 2 * self.m


def disk_indices(n: int) -> list[DiskBasisIndex]:
    """Indices of degree ``n`` in canonical order (radial index ascending, then ell)."""
    out = []
    for j in range(n // 2 + 1):
        out.append(DiskBasisIndex(n, j, 1))
        if n - 2 * j > 0:
            out.append(DiskBasisIndex(n, j, 2))
    return out


def harmonic_table(M: int, x, y) -> tuple[np.ndarray, np.ndarray]:
    """Homogeneous ``Re`` and ``Im`` of ``(x + iy)**m`` for ``m = 0..M``.

    Rows of the returned arrays are indexed by ``m``.  Uses the complex
    multiplication recurrence, so no angles are formed.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    c = np.empty((M + 1,) + x.shape)
    s = np.empty((M + 1,) + x.shape)
    c[0] = 1.0
    s[0] = 0.0
    for m in range(M):
        c[m + 1] = x * c[m] - y * s[m]
        s[m + 1] = x * s[m] + y * c[m]
    return c, s


def circular_harmonic(idx: CircularHarmonicIndex, x, y):
    """Orthonormal solid harmonic: ``1``, ``sqrt2 r^m cos(m theta)`` or ``sqrt2 r^m sin(m theta)``."""
    c, s = harmonic_table(idx.m, x, y)
    if idx.m == 0:
        return c[0]
    return SQRT2 * (c[idx.m] if idx.ell == 1 else s[idx.m])


_radial_lock = threading.Lock()
_radial_cache: dict[tuple[float, int], RecurrenceCoefficients] = {}


def disk_radial_recurrence(mu: float, h: int, length: int) -> RecurrenceCoefficients:
    """Recurrence for ``rho**h (1 - rho)**(mu - 1/2)`` on ``(0, 1)``."""
    key = (float(mu), int(h))
    with _radial_lock:
        rc = _radial_cache.get(key)
        if rc is None or rc.length < length:
            rc = jacobi_recurrence(JacobiParams(h, mu - 0.5, shifted=True), max(length, 8))
            _radial_cache[key] = rc
    return rc


def disk_normalization(mu: float) -> float:
    """``C`` with ``C**2 = 2 / (2 mu + 1)``: the factor making the disk basis unit-norm."""
    return math.sqrt(2.0 / (2.0 * mu + 1.0))


def homogeneous_radial(rc: RecurrenceCoefficients, j: int, r2, phi2):
    """``phi2**k * q_k(r2 / phi2)`` for ``k = 0..j`` without dividing by ``phi2``.

    ``q_k`` are the orthonormal polynomials of ``rc``.
    """
    r2 = np.asarray(r2, dtype=float)
    phi2 = np.asarray(phi2, dtype=float)
    r2, phi2 = np.broadcast_arrays(r2, phi2)
    sb = np.sqrt(rc.b)
    out = np.empty((j + 1,) + r2.shape)
    out[0] = 1.0 / sb[0]
    if j >= 1:
        out[1] = (r2 - rc.a[0] * phi2) * out[0] / sb[1]
    phi4 = phi2 * phi2
    for k in range(1, j):
        out[k + 1] = ((r2 - rc.a[k] * phi2) * out[k] - sb[k] * phi4 * out[k - 1]) / sb[k + 1]
    return out


def disk_op_eval(mu: float, idx: DiskBasisIndex, x, y, check: bool = True):
    """Orthonormal disk polynomial ``C q_m(|x|^2) Y^{n-2m}_ell(x, y)`` for ``varpi_mu``.

    ``q_m`` is orthonormal for ``rho**(n-2m) (1-rho)**(mu-1/2)`` on ``(0, 1)``,
    i.e. a multiple of ``P_m^{(mu-1/2, n-2m)}(2|x|^2 - 1)``.
    """
    if not mu > -0.5:
        raise ParameterDomainError(f"mu must exceed -1/2, got {mu}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    if check and np.any(r2 > 1 + 1e-10):
        raise GeometryError("point outside the unit disk")
    h = idx.harmonic_degree
    rc = disk_radial_recurrence(mu, h, idx.m + 1)
    radial = homogeneous_radial(rc, idx.m, r2, np.ones_like(r2))[idx.m]
    harm = circular_harmonic(CircularHarmonicIndex(h, idx.ell), x, y)
    return disk_normalization(mu) * radial * harm


def disk_basis_table(mu: float, N: int, x, y) -> np.ndarray:
    """All disk basis functions of degree ``<= N`` in canonical order, stacked on axis 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rows = []
    r2 = x * x + y * y
    c, s = harmonic_table(N, x, y)
    C = disk_normalization(mu)
    cache = {}
    for n in range(N + 1):
        for idx in disk_indices(n):
            h = idx.harmonic_degree
            if h not in cache:
                rc = disk_radial_recurrence(mu, h, (N - h) // 2 + 1)
                cache[h] = homogeneous_radial(rc, (N - h) // 2, r2, np.ones_like(r2))
            harm = c[0] if h == 0 else SQRT2 * (c[h] if idx.ell == 1 else s[h])
            rows.append(C * cache[h][idx.m] * harm)
    return np.array(rows)


# ---------------------------------------------------------------------------
# Gegenbauer product basis (cross-validation only)


def _orthonormal_gegenbauer(lam: float, k: int, x):
    # orthonormal w.r.t. (1-x^2)^(lam-1/2) dx on (-1,1)
    rc = jacobi_recurrence(JacobiParams(lam - 0.5, lam - 0.5), k + 1)
    return rc.orthonormal(k, x)[k]


def gegenbauer_product_eval(mu: float, k1: int, k2: int, x, y):
    """Orthonormal product basis ``C_{k1}^{mu+k2+1/2}(x) (1-x^2)^{k2/2} C_{k2}^{mu}(y/sqrt(1-x^2))``.

    Degree ``k1 + k2``; defined for interior points ``|x| < 1``.
    """
    if not mu > -0.5:
        raise ParameterDomainError(f"mu must exceed -1/2, got {mu}")
    if k1 < 0 or k2 < 0:
        raise BasisIndexError("product indices must be nonnegative")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = np.sqrt(1.0 - x * x)
    mass = math.pi / (mu + 0.5)
    f1 = _orthonormal_gegenbauer(mu + k2 + 0.5, k1, x)
    f2 = _orthonormal_gegenbauer(mu, k2, y / s)
    return math.sqrt(mass) * f1 * s**k2 * f2
