"""Orthonormal polynomial bases inside quadric bodies of revolution in R^3.

The degree-``n`` basis consists of

    Q^n_{m,k}(x, y, t) = q^{(m)}_{n-m}(t) * phi(t)**m * P^m_k(x / phi(t), y / phi(t)),

with ``P^m_k`` the orthonormal disk polynomials for ``varpi_mu`` and ``q^{(m)}``
orthogonal for ``|phi|^{2m+2} w1``.  Writing ``P^m_k = C q_j(|u|^2) Y^h(u)``
with ``m = h + 2j`` gives ``phi^m P^m_k(x/phi) = C H_j(|x|^2, phi^2) Y^h(x, y)``
where ``H_j`` is the radial polynomial homogenised with ``phi^2``: everything
is polynomial in ``(x, y, phi^2)`` and the apex needs no special case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .disk import SQRT2, disk_normalization, disk_radial_recurrence, harmonic_table, homogeneous_radial
from .errors import BasisIndexError, GeometryError, ParameterDomainError
from .families import RadialFamilies
from .geometry import GeometrySpec, SolidWeight, reduced_weight_solid, solid_weight
from .poly1d import Weight1D


@dataclass(frozen=True, order=True)
class SolidIndex:
    """Degree ``n``, disk degree ``m``, disk radial index ``j`` and harmonic label ``ell``.

    The disk harmonic degree is ``h = m - 2j``.
    """

    n: int
    m: int
    j: int = 0
    ell: int = 1

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.m <= self.n or not 0 <= 2 * self.j <= self.m:
            raise BasisIndexError(f"invalid solid index (n={self.n}, m={self.m}, j={self.j})")
        h = self.m - 2 * self.j
        if self.ell not in (1, 2) or (h == 0 and self.ell == 2):
            raise BasisIndexError(f"invalid harmonic label ell={self.ell} for harmonic degree {h}")

    @property
    def harmonic_degree(self) -> int:
        return self.m - 2 * self.j

    @property
    def position(self) -> int:
        n, m = self.n, self.m
        return n * (n + 1) * (n + 2) // 6 + m * (m + 1) // 2 + 2 * self.j + self.ell - 1


def solid_dim(n: int, cumulative: bool = True) -> int:
    """Dimension of ``Pi_n`` in three variables, or of the degree-n orthogonal slice."""
    if n < 0:
        return 0
    if cumulative:
        return math.comb(n + 3, 3)
    return (n + 1) * (n + 2) // 2


def solid_indices(N: int) -> list[SolidIndex]:
    out = []
    for n in range(N + 1):
        for m in range(n + 1):
            for j in range(m // 2 + 1):
                out.append(SolidIndex(n, m, j, 1))
                if m - 2 * j > 0:
                    out.append(SolidIndex(n, m, j, 2))
    return out


def degree_from_solid_length(length: int) -> int:
    N = 0
    while solid_dim(N) < length:
        N += 1
    if solid_dim(N) != length:
        raise BasisIndexError(f"{length} is not a cumulative solid dimension")
    return N


class SolidBasis:
    """Orthonormal basis inside ``|x| <= phi(t)`` for ``W = w1(t) varpi_mu(x / phi(t))``.

    Parameters
    ----------
    geometry : GeometrySpec
    weight : SolidWeight, optional
        Defaults to :func:`solid_weight` with ``alpha``, ``beta``, ``mu``.
    alpha, beta, mu : float
        Used only when ``weight`` is omitted.
    tol : float
        Relative containment tolerance.
    """

    def __init__(
        self,
        geometry: GeometrySpec,
        weight: SolidWeight | None = None,
        alpha: float = 0.0,
        beta: float = 0.0,
        mu: float = 0.5,
        tol: float = 1e-10,
    ):
        if weight is None:
            weight = solid_weight(geometry, alpha, beta, mu)
            self.alpha, self.beta = float(alpha), float(beta)
        else:
            self.alpha = self.beta = None
        if not weight.mu > -0.5:
            raise ParameterDomainError("mu must exceed -1/2")
        self.geometry = geometry
        self.weight = weight
        self.mu = float(weight.mu)
        self.tol = tol
        w1 = weight.w1
        self.families = RadialFamilies(lambda m: reduced_weight_solid(geometry, w1, m))
        self.Z = self.families.get(0, 1).norm0
        self.C = disk_normalization(self.mu)

    def radial(self, m: int, length: int):
        return self.families.get(m, length)

    def check_points(self, x, y, t):
        x, y, t = (np.asarray(v, dtype=float) for v in (x, y, t))
        if not np.all(self.geometry.profile.contains_t(t)):
            raise GeometryError("t outside the parameter set of the body")
        phi2 = self.geometry.phi2(t)
        bad = x * x + y * y > phi2 * (1.0 + self.tol) + 1e-300
        if np.any(bad):
            raise GeometryError(f"{int(np.count_nonzero(bad))} point(s) outside the body")

    def eval(self, idx: SolidIndex, x, y, t, check: bool = True):
        if check:
            self.check_points(x, y, t)
        x, y, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, t)))
        k = idx.n - idx.m
        q = self.radial(idx.m, k + 1).orthonormal(k, t)[k]
        h = idx.harmonic_degree
        rc = disk_radial_recurrence(self.mu, h, idx.j + 1)
        H = homogeneous_radial(rc, idx.j, x * x + y * y, self.geometry.phi2(t))[idx.j]
        c, s = harmonic_table(h, x, y)
        harm = c[0] if h == 0 else SQRT2 * (c[h] if idx.ell == 1 else s[h])
        return math.sqrt(self.Z) * self.C * q * H * harm

    def eval_all(self, N: int, x, y, t, check: bool = True) -> np.ndarray:
        """All basis functions of degree ``<= N``; shape ``(solid_dim(N),) + x.shape``."""
        x, y, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, t)))
        if check:
            self.check_points(x, y, t)
        r2 = x * x + y * y
        phi2 = self.geometry.phi2(t)
        c, s = harmonic_table(N, x, y)
        disk_parts = {}
        for h in range(N + 1):
            J = (N - h) // 2
            rc = disk_radial_recurrence(self.mu, h, J + 1)
            disk_parts[h] = homogeneous_radial(rc, J, r2, phi2) * self.C
        radial = [
            self.radial(m, N - m + 1).orthonormal(N - m, t) * math.sqrt(self.Z) for m in range(N + 1)
        ]
        out = np.empty((solid_dim(N),) + x.shape)
        for n in range(N + 1):
            base_n = n * (n + 1) * (n + 2) // 6
            for m in range(n + 1):
                q = radial[m][n - m]
                pos = base_n + m * (m + 1) // 2
                for j in range(m // 2 + 1):
                    h = m - 2 * j
                    H = disk_parts[h][j]
                    if h == 0:
                        out[pos] = q * H
                        pos += 1
                    else:
                        out[pos] = q * H * SQRT2 * c[h]
                        out[pos + 1] = q * H * SQRT2 * s[h]
                        pos += 2
        return out

    def synthesize(self, coeffs: np.ndarray, x, y, t, check: bool = True) -> np.ndarray:
        """Evaluate an expansion in canonical order; see :meth:`SurfaceBasis.synthesize`."""
        coeffs = np.asarray(coeffs, dtype=float)
        N = degree_from_solid_length(coeffs.shape[0])
        vals = self.eval_all(N, x, y, t, check=check)
        return np.tensordot(vals, coeffs, axes=(0, 0))

    def inner_product(self, f: Callable, g: Callable, n: int = 20) -> float:
        """``<f, g>_W`` by the solid cubature with parameter ``n``."""
        from .cubature import solid_cubature

        rule = solid_cubature(self, n)
        x, y, t = rule.points.T
        return float(np.sum(rule.weights * f(x, y, t) * g(x, y, t)))


def solid_eval(basis: SolidBasis, idx: SolidIndex, x, y, t):
    return basis.eval(idx, x, y, t)


def solid_inner_product(basis: SolidBasis, f: Callable, g: Callable, n: int = 20) -> float:
    return basis.inner_product(f, g, n)
