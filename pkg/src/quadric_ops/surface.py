"""Orthonormal polynomial bases on quadric surfaces of revolution in R^3.

The degree-``n`` basis consists of

    S^n_{m,ell}(x, y, t) = q^{(m)}_{n-m}(t) * Y^m_ell(x, y),   0 <= m <= n,

where ``Y^m_ell`` is the homogeneous circular harmonic of degree ``m`` and
``q^{(m)}`` is orthogonal for the reduced weight ``|phi|^{2m+1} w``.  Using the
homogeneous harmonic means ``phi(t)`` is never divided out, so points at a
cone apex need no special handling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .disk import SQRT2, harmonic_table
from .errors import BasisIndexError, GeometryError
from .families import RadialFamilies
from .geometry import GeometrySpec, SurfaceWeight, jacobi_weight, reduced_weight_surface
from .poly1d import Weight1D


@dataclass(frozen=True, order=True)
class SurfaceIndex:
    n: int
    m: int
    ell: int = 1

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.m <= self.n:
            raise BasisIndexError(f"invalid surface index (n={self.n}, m={self.m})")
        if self.ell not in (1, 2) or (self.m == 0 and self.ell == 2):
            raise BasisIndexError(f"invalid harmonic label ell={self.ell} for m={self.m}")

    @property
    def position(self) -> int:
        """Offset in the canonical (n, m, ell) layout."""
        return self.n * self.n + (0 if self.m == 0 else 2 * self.m - 2 + self.ell)


def surface_dim(n: int, cumulative: bool = True) -> int:
    """Dimension of polynomials of degree ``<= n`` restricted to the surface, or of the degree-n slice."""
    if n < 0:
        return 0
    if cumulative:
        return math.comb(n + 2, 2) + math.comb(n + 1, 2)
    return 2 * n + 1


def surface_indices(N: int) -> list[SurfaceIndex]:
    """All indices of degree ``<= N`` in canonical order."""
    out = []
    for n in range(N + 1):
        out.append(SurfaceIndex(n, 0, 1))
        for m in range(1, n + 1):
            out.append(SurfaceIndex(n, m, 1))
            out.append(SurfaceIndex(n, m, 2))
    return out


class SurfaceBasis:
    """Orthonormal basis on the surface ``|x| = phi(t)``.

    Parameters
    ----------
    geometry : GeometrySpec
    weight : SurfaceWeight or Weight1D, optional
        Weight ``w`` on the parameter set.  Defaults to the geometry's Jacobi
        weight with ``alpha``, ``beta``.
    alpha, beta : float
        Used only when ``weight`` is omitted.
    tol : float
        Relative off-surface tolerance for evaluation checks.

    Notes
    -----
    The inner product is ``<f, g> = c_w int_S |phi| w(t) avg_circle(f g) dt``
    with ``c_w`` making ``<1, 1> = 1``; the basis is orthonormal for it.
    """

    def __init__(
        self,
        geometry: GeometrySpec,
        weight: SurfaceWeight | Weight1D | None = None,
        alpha: float = 0.0,
        beta: float = 0.0,
        tol: float = 1e-10,
    ):
        if weight is None:
            w = jacobi_weight(geometry, alpha, beta)
            self.alpha, self.beta = float(alpha), float(beta)
        else:
            w = weight.w if isinstance(weight, SurfaceWeight) else weight
            self.alpha = self.beta = None
        self.geometry = geometry
        self.weight = SurfaceWeight(geometry, w)
        self.tol = tol
        self.families = RadialFamilies(lambda m: reduced_weight_surface(geometry, w, m))
        self.Z = self.families.get(0, 1).norm0

    def radial(self, m: int, length: int):
        return self.families.get(m, length)

    # -- evaluation -----------------------------------------------------------

    def check_points(self, x, y, t):
        x, y, t = (np.asarray(v, dtype=float) for v in (x, y, t))
        if not np.all(self.geometry.profile.contains_t(t)):
            raise GeometryError("t outside the parameter set of the surface")
        phi2 = self.geometry.phi2(t)
        bad = np.abs(x * x + y * y - phi2) > self.tol * (1.0 + phi2)
        if np.any(bad):
            raise GeometryError(
                f"{int(np.count_nonzero(bad))} point(s) off the surface beyond tolerance {self.tol:g}"
            )

    def eval(self, idx: SurfaceIndex, x, y, t, check: bool = True):
        """Value of ``S^n_{m,ell}`` at surface points."""
        if check:
            self.check_points(x, y, t)
        rc = self.radial(idx.m, idx.n - idx.m + 1)
        q = rc.orthonormal(idx.n - idx.m, t)[idx.n - idx.m]
        c, s = harmonic_table(idx.m, x, y)
        if idx.m == 0:
            harm = c[0]
        else:
            harm = SQRT2 * (c[idx.m] if idx.ell == 1 else s[idx.m])
        return math.sqrt(self.Z) * q * harm

    def eval_all(self, N: int, x, y, t, check: bool = True) -> np.ndarray:
        """All basis functions of degree ``<= N``; shape ``(surface_dim(N),) + x.shape``."""
        x, y, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, t)))
        if check:
            self.check_points(x, y, t)
        out = np.empty((surface_dim(N),) + x.shape)
        c, s = harmonic_table(N, x, y)
        sz = math.sqrt(self.Z)
        for m in range(N + 1):
            q = self.radial(m, N - m + 1).orthonormal(N - m, t) * sz
            if m == 0:
                for k in range(N + 1):
                    out[k * k] = q[k]
                continue
            hc = SQRT2 * c[m]
            hs = SQRT2 * s[m]
            for k in range(N - m + 1):
                n = m + k
                base = n * n + 2 * m - 1
                out[base] = q[k] * hc
                out[base + 1] = q[k] * hs
        return out

    def synthesize(self, coeffs: np.ndarray, x, y, t, check: bool = True) -> np.ndarray:
        """Evaluate ``sum_i coeffs[i] S_i`` for a coefficient vector in canonical order.

        Trailing dimensions of ``coeffs`` beyond the first are treated as a
        batch; the result has shape ``x.shape + coeffs.shape[1:]``.
        """
        coeffs = np.asarray(coeffs, dtype=float)
        N = degree_from_surface_length(coeffs.shape[0])
        vals = self.eval_all(N, x, y, t, check=check)
        return np.tensordot(vals, coeffs, axes=(0, 0))

    # -- inner products -------------------------------------------------------

    def inner_product(self, f: Callable, g: Callable, n: int = 20) -> float:
        """``<f, g>`` by the surface cubature with parameter ``n`` (exact for degree ``2n - 1``)."""
        from .cubature import surface_cubature

        rule = surface_cubature(self, n)
        x, y, t = rule.points.T
        return float(np.sum(rule.weights * f(x, y, t) * g(x, y, t)))

    def norms(self, N: int) -> np.ndarray:
        """Squared norms of all basis functions of degree ``<= N`` (all equal to 1)."""
        return np.ones(surface_dim(N))


def degree_from_surface_length(length: int) -> int:
    N = math.isqrt(length) - 1
    if (N + 1) ** 2 != length:
        raise BasisIndexError(f"{length} is not a cumulative surface dimension")
    return N


def surface_eval(basis: SurfaceBasis, idx: SurfaceIndex, x, y, t):
    return basis.eval(idx, x, y, t)


def surface_inner_product(basis: SurfaceBasis, f: Callable, g: Callable, n: int = 20) -> float:
    return basis.inner_product(f, g, n)
