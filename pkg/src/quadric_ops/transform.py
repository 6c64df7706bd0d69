"""Analysis and synthesis on the cone surface and inside the solid cone.

Both transforms first expand samples in a tensor-product basis by exact
quadrature, then convert each harmonic order ``m`` to the orthogonal basis by
inverting a product of lowering operators

    (1 - s) P_j^{(a+2, b)}(s) = sum_i L^{(a,b)}_{ij} P_i^{(a,b)}(s).

In ``t = (1 - s) / 2`` this says ``t`` times a ``(a+2, 0)`` Jacobi series is
a ``(a, 0)`` series, which is exactly how the factor ``t**m`` of a harmonic
of order ``m`` is absorbed.  Internally the operators act on unit-mass
orthonormal Jacobi coefficients; their columns are then mutually orthogonal
and the tall systems are solved by orthogonal projection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .coefficients import CoefficientSet, decay_profile
from .cubature import solid_cubature, surface_cubature
from .disk import disk_radial_recurrence
from .errors import FormatError, InsufficientDataError, NumericalError, ParameterDomainError
from .geometry import GeometrySpec, SolidWeight, make_geometry
from .poly1d import JacobiParams, Weight1D, gauss_rule, jacobi_log_norms, jacobi_recurrence
from .solid import SolidBasis, solid_dim
from .surface import SurfaceBasis, surface_dim

__all__ = [
    "LoweringOperator",
    "lowering_operator",
    "lowering_solve",
    "surface_analysis",
    "surface_synthesis",
    "solid_analysis",
    "solid_synthesis",
    "projection_analysis",
    "decay_profile",
    "SurfaceTransform",
    "SolidTransform",
    "surface_transform",
    "solid_transform",
    "disk_function_analysis",
    "disk_function_synthesis",
]


# ---------------------------------------------------------------------------
# lowering operators


@lru_cache(maxsize=512)
def _orthonormal_lowering(a: float, b: float, n: int) -> np.ndarray:
    # (n+1) x n matrix in unit-mass orthonormal Jacobi bases
    q = n + 2
    rc = jacobi_recurrence(JacobiParams(a, b), q + 1)
    rule = gauss_rule(rc, q)
    s, w = rule.nodes, rule.weights / rc.norm0
    lo = rc.orthonormal(n, s) * math.sqrt(rc.norm0)
    rc_hi = jacobi_recurrence(JacobiParams(a + 2, b), n + 1)
    hi = rc_hi.orthonormal(n - 1, s) * math.sqrt(rc_hi.norm0)
    mat = (lo * w) @ ((1.0 - s) * hi).T
    # structural zeros: column j only reaches rows 0..j+1
    mask = np.tril(np.ones((n + 1, n), dtype=bool), k=-2)
    mat[mask] = 0.0
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True)
class LoweringOperator:
    """``L^{(a,b)}``: coefficients of ``(1-s) P^{(a+2,b)}`` series into ``P^{(a,b)}`` series.

    ``matrix`` uses the standard Jacobi normalisation; ``orthonormal`` is the
    same map between unit-mass orthonormal bases.
    """

    a: float
    b: float
    n: int
    matrix: np.ndarray
    orthonormal: np.ndarray

    def __matmul__(self, v):
        return self.matrix @ v

    @property
    def shape(self):
        return self.matrix.shape


def lowering_operator(a: float, b: float, n: int) -> LoweringOperator:
    """Build the ``(n+1) x n`` lowering operator by Gauss quadrature projection.

    Examples
    --------
    >>> lowering_operator(0, 0, 2).matrix.round(12)
    array([[ 1.        ,  0.33333333],
           [-1.        ,  1.        ],
           [ 0.        , -1.33333333]])
    """
    if n < 1:
        raise InsufficientDataError("lowering operator needs n >= 1")
    JacobiParams(a, b)
    ortho = _orthonormal_lowering(float(a), float(b), int(n))
    log_lo = jacobi_log_norms(a, b, n)
    log_hi = jacobi_log_norms(a + 2, b, n - 1)
    scale = np.exp(0.5 * (log_hi[None, :] - log_lo[:, None]))
    return LoweringOperator(float(a), float(b), int(n), ortho * scale, ortho)


def lowering_solve(
    L,
    rhs,
    method: str = "auto",
    row_norms=None,
) -> np.ndarray:
    """Solve the tall system ``L v = rhs`` for a product of lowering operators.

    Parameters
    ----------
    L : LoweringOperator or ndarray
        ``(N+1) x (N+1-m)`` matrix.
    rhs : ndarray
        Shape ``(N+1,)`` or ``(N+1, batch...)``.
    method : {"auto", "projection", "lstsq", "back_substitution"}
        ``projection`` requires ``row_norms`` (squared norms of the row
        basis functions) under which the columns of ``L`` are orthogonal, as
        they are for lowering products; it returns the weighted least-squares
        solution in O(N^2).  ``lstsq`` is a dense least-squares fallback.
        ``back_substitution`` eliminates from the bottom row up; it is exact
        in exact arithmetic for consistent systems but amplifies rounding
        errors strongly once several operators are chained.  ``auto`` picks
        ``projection`` when ``row_norms`` is given and ``lstsq`` otherwise.

    Raises
    ------
    NumericalError
        On a zero pivot in back substitution or a vanishing column.
    """
    mat = L.matrix if isinstance(L, LoweringOperator) else np.asarray(L, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    rows, cols = mat.shape
    if rhs.shape[0] != rows:
        raise InsufficientDataError(f"rhs has {rhs.shape[0]} rows, operator has {rows}")
    if cols == rows:
        if np.array_equal(mat, np.eye(rows)):
            return rhs.copy()
    if method == "auto":
        method = "projection" if row_norms is not None else "lstsq"
    if method == "projection":
        if row_norms is None:
            raise ParameterDomainError("projection solve needs row_norms")
        wr = np.asarray(row_norms, dtype=float)
        weighted = mat * wr[:, None]
        diag = np.einsum("ij,ij->j", weighted, mat)
        if np.any(diag <= 0):
            raise NumericalError("lowering product has a vanishing column")
        proj = np.tensordot(weighted.T, rhs, axes=(1, 0))
        return proj / diag.reshape((-1,) + (1,) * (rhs.ndim - 1))
    if method == "lstsq":
        flat = rhs.reshape(rows, -1)
        sol = np.linalg.lstsq(mat, flat, rcond=None)[0]
        return sol.reshape((cols,) + rhs.shape[1:])
    if method == "back_substitution":
        shift = rows - cols
        v = np.zeros((cols,) + rhs.shape[1:])
        for j in range(cols - 1, -1, -1):
            piv = mat[j + shift, j]
            if piv == 0:
                raise NumericalError(f"zero pivot in column {j}")
            acc = rhs[j + shift] - np.tensordot(mat[j + shift, j + 1 :], v[j + 1 :], axes=(0, 0))
            v[j] = acc / piv
        return v
    raise ParameterDomainError(f"unknown solve method {method!r}")


def _orthonormal_chain(start: int, N: int) -> list[np.ndarray]:
    """``chains[m]`` = orthonormal ``L^{(start)} L^{(start+2)} ... L^{(start+2m-2)}``, truncated to ``(N+1) x (N+1-m)``."""
    chains = [np.eye(N + 1)]
    for m in range(1, N + 1):
        a = start + 2 * (m - 1)
        op = _orthonormal_lowering(float(a), 0.0, N + 1 - m)
        prev = chains[-1][:, : N + 2 - m]
        chains.append(prev @ op)
    return chains


# ---------------------------------------------------------------------------
# surface of the cone


class SurfaceTransform:
    """Precomputed analysis for degree ``N`` on the cone surface with ``w = 1``.

    Grid: ``N+1`` Gauss nodes for the weight ``t`` on ``(0, 1)`` times the
    ``2N+1`` angles ``2 pi eta / (2N+1)``, ``eta = 1..2N+1``.
    """

    def __init__(self, N: int):
        if N < 0:
            raise InsufficientDataError("degree N must be nonnegative")
        self.N = N
        rc = jacobi_recurrence(JacobiParams(1.0, 0.0), N + 2)
        rule = gauss_rule(rc, N + 1)
        self.s = rule.nodes
        self.t = (1.0 - self.s) / 2.0
        self.tw = rule.weights / rc.norm0
        self.P = rc.orthonormal(N, self.s) * math.sqrt(rc.norm0)
        self.theta = 2.0 * np.pi * np.arange(1, 2 * N + 2) / (2 * N + 1)
        m = np.arange(N + 1)
        eps = np.where(m == 0, 1.0, 2.0) / (2 * N + 1)
        self.cos = np.cos(np.outer(m, self.theta)) * eps[:, None]
        self.sin = np.sin(np.outer(m, self.theta)) * eps[:, None]
        self.chains = _orthonormal_chain(1, N)
        self.geometry = make_geometry("cone")

    @property
    def grid_shape(self) -> tuple[int, int]:
        return (self.N + 1, 2 * self.N + 1)

    def grid(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Grid points ``(x, y, t)``, each of shape :attr:`grid_shape`."""
        T, TH = np.meshgrid(self.t, self.theta, indexing="ij")
        return T * np.cos(TH), T * np.sin(TH), T

    def analyze(self, samples: np.ndarray) -> np.ndarray:
        """Coefficients from samples on :meth:`grid` (trailing dims are a batch)."""
        F = np.asarray(samples, dtype=float)
        if F.shape[:2] != self.grid_shape:
            raise FormatError(
                f"surface samples must have leading shape {self.grid_shape} (t nodes, angles); got {F.shape}"
            )
        N = self.N
        batch = F.shape[2:]
        A = np.tensordot(self.cos, F, axes=(1, 1))  # (m, t, batch)
        B = np.tensordot(self.sin, F, axes=(1, 1))
        Pw = self.P * self.tw  # (k, t)
        cA = np.einsum("kj,mj...->mk...", Pw, A)
        cB = np.einsum("kj,mj...->mk...", Pw, B)
        out = np.zeros((surface_dim(N),) + batch)
        ones = np.ones(N + 1)
        for m in range(N + 1):
            L = self.chains[m]
            K = N + 1 - m
            scale = 2.0**m
            k = np.arange(K)
            conv = (-1.0) ** k * math.sqrt(1.0 / (2 * m + 2) / 0.5)
            if m >= 1:
                conv = conv / math.sqrt(2.0)
            conv = conv.reshape((K,) + (1,) * len(batch))
            va = lowering_solve(L, scale * cA[m], row_norms=ones) * conv
            n = m + k
            if m == 0:
                out[n * n] = va
            else:
                vb = lowering_solve(L, scale * cB[m], row_norms=ones) * conv
                out[n * n + 2 * m - 1] = va
                out[n * n + 2 * m] = vb
        return out

    def basis(self) -> SurfaceBasis:
        return _cone_surface_basis()


@lru_cache(maxsize=8)
def surface_transform(N: int) -> SurfaceTransform:
    return SurfaceTransform(N)


@lru_cache(maxsize=1)
def _cone_surface_basis() -> SurfaceBasis:
    return SurfaceBasis(make_geometry("cone"), alpha=0.0, beta=0.0)


def _evaluate(f: Callable, x, y, t) -> np.ndarray:
    vals = np.asarray(f(x, y, t), dtype=float)
    if vals.shape[: x.ndim] != x.shape:
        vals = np.broadcast_to(vals, x.shape + vals.shape[x.ndim :])
    return vals


def surface_analysis(f: Callable, N: int) -> CoefficientSet:
    """Expansion coefficients of ``f`` on the cone surface (``alpha = beta = 0``), degree ``<= N``.

    ``f(x, y, t)`` is called once on arrays of grid points; it may return
    extra trailing dimensions, which are carried through as a batch.  For
    polynomials of degree ``<= N`` the coefficients are exact; otherwise
    they are the discrete least-squares projection defined by the grid.
    """
    tr = surface_transform(N)
    x, y, t = tr.grid()
    vals = _evaluate(f, x, y, t)
    basis = tr.basis()
    return CoefficientSet(
        basis.geometry, "surface", basis.weight.w, N, tr.analyze(vals), parameters={"alpha": 0.0, "beta": 0.0}
    )


def surface_synthesis(coeffs: CoefficientSet | np.ndarray, points) -> np.ndarray:
    """Evaluate a surface expansion at points given as an ``(M, 3)`` array (or ``(x, y, t)``)."""
    x, y, t = _split_points(points)
    if isinstance(coeffs, CoefficientSet):
        return coeffs.synthesize(x, y, t)
    return _cone_surface_basis().synthesize(coeffs, x, y, t)


def _split_points(points):
    if isinstance(points, tuple) and len(points) == 3:
        return tuple(np.asarray(p, dtype=float) for p in points)
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise FormatError("points must be an (M, 3) array of (x, y, t)")
    return arr[:, 0], arr[:, 1], arr[:, 2]


# ---------------------------------------------------------------------------
# solid cone


class SolidTransform:
    """Precomputed analysis for degree ``N`` inside the cone with ``w1 = 1``, ``mu = 0``.

    Grid: ``N+1`` Gauss nodes for ``t**2`` on ``(0, 1)``, ``N+1`` Gauss-Chebyshev
    radii in ``(-1, 1)`` and ``2N+1`` equispaced angles.
    """

    mu = 0.0

    def __init__(self, N: int):
        if N < 0:
            raise InsufficientDataError("degree N must be nonnegative")
        self.N = N
        rc = jacobi_recurrence(JacobiParams(2.0, 0.0), N + 2)
        rule = gauss_rule(rc, N + 1)
        self.s = rule.nodes
        self.t = (1.0 - self.s) / 2.0
        self.tw = rule.weights / rc.norm0
        self.P = rc.orthonormal(N, self.s) * math.sqrt(rc.norm0)
        i = np.arange(1, N + 2)
        self.r = np.cos((2 * i - 1) * np.pi / (2 * N + 2))
        k = np.arange(N + 1)
        cheb = np.cos(np.outer(k, np.arccos(self.r)))
        self.cheb = cheb * (np.where(k == 0, 1.0, 2.0) / (N + 1))[:, None]
        self.theta = 2.0 * np.pi * np.arange(1, 2 * N + 2) / (2 * N + 1)
        eps = np.where(k == 0, 1.0, 2.0) / (2 * N + 1)
        self.cos = np.cos(np.outer(k, self.theta)) * eps[:, None]
        self.sin = np.sin(np.outer(k, self.theta)) * eps[:, None]
        self.disk = [self._disk_conversion(h) for h in range(N + 1)]
        self.chains = _orthonormal_chain(2, N)

    def _disk_conversion(self, h: int) -> np.ndarray:
        """Rows: disk radial index ``j``; columns: Chebyshev degree ``k`` (parity of ``h`` only)."""
        N, mu = self.N, self.mu
        J = (N - h) // 2
        q = N + 2
        rc = jacobi_recurrence(JacobiParams(0.0, mu - 0.5, shifted=True), q)
        g = gauss_rule(rc, q)
        rho, w = g.nodes, g.weights
        rad = disk_radial_recurrence(mu, h, J + 1).orthonormal(J, rho)
        r = np.sqrt(rho)
        k = np.arange(N + 1)
        T = np.cos(np.outer(k, np.arccos(r))) * r**h
        C = math.sqrt(2.0 / (2 * mu + 1))
        fac = 1.0 / C if h == 0 else 1.0 / (math.sqrt(2.0) * C)
        mat = fac * (rad * w) @ T.T
        mat[:, (k - h) % 2 == 1] = 0.0
        return mat

    @property
    def grid_shape(self) -> tuple[int, int, int]:
        return (self.N + 1, self.N + 1, 2 * self.N + 1)

    def grid(self):
        T, R, TH = np.meshgrid(self.t, self.r, self.theta, indexing="ij")
        return T * R * np.cos(TH), T * R * np.sin(TH), T

    def analyze(self, samples: np.ndarray) -> np.ndarray:
        F = np.asarray(samples, dtype=float)
        if F.shape[:3] != self.grid_shape:
            raise FormatError(
                f"solid samples must have leading shape {self.grid_shape} (t nodes, radii, angles); got {F.shape}"
            )
        N = self.N
        batch = F.shape[3:]
        A = np.tensordot(F, self.cos, axes=(2, 1))  # (t, r, batch, h)
        B = np.tensordot(F, self.sin, axes=(2, 1))
        A = np.tensordot(A, self.cheb, axes=(1, 1))  # (t, batch, h, k)
        B = np.tensordot(B, self.cheb, axes=(1, 1))
        Pw = self.P * self.tw
        out = np.zeros((solid_dim(N),) + batch)
        ones = np.ones(N + 1)
        # disk coefficients D[h][ell] : (t, batch, j)
        D = {}
        for h in range(N + 1):
            M = self.disk[h]
            D[h, 1] = np.tensordot(A[..., h, :], M, axes=(-1, 1))
            if h > 0:
                D[h, 2] = np.tensordot(B[..., h, :], M, axes=(-1, 1))
        for m in range(N + 1):
            L = self.chains[m]
            K = N + 1 - m
            k = np.arange(K)
            conv = (-1.0) ** k * math.sqrt((1.0 / (2 * m + 3)) / (1.0 / 3.0))
            conv = conv.reshape((K,) + (1,) * len(batch))
            n = m + k
            base = n * (n + 1) * (n + 2) // 6 + m * (m + 1) // 2
            for j in range(m // 2 + 1):
                h = m - 2 * j
                for ell in ((1,) if h == 0 else (1, 2)):
                    d = D[h, ell][..., j]  # (t, batch)
                    c = np.tensordot(Pw, d, axes=(1, 0))  # (k, batch)
                    v = lowering_solve(L, 2.0**m * c, row_norms=ones) * conv
                    out[base + 2 * j + ell - 1] = v
        return out

    def basis(self) -> SolidBasis:
        return _cone_solid_basis()


@lru_cache(maxsize=8)
def solid_transform(N: int) -> SolidTransform:
    return SolidTransform(N)


@lru_cache(maxsize=1)
def _cone_solid_basis() -> SolidBasis:
    geom = make_geometry("cone")
    return SolidBasis(geom, SolidWeight(geom, Weight1D(geom.intervals), 0.0))


def solid_analysis(f: Callable, N: int) -> CoefficientSet:
    """Expansion coefficients inside the cone for ``W = (1 - |x|^2/t^2)^{-1/2}``, degree ``<= N``."""
    tr = solid_transform(N)
    x, y, t = tr.grid()
    vals = _evaluate(f, x, y, t)
    basis = tr.basis()
    return CoefficientSet(
        basis.geometry,
        "solid",
        basis.weight.w1,
        N,
        tr.analyze(vals),
        mu=0.0,
        parameters={"alpha": 0.0, "beta": 0.0, "mu": 0.0},
    )


def solid_synthesis(coeffs: CoefficientSet | np.ndarray, points) -> np.ndarray:
    x, y, t = _split_points(points)
    if isinstance(coeffs, CoefficientSet):
        return coeffs.synthesize(x, y, t)
    return _cone_solid_basis().synthesize(coeffs, x, y, t)


# ---------------------------------------------------------------------------
# generic geometries and the disk


def projection_analysis(basis, f: Callable, N: int, n: int | None = None) -> CoefficientSet:
    """Coefficients by cubature projection, for any surface or solid basis.

    With the default ``n = N + 1`` the rule is exact for products of degree
    ``2N + 1``, so polynomials of degree ``<= N`` are recovered exactly.
    """
    n = N + 1 if n is None else n
    if isinstance(basis, SurfaceBasis):
        rule = surface_cubature(basis, n)
        kind, weight, mu = "surface", basis.weight.w, None
    elif isinstance(basis, SolidBasis):
        rule = solid_cubature(basis, n)
        kind, weight, mu = "solid", basis.weight.w1, basis.mu
    else:
        raise ParameterDomainError("basis must be a SurfaceBasis or SolidBasis")
    x, y, t = rule.points.T
    V = basis.eval_all(N, x, y, t, check=False)
    vals = _evaluate(f, x, y, t)
    wv = vals * rule.weights.reshape((-1,) + (1,) * (vals.ndim - 1))
    coeffs = np.tensordot(V, wv, axes=(1, 0))
    params = {"alpha": basis.alpha, "beta": basis.beta}
    if mu is not None:
        params["mu"] = mu
    return CoefficientSet(basis.geometry, kind, weight, N, coeffs, mu=mu, parameters=params)


def disk_function_analysis(F: Callable, N: int) -> CoefficientSet:
    """Approximate ``F(x, y)`` on the unit disk through the cone surface ``t = |(x, y)|``."""
    return surface_analysis(lambda x, y, t: F(x, y), N)


def disk_function_synthesis(coeffs: CoefficientSet, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return coeffs.synthesize(x, y, np.hypot(x, y))
