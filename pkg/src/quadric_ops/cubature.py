"""Product cubature rules of degree ``2n - 1`` on quadric surfaces, the disk and quadric bodies.

Weights are normalised so that each rule integrates ``1`` to ``1`` under the
corresponding unit-mass measure.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InsufficientDataError, ParameterDomainError
from .poly1d import JacobiParams, Weight1D, family_recurrence, gauss_rule, jacobi_recurrence


@dataclass(frozen=True)
class CubatureRule:
    """Points (rows ``(x, y, t)`` or ``(x, y)``) with positive weights."""

    points: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    domain: str

    def integrate(self, f: Callable) -> float:
        vals = f(*self.points.T)
        return float(np.sum(self.weights * vals))

    def __len__(self) -> int:
        return int(self.weights.size)


def radial_rule(basis, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes and weights in ``t`` for the order-0 reduced weight of ``basis``.

    On a multi-interval parameter set a single Gauss rule may place a node in
    a gap, where ``phi`` is not real; there each interval gets its own
    ``n``-point rule, which keeps the exactness degree ``2n - 1``.
    """
    w = basis.families.weight(0)
    if len(w.intervals) == 1:
        g = gauss_rule(basis.radial(0, n), n)
        return g.nodes, g.weights
    nodes, weights = [], []
    for iv in w.intervals:
        piece = Weight1D((iv,), w.scale, w.roots, w.quadratics)
        g = gauss_rule(family_recurrence(piece, n), n)
        nodes.append(g.nodes)
        weights.append(g.weights)
    return np.concatenate(nodes), np.concatenate(weights)


def _angles(n: int) -> np.ndarray:
    return np.arange(2 * n) * (np.pi / n)


def surface_cubature(basis, n: int) -> CubatureRule:
    """``n`` Gauss nodes in ``t`` times ``2n`` equispaced angles.

    The ``t`` rule is Gauss for ``|phi|^{d-1} w``; points lie exactly on the
    surface, ``(phi(t_j) cos theta_k, phi(t_j) sin theta_k, t_j)``.
    """
    if n < 1:
        raise InsufficientDataError("cubature parameter n must be at least 1")
    tn, tw = radial_rule(basis, n)
    th = _angles(n)
    phi = basis.geometry.phi(tn)
    x = np.outer(phi, np.cos(th)).ravel()
    y = np.outer(phi, np.sin(th)).ravel()
    t = np.repeat(tn, 2 * n)
    w = np.repeat(tw / basis.Z / (2 * n), 2 * n)
    return CubatureRule(np.column_stack([x, y, t]), w, 2 * n - 1, f"surface:{basis.geometry.name}")


def disk_cubature(mu: float, n: int) -> CubatureRule:
    """Product rule on the unit disk for unit-mass ``varpi_mu``.

    Radii ``s_k = sqrt(rho_k)`` with ``rho_k`` the Gauss nodes of
    ``(1 - rho)**(mu - 1/2)`` on ``(0, 1)`` (zeros of ``P_n^{(mu-1/2, 0)}(2 s^2 - 1)``),
    and ``2n`` angles ``j pi / n`` over the full circle.
    """
    if not mu > -0.5:
        raise ParameterDomainError(f"mu must exceed -1/2, got {mu}")
    if n < 1:
        raise InsufficientDataError("cubature parameter n must be at least 1")
    g = gauss_rule(jacobi_recurrence(JacobiParams(0.0, mu - 0.5, shifted=True), n), n)
    s = np.sqrt(g.nodes)
    th = _angles(n)
    x = np.outer(s, np.cos(th)).ravel()
    y = np.outer(s, np.sin(th)).ravel()
    w = np.repeat(g.weights / np.sum(g.weights) / (2 * n), 2 * n)
    return CubatureRule(np.column_stack([x, y]), w, 2 * n - 1, "disk")


def solid_cubature(basis, n: int) -> CubatureRule:
    """Gauss nodes for ``|phi|^d w1`` in ``t`` crossed with the scaled disk rule.

    Points are ``(phi(t_j) u_k, t_j)`` for disk nodes ``u_k``; ``n * 2n**2`` in total.
    """
    if n < 1:
        raise InsufficientDataError("cubature parameter n must be at least 1")
    tn, tw = radial_rule(basis, n)
    disk = disk_cubature(basis.mu, n)
    phi = basis.geometry.phi(tn)
    x = np.outer(phi, disk.points[:, 0]).ravel()
    y = np.outer(phi, disk.points[:, 1]).ravel()
    t = np.repeat(tn, len(disk))
    w = np.outer(tw / basis.Z, disk.weights).ravel()
    return CubatureRule(np.column_stack([x, y, t]), w, 2 * n - 1, f"solid:{basis.geometry.name}")
