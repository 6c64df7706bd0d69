"""Quadratic domains of revolution and their one-dimensional weights.

A domain is described by a profile ``phi`` on a parameter set ``S`` (one or
two open intervals): the surface is ``{(x, t): |x| = phi(t), t in S}`` and the
body is ``{(x, t): |x| <= phi(t)}``.  ``phi**2`` is always a polynomial of
degree at most two, which is what makes the orthogonal structure tractable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import GeometryError, ParameterDomainError
from .poly1d import Weight1D, family_recurrence

GEOMETRY_NAMES = (
    "cylinder",
    "cone",
    "double_cone",
    "ball",
    "paraboloid",
    "hyperboloid",
    "hyperboloid_two_sheets",
)


@dataclass(frozen=True)
class QuadricProfile:
    """Profile ``phi`` with ``phi**2`` polynomial.

    Parameters
    ----------
    kind : {"linear", "sqrt_quadratic"}
        ``linear``: ``phi = c0 + c1 t``.  ``sqrt_quadratic``:
        ``phi = sqrt(q0 + q1 t + q2 t**2)``.
    coeffs : tuple of float
        ``(c0, c1)`` or ``(q0, q1, q2)``.
    support : tuple of (lo, hi)
        One or two disjoint open intervals.
    """

    kind: str
    coeffs: tuple[float, ...]
    support: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.kind not in ("linear", "sqrt_quadratic"):
            raise GeometryError(f"unknown profile kind {self.kind!r}")
        want = 2 if self.kind == "linear" else 3
        if len(self.coeffs) != want:
            raise GeometryError(f"{self.kind} profile needs {want} coefficients")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        sup = tuple(sorted((float(lo), float(hi)) for lo, hi in self.support))
        if not sup:
            raise GeometryError("empty parameter set S")
        for lo, hi in sup:
            if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
                raise GeometryError(f"invalid parameter interval ({lo}, {hi})")
        for (_, hi), (lo2, _) in zip(sup, sup[1:]):
            if lo2 < hi:
                raise GeometryError("parameter intervals overlap")
        object.__setattr__(self, "support", sup)
        self._check_nonnegative()

    def _check_nonnegative(self):
        tol = 1e-14
        for lo, hi in self.support:
            pts = [lo, hi]
            if self.kind == "linear":
                vals = [self.coeffs[0] + self.coeffs[1] * p for p in pts]
            else:
                q0, q1, q2 = self.coeffs
                if q2 != 0:
                    v = -q1 / (2 * q2)
                    if lo < v < hi:
                        pts.append(v)
                vals = [q0 + q1 * p + q2 * p * p for p in pts]
            if min(vals) < -tol * (1 + max(abs(v) for v in vals)):
                raise GeometryError(f"profile is negative on ({lo}, {hi})")

    def phi2_coefficients(self) -> tuple[float, float, float]:
        """Coefficients ``(q0, q1, q2)`` of ``phi(t)**2``."""
        if self.kind == "linear":
            c0, c1 = self.coeffs
            return (c0 * c0, 2 * c0 * c1, c1 * c1)
        return self.coeffs

    def phi2(self, t):
        q0, q1, q2 = self.phi2_coefficients()
        t = np.asarray(t, dtype=float)
        if self.kind == "linear":
            c0, c1 = self.coeffs
            return (c0 + c1 * t) ** 2
        return np.maximum(q0 + q1 * t + q2 * t * t, 0.0)

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "linear":
            c0, c1 = self.coeffs
            return np.maximum(c0 + c1 * t, 0.0)
        return np.sqrt(self.phi2(t))

    def power(self, p: float) -> Weight1D:
        """``|phi(t)|**p`` as a factored :class:`Weight1D` on the support."""
        roots = []
        quads = []
        scale = 1.0
        if p != 0:
            if self.kind == "linear":
                c0, c1 = self.coeffs
                if c1 == 0:
                    scale = abs(c0) ** p
                else:
                    scale = abs(c1) ** p
                    roots.append((-c0 / c1, p))
            else:
                q0, q1, q2 = self.coeffs
                half = 0.5 * p
                if q2 != 0:
                    disc = q1 * q1 - 4 * q2 * q0
                    scale = abs(q2) ** half
                    if disc > 0:
                        sq = math.sqrt(disc)
                        # numerically stable root pair
                        r1 = (-q1 - math.copysign(sq, q1)) / (2 * q2)
                        r2 = q0 / (q2 * r1) if r1 != 0 else -q1 / q2
                        roots += [(r1, half), (r2, half)]
                    elif disc == 0:
                        roots.append((-q1 / (2 * q2), p))
                    else:
                        quads.append((-q1 / (2 * q2), -disc / (4 * q2 * q2), half))
                elif q1 != 0:
                    scale = abs(q1) ** half
                    roots.append((-q0 / q1, half))
                else:
                    scale = abs(q0) ** half
        if not scale > 0:
            raise ParameterDomainError("profile vanishes identically; cannot form a power weight")
        return Weight1D(self.support, scale, tuple(roots), tuple(quads))

    def contains_t(self, t, tol: float = 1e-12):
        t = np.asarray(t, dtype=float)
        ok = np.zeros(t.shape, dtype=bool)
        for lo, hi in self.support:
            pad = tol * (1 + max(abs(lo), abs(hi)))
            ok |= (t >= lo - pad) & (t <= hi + pad)
        return ok


@dataclass(frozen=True)
class GeometrySpec:
    """A named quadric of revolution in ``R^{d+1}``."""

    name: str
    profile: QuadricProfile
    d: int = 2
    parameters: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.d != 2:
            raise GeometryError("only d = 2 (domains in R^3) is supported")
        object.__setattr__(self, "parameters", dict(self.parameters))

    def __hash__(self):
        return hash((self.name, self.profile, self.d, tuple(sorted(self.parameters.items()))))

    def __eq__(self, other):
        if not isinstance(other, GeometrySpec):
            return NotImplemented
        return (self.name, self.profile, self.d, self.parameters) == (
            other.name,
            other.profile,
            other.d,
            other.parameters,
        )

    @property
    def intervals(self) -> tuple[tuple[float, float], ...]:
        return self.profile.support

    def phi(self, t):
        return self.profile.phi(t)

    def phi2(self, t):
        return self.profile.phi2(t)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "parameters": dict(self.parameters),
            "intervals": [list(iv) for iv in self.intervals],
            "d": self.d,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GeometrySpec":
        spec = make_geometry(data["name"], data.get("parameters", {}))
        stored = data.get("intervals")
        if stored is not None and not np.allclose(
            np.asarray(stored, float), np.asarray(spec.intervals, float), rtol=0, atol=1e-15
        ):
            raise GeometryError("stored intervals do not match the geometry parameters")
        return spec


_DEFAULTS: dict[str, dict[str, float]] = {
    "cylinder": {"a": -1.0, "b": 1.0, "radius": 1.0},
    "cone": {"b": 1.0},
    "double_cone": {"b": 1.0},
    "ball": {"a": 0.0},
    "paraboloid": {"b": 1.0},
    "hyperboloid": {},
    "hyperboloid_two_sheets": {"b": 2.0},
}
_REQUIRED = {"hyperboloid": ("rho",), "hyperboloid_two_sheets": ("rho",)}


def make_geometry(name: str, parameters: Mapping[str, float] | None = None, **kwargs) -> GeometrySpec:
    """Build a named geometry.

    Parameters
    ----------
    name : str
        One of :data:`GEOMETRY_NAMES`.
    parameters : mapping, optional
        Geometry parameters; keyword arguments are merged in.  Recognised
        keys: ``a``, ``b`` (interval ends), ``radius`` (cylinder), ``rho``
        (hyperboloids, required).

    Examples
    --------
    >>> make_geometry("cone").profile
    QuadricProfile(kind='linear', coeffs=(0.0, 1.0), support=((0.0, 1.0),))
    """
    if name not in _DEFAULTS:
        raise GeometryError(f"unknown geometry {name!r}; expected one of {', '.join(GEOMETRY_NAMES)}")
    given = dict(parameters or {})
    given.update(kwargs)
    given = {k: float(v) for k, v in given.items() if v is not None}
    allowed = set(_DEFAULTS[name]) | set(_REQUIRED.get(name, ()))
    extra = set(given) - allowed
    if extra:
        raise GeometryError(f"geometry {name!r} does not take parameter(s) {sorted(extra)}")
    for key in _REQUIRED.get(name, ()):
        if key not in given:
            raise GeometryError(f"geometry {name!r} requires parameter {key!r}")
    p = {**_DEFAULTS[name], **given}

    if name == "cylinder":
        if not p["radius"] > 0:
            raise GeometryError("cylinder radius must be positive")
        prof = QuadricProfile("linear", (p["radius"], 0.0), ((p["a"], p["b"]),))
    elif name == "cone":
        prof = QuadricProfile("linear", (0.0, 1.0), ((0.0, p["b"]),))
    elif name == "double_cone":
        prof = QuadricProfile("sqrt_quadratic", (0.0, 0.0, 1.0), ((-p["b"], p["b"]),))
    elif name == "ball":
        if not -1.0 <= p["a"] < 1.0:
            raise GeometryError("ball parameter a must lie in [-1, 1)")
        prof = QuadricProfile("sqrt_quadratic", (1.0, 0.0, -1.0), ((p["a"], 1.0),))
    elif name == "paraboloid":
        prof = QuadricProfile("sqrt_quadratic", (0.0, 1.0, 0.0), ((0.0, p["b"]),))
    elif name == "hyperboloid":
        if p["rho"] < 0:
            raise GeometryError("hyperboloid rho must be nonnegative")
        prof = QuadricProfile("sqrt_quadratic", (p["rho"] ** 2, 0.0, 1.0), ((-1.0, 1.0),))
    else:
        rho, b = p["rho"], p["b"]
        if not 0 < rho < b:
            raise GeometryError("two-sheet hyperboloid needs 0 < rho < b")
        prof = QuadricProfile("sqrt_quadratic", (-rho * rho, 0.0, 1.0), ((-b, -rho), (rho, b)))
    return GeometrySpec(name, prof, 2, p)


# ---------------------------------------------------------------------------
# attached weights


def jacobi_weight(spec: GeometrySpec, alpha: float = 0.0, beta: float = 0.0) -> Weight1D:
    """The geometry's natural Jacobi-type weight on ``S``.

    cone, paraboloid: ``t**alpha (b - t)**beta`` on ``(0, b)``;
    cylinder, double cone, hyperboloid: ``(b - t)**alpha (t - a)**beta``;
    ball: ``(1 - t)**alpha (1 + t)**beta``;
    two-sheet hyperboloid: ``(b - t)**alpha (b + t)**beta`` (alpha acts on
    the upper end, beta on the lower end).
    """
    lo, hi = spec.intervals[0][0], spec.intervals[-1][1]
    if spec.name in ("cone", "paraboloid"):
        roots = ((lo, alpha), (hi, beta))
    elif spec.name == "ball":
        roots = ((1.0, alpha), (-1.0, beta))
    else:
        roots = ((hi, alpha), (lo, beta))
    return Weight1D(spec.intervals, 1.0, roots)


@dataclass(frozen=True)
class SurfaceWeight:
    """Weight ``w`` on ``S`` for the surface inner product.

    ``c_w`` normalises ``<1, 1> = 1``: ``1 / c_w = int_S |phi|^{d-1} w dt``.
    """

    geometry: GeometrySpec
    w: Weight1D

    @property
    def c_w(self) -> float:
        red = reduced_weight_surface(self.geometry, self.w, 0)
        return 1.0 / family_recurrence(red, 1).norm0


@dataclass(frozen=True)
class SolidWeight:
    """Solid weight ``W(x, t) = w1(t) * varpi_mu(x / phi(t))``."""

    geometry: GeometrySpec
    w1: Weight1D
    mu: float

    def __post_init__(self):
        if not self.mu > -0.5:
            raise ParameterDomainError(f"mu must exceed -1/2, got {self.mu}")

    @property
    def b_W(self) -> float:
        red = reduced_weight_solid(self.geometry, self.w1, 0)
        disk_mass = math.pi / (self.mu + 0.5)
        return 1.0 / (family_recurrence(red, 1).norm0 * disk_mass)

    def __call__(self, x, y, t):
        t = np.asarray(t, dtype=float)
        r2 = np.asarray(x, float) ** 2 + np.asarray(y, float) ** 2
        phi2 = self.geometry.phi2(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(phi2 > 0, r2 / phi2, np.inf)
            ball = np.where(ratio < 1, (1.0 - ratio) ** (self.mu - 0.5), 0.0)
        return self.w1(t) * ball


def surface_weight(spec: GeometrySpec, alpha: float = 0.0, beta: float = 0.0) -> SurfaceWeight:
    return SurfaceWeight(spec, jacobi_weight(spec, alpha, beta))


def solid_weight(spec: GeometrySpec, alpha: float = 0.0, beta: float = 0.0, mu: float = 0.5) -> SolidWeight:
    """Solid weight with ``w1 = |phi|^{2 mu - 1} * jacobi_weight``.

    Then ``W = jacobi_weight(t) * (phi(t)**2 - |x|**2)**(mu - 1/2)``.
    """
    w1 = spec.profile.power(2 * mu - 1) * jacobi_weight(spec, alpha, beta)
    return SolidWeight(spec, w1, mu)


def reduced_weight_surface(spec: GeometrySpec, w: Weight1D, m: int) -> Weight1D:
    """``|phi(t)|^{2m+d-1} w(t)``: the weight of the order-``m`` surface radial family."""
    if m < 0:
        raise ParameterDomainError("harmonic order m must be nonnegative")
    red = spec.profile.power(2 * m + spec.d - 1) * w
    red.validate()
    return red


def reduced_weight_solid(spec: GeometrySpec, w1: Weight1D, m: int) -> Weight1D:
    """``|phi(t)|^{2m+d} w1(t)``: the weight of the order-``m`` solid radial family."""
    if m < 0:
        raise ParameterDomainError("disk degree m must be nonnegative")
    red = spec.profile.power(2 * m + spec.d) * w1
    red.validate()
    return red
