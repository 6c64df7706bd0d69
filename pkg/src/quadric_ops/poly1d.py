"""One-dimensional orthogonal polynomial engine.

Every family is ultimately described by its monic three-term recurrence

    p_{k+1}(t) = (t - a_k) p_k(t) - b_k p_{k-1}(t),

stored in :class:`RecurrenceCoefficients` with the convention ``b[0]`` equal to
the total mass of the weight.  Classical families (Jacobi, generalized
Gegenbauer) get closed-form coefficients; anything else goes through a
discretized Stieltjes procedure over a structure-aware auxiliary rule.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, InsufficientDataError, ParameterDomainError

_ROOT_TOL = 1e-14


# ---------------------------------------------------------------------------
# parameter types


@dataclass(frozen=True)
class JacobiParams:
    """Jacobi family parameters.

    Standard form: weight ``(1-s)**alpha * (1+s)**beta`` on ``(-1, 1)``.
    Shifted form: weight ``t**alpha * (1-t)**beta`` on ``(0, 1)`` and the
    polynomials are ``P_n(1 - 2t)``.  ``interval`` rescales either form to an
    arbitrary finite interval; alpha always sits at the upper end in the
    standard form and at the lower end in the shifted form.
    """

    alpha: float
    beta: float
    shifted: bool = False
    interval: tuple[float, float] | None = None

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ParameterDomainError(
                f"Jacobi parameters must exceed -1, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.interval is None:
            object.__setattr__(self, "interval", (0.0, 1.0) if self.shifted else (-1.0, 1.0))
        lo, hi = self.interval
        if not hi > lo:
            raise ParameterDomainError(f"empty interval {self.interval}")

    def to_standard(self, t):
        """Map a point of ``interval`` to the standard variable on (-1, 1)."""
        lo, hi = self.interval
        t = np.asarray(t, dtype=float)
        if self.shifted:
            return 1.0 - 2.0 * (t - lo) / (hi - lo)
        return (2.0 * t - lo - hi) / (hi - lo)

    def weight(self, t):
        s = self.to_standard(t)
        return (1.0 - s) ** self.alpha * (1.0 + s) ** self.beta


@dataclass(frozen=True)
class GenGegenbauerParams:
    """Generalized Gegenbauer weight ``|t|**(2 nu) * (1 - t**2)**(mu - 1/2)``.

    ``half_width = c`` moves the support to ``(-c, c)`` with weight
    ``|t|**(2 nu) * (c**2 - t**2)**(mu - 1/2)``.
    """

    mu: float
    nu: float
    half_width: float = 1.0

    def __post_init__(self):
        if not (self.mu > -0.5 and self.nu > -0.5):
            raise ParameterDomainError(
                f"generalized Gegenbauer parameters must exceed -1/2, got mu={self.mu}, nu={self.nu}"
            )
        if not self.half_width > 0:
            raise ParameterDomainError("half_width must be positive")

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        c = self.half_width
        return np.abs(t) ** (2 * self.nu) * (c * c - t * t) ** (self.mu - 0.5)


# ---------------------------------------------------------------------------
# recurrences and rules


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """Monic three-term recurrence coefficients.

    ``a[k]`` and ``b[k]`` for ``k < length``; ``b[0]`` is the total mass.
    With ``length`` coefficients one can evaluate the orthonormal polynomials
    of degree ``< length`` and build Gauss rules with up to ``length`` points.
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 1 or a.size == 0:
            raise InsufficientDataError("recurrence needs equal, nonempty a and b")
        if np.any(b <= 0) or not np.all(np.isfinite(b)):
            raise ParameterDomainError("recurrence couplings must be positive and finite")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def norm0(self) -> float:
        return float(self.b[0])

    @property
    def length(self) -> int:
        return int(self.a.size)

    def truncate(self, n: int) -> "RecurrenceCoefficients":
        if n > self.length:
            raise InsufficientDataError(f"requested {n} coefficients, only {self.length} available")
        return RecurrenceCoefficients(self.a[:n], self.b[:n])

    def monic(self, n: int, t) -> np.ndarray:
        """Monic polynomials ``p_0 .. p_n`` at ``t``; shape ``(n+1,) + t.shape``."""
        if n > self.length:
            raise InsufficientDataError(f"degree {n} needs {n} coefficients, have {self.length}")
        t = np.asarray(t, dtype=float)
        out = np.empty((n + 1,) + t.shape)
        out[0] = 1.0
        if n >= 1:
            out[1] = t - self.a[0]
        for k in range(1, n):
            out[k + 1] = (t - self.a[k]) * out[k] - self.b[k] * out[k - 1]
        return out

    def orthonormal(self, n: int, t) -> np.ndarray:
        """Orthonormal polynomials ``q_0 .. q_n`` (w.r.t. the actual, unnormalised weight)."""
        if n >= self.length:
            raise InsufficientDataError(f"degree {n} needs {n + 1} coefficients, have {self.length}")
        t = np.asarray(t, dtype=float)
        sb = np.sqrt(self.b)
        out = np.empty((n + 1,) + t.shape)
        out[0] = 1.0 / sb[0]
        if n >= 1:
            out[1] = (t - self.a[0]) * out[0] / sb[1]
        for k in range(1, n):
            out[k + 1] = ((t - self.a[k]) * out[k] - sb[k] * out[k - 1]) / sb[k + 1]
        return out


@dataclass(frozen=True)
class QuadratureRule1D:
    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def integrate(self, f: Callable) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


def gauss_rule(rc: RecurrenceCoefficients, n: int) -> QuadratureRule1D:
    """n-point Gauss rule from the symmetric tridiagonal (Jacobi) matrix.

    Nodes are eigenvalues of the Jacobi matrix, refined by one Newton step on
    the orthonormal polynomial of degree n; weights are Christoffel numbers
    ``1 / sum_k q_k(t_j)**2``.
    """
    if n < 1:
        raise InsufficientDataError("a Gauss rule needs at least one point")
    if n > rc.length:
        raise InsufficientDataError(f"{n}-point rule needs {n} coefficients, have {rc.length}")
    a = rc.a[:n]
    if n == 1:
        nodes = a.copy()
    else:
        nodes = eigh_tridiagonal(a, np.sqrt(rc.b[1:n]), eigvals_only=True)
    nodes = np.sort(nodes)
    nodes = _newton_polish(rc, n, nodes)
    q = _orthonormal_upto(rc, n - 1, nodes)
    weights = 1.0 / np.sum(q * q, axis=0)
    return QuadratureRule1D(nodes, weights, 2 * n - 1)


def _orthonormal_upto(rc, n, t):
    # degree n may use the unavailable b[n+1] only for normalisation; not needed here
    return rc.orthonormal(n, t)


def _newton_polish(rc, n, nodes):
    # p_n and its derivative via the monic recurrence; p_n needs a[0..n-1], b[1..n-1]
    if n == 1:
        return nodes
    p_prev = np.zeros_like(nodes)
    p = np.ones_like(nodes)
    dp_prev = np.zeros_like(nodes)
    dp = np.zeros_like(nodes)
    for k in range(n):
        bk = rc.b[k] if k > 0 else 0.0
        p_next = (nodes - rc.a[k]) * p - bk * p_prev
        dp_next = p + (nodes - rc.a[k]) * dp - bk * dp_prev
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
    ok = dp != 0
    step = np.zeros_like(nodes)
    step[ok] = p[ok] / dp[ok]
    gaps = np.diff(nodes)
    limit = np.full_like(nodes, np.inf)
    limit[:-1] = np.minimum(limit[:-1], gaps)
    limit[1:] = np.minimum(limit[1:], gaps)
    # only accept tiny corrections; the eigenvalues are already accurate
    use = np.abs(step) < 1e-3 * limit
    return np.where(use, nodes - step, nodes)


# ---------------------------------------------------------------------------
# Jacobi closed forms


def _jacobi_standard_coeffs(alpha: float, beta: float, n: int):
    ab = alpha + beta
    a = np.empty(n)
    b = np.empty(n)
    a[0] = (beta - alpha) / (ab + 2.0)
    b[0] = math.exp(
        (ab + 1.0) * math.log(2.0)
        + math.lgamma(alpha + 1.0)
        + math.lgamma(beta + 1.0)
        - math.lgamma(ab + 2.0)
    )
    if n > 1:
        k = np.arange(1, n, dtype=float)
        a[1:] = (beta * beta - alpha * alpha) / ((2 * k + ab) * (2 * k + ab + 2))
        b[1] = 4.0 * (alpha + 1) * (beta + 1) / ((ab + 2) ** 2 * (ab + 3))
        if n > 2:
            k = np.arange(2, n, dtype=float)
            b[2:] = (
                4.0 * k * (k + alpha) * (k + beta) * (k + ab)
                / ((2 * k + ab) ** 2 * (2 * k + ab + 1) * (2 * k + ab - 1))
            )
    return a, b


def jacobi_recurrence(params: JacobiParams, n: int) -> RecurrenceCoefficients:
    """Recurrence in the interval variable for the weight of ``params``.

    The weight is ``(hi-t)**alpha (t-lo)**beta`` (standard) or
    ``(t-lo)**alpha (hi-t)**beta`` (shifted), with no extra constant.
    """
    lo, hi = params.interval
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    if params.shifted:
        # s = 1 - 2(t-lo)/L, so t = mid - half*s; alpha sits at s = 1
        a_s, b_s = _jacobi_standard_coeffs(params.alpha, params.beta, n)
        a = mid - half * a_s
    else:
        a_s, b_s = _jacobi_standard_coeffs(params.alpha, params.beta, n)
        a = mid + half * a_s
    b = b_s * half * half
    b[0] = b_s[0] * half ** (params.alpha + params.beta + 1.0)
    return RecurrenceCoefficients(a, b)


def jacobi_eval(params: JacobiParams, n: int, t):
    """``P_n^{(alpha,beta)}`` in the standard normalisation, ``P_n(1) = binom(n+alpha, n)``.

    For the shifted form the argument is mapped by ``t -> 1 - 2t``.  Uses the
    forward three-term recurrence.
    """
    return jacobi_table(params, n, t)[n]


def jacobi_table(params: JacobiParams, n: int, t) -> np.ndarray:
    """All of ``P_0 .. P_n`` at ``t`` (shape ``(n+1,) + t.shape``)."""
    if n < 0:
        raise ParameterDomainError("degree must be nonnegative")
    s = params.to_standard(t)
    al, be = params.alpha, params.beta
    ab = al + be
    out = np.empty((n + 1,) + s.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = (al + 1.0) + (ab + 2.0) * (s - 1.0) / 2.0
    for k in range(2, n + 1):
        c1 = 2.0 * k * (k + ab) * (2 * k + ab - 2)
        c2 = (2 * k + ab - 1) * (2 * k + ab) * (2 * k + ab - 2)
        c3 = (2 * k + ab - 1) * (al * al - be * be)
        c4 = 2.0 * (k + al - 1) * (k + be - 1) * (2 * k + ab)
        out[k] = ((c2 * s + c3) * out[k - 1] - c4 * out[k - 2]) / c1
    return out


def jacobi_leading_ratio(alpha: float, beta: float, k: int) -> float:
    """Ratio of leading coefficients ``k_k / k_{k-1}`` of standard ``P_k``."""
    ab = alpha + beta
    if k == 1:
        return (ab + 2.0) / 2.0
    return (2 * k + ab) * (2 * k + ab - 1) / (2.0 * k * (k + ab))


def jacobi_norm(params: JacobiParams, n: int) -> float:
    """Squared norm of ``P_n^{(alpha,beta)}`` under the unit-mass weight.

    Computed from the recurrence: ``h_n = k_n**2 * b_1 ... b_n`` with ``k_n`` the
    leading coefficient and ``b`` the standard-interval monic couplings.
    """
    return float(jacobi_norms(params.alpha, params.beta, n)[n])


def jacobi_norms(alpha: float, beta: float, n: int) -> np.ndarray:
    """Unit-mass squared norms ``h_0 .. h_n`` of the standard Jacobi polynomials."""
    return np.exp(jacobi_log_norms(alpha, beta, n))


def jacobi_log_norms(alpha: float, beta: float, n: int) -> np.ndarray:
    """Logarithms of the unit-mass squared norms; safe for large parameters."""
    JacobiParams(alpha, beta)
    _, b = _jacobi_standard_coeffs(alpha, beta, n + 1)
    logh = np.zeros(n + 1)
    for k in range(1, n + 1):
        logh[k] = logh[k - 1] + math.log(b[k]) + 2.0 * math.log(jacobi_leading_ratio(alpha, beta, k))
    return logh


# ---------------------------------------------------------------------------
# generalized Gegenbauer


def gen_gegenbauer_eval(params: GenGegenbauerParams, n: int, t):
    """``C_n^{(mu,nu)}`` from the even/odd Jacobi reduction.

    Even degrees ``2k`` are ``P_k^{(mu-1/2, nu-1/2)}(2s^2-1)``; odd degrees
    ``2k+1`` are ``s * P_k^{(mu-1/2, nu+1/2)}(2s^2-1)``, with ``s = t / c``.
    """
    if n < 0:
        raise ParameterDomainError("degree must be nonnegative")
    s = np.asarray(t, dtype=float) / params.half_width
    k, odd = divmod(n, 2)
    if odd:
        jp = JacobiParams(params.mu - 0.5, params.nu + 0.5)
        return s * jacobi_eval(jp, k, 2 * s * s - 1)
    jp = JacobiParams(params.mu - 0.5, params.nu - 0.5)
    return jacobi_eval(jp, k, 2 * s * s - 1)


def gen_gegenbauer_recurrence(params: GenGegenbauerParams, n: int) -> RecurrenceCoefficients:
    """Closed-form monic recurrence; all ``a_k`` vanish by symmetry."""
    al = params.mu - 0.5
    be = params.nu - 0.5
    c = params.half_width
    a = np.zeros(n)
    b = np.empty(n)
    b[0] = math.exp(
        math.lgamma(params.nu + 0.5) + math.lgamma(params.mu + 0.5) - math.lgamma(params.mu + params.nu + 1.0)
    )
    b[0] *= c ** (2 * params.nu + 2 * params.mu)
    for j in range(1, n):
        k, odd = divmod(j, 2)
        if odd:
            if k == 0:
                val = (be + 1.0) / (al + be + 2.0)
            else:
                val = (k + be + 1) * (k + al + be + 1) / ((2 * k + al + be + 1) * (2 * k + al + be + 2))
        else:
            val = k * (k + al) / ((2 * k + al + be) * (2 * k + al + be + 1))
        b[j] = val * c * c
    return RecurrenceCoefficients(a, b)


# ---------------------------------------------------------------------------
# structured weights


@dataclass(frozen=True)
class Weight1D:
    """Nonnegative weight ``scale * prod |t - r|**p * prod ((t-c)**2 + w2)**e``.

    Supported on one or more disjoint finite open intervals.  The factored
    form lets the auxiliary quadrature absorb endpoint singularities and grade
    toward near-real complex singularities.
    """

    intervals: tuple[tuple[float, float], ...]
    scale: float = 1.0
    roots: tuple[tuple[float, float], ...] = ()
    quadratics: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self):
        ivs = tuple(sorted((float(lo), float(hi)) for lo, hi in self.intervals))
        if not ivs:
            raise ParameterDomainError("weight support is empty")
        for (lo, hi) in ivs:
            if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
                raise ParameterDomainError(f"invalid support interval ({lo}, {hi})")
        for (_, hi), (lo2, _) in zip(ivs, ivs[1:]):
            if lo2 < hi:
                raise ParameterDomainError("support intervals overlap")
        if not self.scale > 0:
            raise ParameterDomainError("weight scale must be positive")
        roots: dict[float, float] = {}

        def add_root(r, p):
            for key in roots:
                if abs(key - r) <= _ROOT_TOL * (1 + abs(r)):
                    roots[key] += p
                    return
            roots[float(r)] = float(p)

        for r, p in self.roots:
            add_root(r, p)
        quads = []
        for c, w2, e in self.quadratics:
            if e == 0:
                continue
            if w2 > 0:
                quads.append((float(c), float(w2), float(e)))
            elif w2 == 0:
                add_root(c, 2 * e)
            else:
                d = math.sqrt(-w2)
                add_root(c - d, e)
                add_root(c + d, e)
        merged_q: dict[tuple[float, float], float] = {}
        for c, w2, e in quads:
            merged_q[(c, w2)] = merged_q.get((c, w2), 0.0) + e
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(
            self, "roots", tuple(sorted((r, p) for r, p in roots.items() if p != 0))
        )
        object.__setattr__(
            self,
            "quadratics",
            tuple(sorted((c, w2, e) for (c, w2), e in merged_q.items() if e != 0)),
        )

    # -- construction helpers -------------------------------------------------

    def __mul__(self, other: "Weight1D") -> "Weight1D":
        if not isinstance(other, Weight1D):
            return NotImplemented
        if len(other.intervals) != len(self.intervals) or not np.allclose(
            other.intervals, self.intervals, rtol=0, atol=1e-14
        ):
            raise ParameterDomainError("cannot multiply weights with different supports")
        return Weight1D(
            self.intervals,
            self.scale * other.scale,
            self.roots + other.roots,
            self.quadratics + other.quadratics,
        )

    def with_scale(self, factor: float) -> "Weight1D":
        return Weight1D(self.intervals, self.scale * factor, self.roots, self.quadratics)

    # -- evaluation -----------------------------------------------------------

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = np.zeros(t.shape, dtype=bool)
        for lo, hi in self.intervals:
            inside |= (t > lo) & (t < hi)
        return np.where(inside, self._factors(t), 0.0)

    def _factors(self, t, skip=()):
        val = np.full(np.shape(t), self.scale)
        with np.errstate(divide="ignore", invalid="ignore"):
            for r, p in self.roots:
                if r in skip:
                    continue
                val = val * np.abs(t - r) ** p
            for c, w2, e in self.quadratics:
                val = val * ((t - c) ** 2 + w2) ** e
        return val

    @property
    def support(self) -> tuple[float, float]:
        return self.intervals[0][0], self.intervals[-1][1]

    def power_at(self, x: float) -> float:
        return sum(p for r, p in self.roots if abs(r - x) <= _ROOT_TOL * (1 + abs(x)))

    def validate(self) -> None:
        """Raise ParameterDomainError unless the weight is integrable."""
        for lo, hi in self.intervals:
            for x in (lo, hi):
                p = self.power_at(x)
                if p <= -1:
                    raise ParameterDomainError(
                        f"weight exponent {p} at t={x} is not integrable (needs > -1)"
                    )
            for r, p in self.roots:
                if lo < r < hi and p <= -1:
                    raise ParameterDomainError(
                        f"weight exponent {p} at interior point t={r} is not integrable"
                    )

    # -- classification -------------------------------------------------------

    def classify(self):
        """Return ``("jacobi", JacobiParams)``, ``("gen_gegenbauer", GenGegenbauerParams)``
        or ``("stieltjes", None)``."""
        if len(self.intervals) != 1 or self.quadratics:
            return "stieltjes", None
        lo, hi = self.intervals[0]
        locs = {}
        for r, p in self.roots:
            if abs(r - lo) <= _ROOT_TOL * (1 + abs(lo)):
                locs["lo"] = p
            elif abs(r - hi) <= _ROOT_TOL * (1 + abs(hi)):
                locs["hi"] = p
            elif abs(r) <= _ROOT_TOL and lo < 0 < hi:
                locs["zero"] = p
            else:
                return "stieltjes", None
        p_lo, p_hi = locs.get("lo", 0.0), locs.get("hi", 0.0)
        if "zero" not in locs:
            if lo == 0.0:
                return "jacobi", JacobiParams(p_lo, p_hi, shifted=True, interval=(lo, hi))
            return "jacobi", JacobiParams(p_hi, p_lo, shifted=False, interval=(lo, hi))
        if abs(lo + hi) <= _ROOT_TOL * (1 + hi) and abs(p_lo - p_hi) <= 1e-14:
            return "gen_gegenbauer", GenGegenbauerParams(p_hi + 0.5, locs["zero"] / 2.0, half_width=hi)
        return "stieltjes", None

    # -- serialisation --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "intervals": [list(iv) for iv in self.intervals],
            "scale": self.scale,
            "roots": [list(r) for r in self.roots],
            "quadratics": [list(q) for q in self.quadratics],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Weight1D":
        return cls(
            tuple(tuple(iv) for iv in data["intervals"]),
            data.get("scale", 1.0),
            tuple(tuple(r) for r in data.get("roots", ())),
            tuple(tuple(q) for q in data.get("quadratics", ())),
        )


def family_recurrence(weight: Weight1D, n: int, tol: float = 1e-12) -> RecurrenceCoefficients:
    """Recurrence for ``weight``: closed form when classical, Stieltjes otherwise."""
    weight.validate()
    kind, params = weight.classify()
    if kind == "jacobi":
        rc = jacobi_recurrence(params, n)
    elif kind == "gen_gegenbauer":
        rc = gen_gegenbauer_recurrence(params, n)
    else:
        return stieltjes_recurrence(weight, n=n, tol=tol)
    b = np.array(rc.b)
    b[0] *= weight.scale
    return RecurrenceCoefficients(rc.a, b)


# ---------------------------------------------------------------------------
# Stieltjes procedure


@lru_cache(maxsize=256)
def _reference_gauss_jacobi(alpha: float, beta: float, q: int):
    rule = gauss_rule(jacobi_recurrence(JacobiParams(alpha, beta), q), q)
    nodes, weights = rule.nodes, rule.weights
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _grading_points(lo, hi, center, scale):
    length = hi - lo
    if scale >= 0.25 * length:
        return []
    scale = max(scale, 1e-15 * length)
    pts = []
    if lo < center < hi:
        pts.append(center)
    step = scale
    while center + step < hi - 1e-3 * step:
        if center + step > lo:
            pts.append(center + step)
        step *= 2.0
    step = scale
    while center - step > lo + 1e-3 * step:
        if center - step < hi:
            pts.append(center - step)
        step *= 2.0
    return pts


def _breakpoints(weight: Weight1D, lo: float, hi: float):
    pts = {lo, hi}
    for r, p in weight.roots:
        if lo < r < hi:
            pts.add(r)
        elif p != 0:
            proj = min(max(r, lo), hi)
            dist = abs(r - proj)
            if dist > 0:
                pts.update(_grading_points(lo, hi, proj, dist))
    for c, w2, _ in weight.quadratics:
        proj = min(max(c, lo), hi)
        dist = math.hypot(c - proj, math.sqrt(w2))
        pts.update(_grading_points(lo, hi, proj, dist))
    return sorted(pts)


def aux_rule(weight: Weight1D, q: int):
    """Composite Gauss-Jacobi discretisation of ``weight`` with ``q`` points per piece.

    Root factors sitting at a piece endpoint are absorbed into the Jacobi
    weight of that piece; pieces are geometrically graded toward real or
    complex factor singularities close to the support.
    """
    xs, ws = [], []
    root_locs = [r for r, _ in weight.roots]
    for lo, hi in weight.intervals:
        bps = _breakpoints(weight, lo, hi)
        for u, v in zip(bps, bps[1:]):
            at_u = [r for r in root_locs if abs(r - u) <= _ROOT_TOL * (1 + abs(u))]
            at_v = [r for r in root_locs if abs(r - v) <= _ROOT_TOL * (1 + abs(v))]
            e_u = sum(p for r, p in weight.roots if r in at_u)
            e_v = sum(p for r, p in weight.roots if r in at_v)
            s, w = _reference_gauss_jacobi(e_v, e_u, q)
            half = 0.5 * (v - u)
            t = 0.5 * (u + v) + half * s
            others = weight._factors(t, skip=tuple(at_u + at_v))
            xs.append(t)
            ws.append(w * half ** (e_u + e_v + 1.0) * others)
    return np.concatenate(xs), np.concatenate(ws)


def _callable_aux_rule(weight: Callable, intervals, pieces: int, q: int = 20):
    s, w = _reference_gauss_jacobi(0.0, 0.0, q)
    xs, ws = [], []
    for lo, hi in intervals:
        edges = np.linspace(lo, hi, pieces + 1)
        for u, v in zip(edges[:-1], edges[1:]):
            half = 0.5 * (v - u)
            t = 0.5 * (u + v) + half * s
            xs.append(t)
            ws.append(w * half * np.asarray(weight(t), dtype=float))
    return np.concatenate(xs), np.concatenate(ws)


def discrete_stieltjes(x: np.ndarray, w: np.ndarray, n: int):
    """Recurrence of the discrete measure ``sum w_i delta(x_i)``.

    Runs the Stieltjes iteration on orthonormalised vectors with one pass of
    full re-orthogonalisation per step.
    """
    if n > x.size:
        raise InsufficientDataError("discrete measure has fewer points than requested coefficients")
    a = np.empty(n)
    b = np.empty(n)
    b[0] = float(np.sum(w))
    sw = np.sqrt(w)
    basis = np.empty((n, x.size))
    basis[0] = sw / math.sqrt(b[0])
    prev = np.zeros_like(x)
    for k in range(n):
        cur = basis[k]
        a[k] = float(np.sum(x * cur * cur))
        if k == n - 1:
            break
        r = (x - a[k]) * cur - (math.sqrt(b[k]) * prev if k > 0 else 0.0)
        r = r - basis[: k + 1].T @ (basis[: k + 1] @ r)
        b[k + 1] = float(np.sum(r * r))
        if not b[k + 1] > 0:
            raise InsufficientDataError("discrete measure exhausted before the requested degree")
        prev = cur
        basis[k + 1] = r / math.sqrt(b[k + 1])
    return a, b


def _discrepancy(a1, b1, a2, b2, halfwidth):
    da = np.max(np.abs(a1 - a2)) / halfwidth
    db0 = abs(b1[0] - b2[0]) / b2[0]
    db = np.max(np.abs(b1[1:] - b2[1:])) / halfwidth**2 if b1.size > 1 else 0.0
    return float(max(da, db0, db))


def stieltjes_recurrence(
    weight,
    support: Sequence[tuple[float, float]] | None = None,
    n: int = 1,
    tol: float = 1e-12,
    max_refinements: int = 8,
) -> RecurrenceCoefficients:
    """Recurrence coefficients of an arbitrary weight by discretized Stieltjes.

    Parameters
    ----------
    weight : Weight1D or callable
        A structured weight, or any pointwise-evaluable nonnegative function
        (then ``support`` is required).
    support : sequence of (lo, hi), optional
        Support intervals for a plain callable.
    n : int
        Number of coefficients.
    tol : float
        Refinement stops once successive coefficient sets agree to ``tol``.

    Raises
    ------
    ConvergenceError
        If doubling the auxiliary rule ``max_refinements`` times does not
        stabilise the coefficients.
    """
    if n < 1:
        raise InsufficientDataError("need at least one coefficient")
    if isinstance(weight, Weight1D):
        weight.validate()
        intervals = weight.intervals

        def discretise(level):
            return aux_rule(weight, q0 * 2**level)

        q0 = max(16, n + 8)
    else:
        if support is None:
            raise ParameterDomainError("a callable weight needs explicit support intervals")
        intervals = tuple(tuple(iv) for iv in support)

        def discretise(level):
            return _callable_aux_rule(weight, intervals, p0 * 2**level)

        p0 = max(4, math.ceil((n + 8) / 10))
    lo, hi = intervals[0][0], intervals[-1][1]
    halfwidth = 0.5 * (hi - lo)
    prev = discrete_stieltjes(*discretise(0), n)
    disc = math.inf
    for level in range(1, max_refinements + 1):
        cur = discrete_stieltjes(*discretise(level), n)
        disc = _discrepancy(prev[0], prev[1], cur[0], cur[1], halfwidth)
        if disc < tol:
            return RecurrenceCoefficients(*cur)
        prev = cur
    raise ConvergenceError("Stieltjes discretisation did not converge", disc)
