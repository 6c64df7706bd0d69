import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from scipy import integrate
from scipy.special import eval_jacobi

from quadric_ops import (
    BasisIndexError,
    GeometryError,
    SurfaceBasis,
    SurfaceIndex,
    make_geometry,
    surface_cubature,
    surface_dim,
    surface_eval,
    surface_indices,
    surface_inner_product,
)
from quadric_ops.surface import degree_from_surface_length


def test_dimensions_and_order():
    assert [surface_dim(n, cumulative=False) for n in range(5)] == [1, 3, 5, 7, 9]
    assert surface_dim(4) == 25
    idx = surface_indices(3)
    assert len(idx) == 16
    assert [i.position for i in idx] == list(range(16))
    assert idx[1:4] == [SurfaceIndex(1, 0, 1), SurfaceIndex(1, 1, 1), SurfaceIndex(1, 1, 2)]
    assert degree_from_surface_length(36) == 5
    with pytest.raises(BasisIndexError):
        degree_from_surface_length(10)
    with pytest.raises(BasisIndexError):
        SurfaceIndex(2, 3, 1)
    with pytest.raises(BasisIndexError):
        SurfaceIndex(2, 0, 2)


# Independent oracles: explicit Jacobi polynomials (scipy) in the natural
# variable, times Re/Im (x + i y)^m, normalised by adaptive quadrature.
ALPHA, BETA = 0.5, 1.5


def _cone(k, m, t):
    return (-1) ** k * eval_jacobi(k, 2 * m + 1 + ALPHA, BETA, 1 - 2 * t)


def _paraboloid(k, m, t):
    return (-1) ** k * eval_jacobi(k, m + 0.5 + ALPHA, BETA, 1 - 2 * t)


def _cylinder(k, m, t):
    return eval_jacobi(k, ALPHA, BETA, t)


def _sphere(k, m, t):
    return eval_jacobi(k, m + 0.5 + ALPHA, m + 0.5 + BETA, t)


def _double_cone(k, m, t):
    j, odd = divmod(k, 2)
    if odd:
        return t * eval_jacobi(j, ALPHA, m + 1.0, 2 * t * t - 1)
    return eval_jacobi(j, ALPHA, float(m), 2 * t * t - 1)


ORACLES = [
    ("cone", {}, (ALPHA, BETA), _cone),
    ("paraboloid", {}, (ALPHA, BETA), _paraboloid),
    ("cylinder", {}, (ALPHA, BETA), _cylinder),
    ("ball", {"a": -1.0}, (ALPHA, BETA), _sphere),
    ("double_cone", {}, (ALPHA, ALPHA), _double_cone),
]


@pytest.mark.parametrize("name,params,ab,radial", ORACLES, ids=[o[0] for o in ORACLES])
def test_matches_explicit_formula(name, params, ab, radial):
    g = make_geometry(name, params)
    basis = SurfaceBasis(g, alpha=ab[0], beta=ab[1])
    w = basis.weight.w
    (lo, hi), = g.intervals
    rng = np.random.default_rng(3)
    t = rng.uniform(lo, hi, 25)
    th = rng.uniform(0, 2 * np.pi, 25)
    x, y = g.phi(t) * np.cos(th), g.phi(t) * np.sin(th)
    pts = [0.0] if lo < 0 < hi else None
    mass = integrate.quad(lambda s: g.phi(s) * w(s), lo, hi, points=pts)[0]
    for n in range(7):
        for m in range(n + 1):
            k = n - m
            rad2 = integrate.quad(
                lambda s: g.phi(s) ** (2 * m + 1) * w(s) * radial(k, m, s) ** 2, lo, hi, points=pts, limit=200
            )[0]
            norm2 = rad2 / mass * (1.0 if m == 0 else 0.5)
            for ell in ((1,) if m == 0 else (1, 2)):
                z = (x + 1j * y) ** m
                harm = z.real if ell == 1 else z.imag
                ref = radial(k, m, t) * harm / math.sqrt(norm2)
                got = surface_eval(basis, SurfaceIndex(n, m, ell), x, y, t)
                assert np.allclose(got, ref, rtol=1e-9, atol=1e-10), (n, m, ell)


def test_cone_degree_one_example():
    basis = SurfaceBasis(make_geometry("cone"))
    x = np.array([0.3, -0.2])
    y = np.array([0.4, 0.0])
    t = np.hypot(x, y)
    assert np.allclose(basis.eval(SurfaceIndex(1, 1, 1), x, y, t), 2 * x)
    assert basis.eval(SurfaceIndex(0, 0, 1), x, y, t) == pytest.approx(1.0)


GRAM_CASES = [
    ("cone", {}, 0.0, 0.0),
    ("paraboloid", {"b": 2.0}, 1.0, 0.5),
    ("cylinder", {"a": 0.0, "b": 3.0, "radius": 0.5}, 0.25, 2.0),
    ("ball", {}, 0.0, 0.0),
    ("ball", {"a": -0.5}, 1.0, 0.0),
    ("double_cone", {}, 0.3, 0.7),
    ("hyperboloid", {"rho": 1e-3}, 0.0, 0.0),
    ("hyperboloid", {"rho": 2.0}, 0.5, 0.5),
    ("hyperboloid_two_sheets", {"rho": 0.4}, 0.0, 0.0),
]


@pytest.mark.parametrize("name,params,alpha,beta", GRAM_CASES)
def test_gram_identity(name, params, alpha, beta):
    basis = SurfaceBasis(make_geometry(name, params), alpha=alpha, beta=beta)
    rule = surface_cubature(basis, 9)
    V = basis.eval_all(8, *rule.points.T)
    assert np.allclose((V * rule.weights) @ V.T, np.eye(surface_dim(8)), atol=1e-11)


def test_eval_all_matches_eval():
    basis = SurfaceBasis(make_geometry("paraboloid"), alpha=0.2)
    t = np.array([0.1, 0.5, 0.9])
    th = np.array([0.3, 2.0, 4.0])
    x, y = np.sqrt(t) * np.cos(th), np.sqrt(t) * np.sin(th)
    V = basis.eval_all(5, x, y, t)
    rows = [basis.eval(i, x, y, t) for i in surface_indices(5)]
    assert np.allclose(V, rows, atol=1e-13)


def test_inner_product_helpers():
    basis = SurfaceBasis(make_geometry("cone"))
    i, j = SurfaceIndex(3, 2, 1), SurfaceIndex(3, 1, 2)
    fi = lambda x, y, t: basis.eval(i, x, y, t, check=False)
    fj = lambda x, y, t: basis.eval(j, x, y, t, check=False)
    assert surface_inner_product(basis, fi, fi, n=5) == pytest.approx(1.0, abs=1e-13)
    assert abs(surface_inner_product(basis, fi, fj, n=5)) < 1e-13
    assert basis.weight.c_w == pytest.approx(2.0)


def test_double_cone_parity():
    basis = SurfaceBasis(make_geometry("double_cone"), alpha=0.5, beta=0.5)
    t = np.array([0.2, 0.6, 0.95])
    th = np.array([0.1, 1.7, 3.3])
    x, y = t * np.cos(th), t * np.sin(th)
    for idx in surface_indices(6):
        a = basis.eval(idx, x, y, t)
        b = basis.eval(idx, x, y, -t)
        assert np.allclose(b, (-1) ** (idx.n - idx.m) * a, atol=1e-12)


def test_apex_is_finite():
    basis = SurfaceBasis(make_geometry("cone"))
    V = basis.eval_all(6, 0.0, 0.0, 0.0)
    assert np.all(np.isfinite(V))
    for i in surface_indices(6):
        if i.m > 0:
            assert V[i.position] == 0.0


def test_synthesize_batch():
    basis = SurfaceBasis(make_geometry("cone"))
    rng = np.random.default_rng(0)
    c = rng.standard_normal((surface_dim(4), 3))
    t = np.array([0.2, 0.7])
    x, y = t * 0.6, t * 0.8
    out = basis.synthesize(c, x, y, t)
    assert out.shape == (2, 3)
    for b in range(3):
        assert np.allclose(out[:, b], basis.synthesize(c[:, b], x, y, t))


def test_off_surface_rejected():
    basis = SurfaceBasis(make_geometry("cone"))
    with pytest.raises(GeometryError):
        basis.eval(SurfaceIndex(1, 0, 1), 0.5, 0.0, 0.3)
    with pytest.raises(GeometryError):
        basis.eval(SurfaceIndex(1, 0, 1), 1.5, 0.0, 1.5)
    two = SurfaceBasis(make_geometry("hyperboloid_two_sheets", rho=0.5))
    with pytest.raises(GeometryError):
        two.eval(SurfaceIndex(0, 0, 1), 0.0, 0.0, 0.0)


def test_concurrent_evaluation_is_consistent():
    def work(_):
        basis = shared
        t = np.linspace(-1, 1, 11)
        return basis.eval_all(12, np.sqrt(t * t + 0.09), 0.0 * t, t)

    shared = SurfaceBasis(make_geometry("hyperboloid", rho=0.3))
    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(work, range(16)))
    for r in results[1:]:
        assert np.array_equal(r, results[0])
