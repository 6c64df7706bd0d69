import math

import numpy as np
import pytest
from scipy import integrate

from quadric_ops import (
    GenGegenbauerParams,
    GeometryError,
    GeometrySpec,
    JacobiParams,
    ParameterDomainError,
    QuadricProfile,
    family_recurrence,
    jacobi_weight,
    make_geometry,
    reduced_weight_solid,
    reduced_weight_surface,
    solid_weight,
    surface_weight,
)
from quadric_ops.geometry import GEOMETRY_NAMES

ALL = [
    ("cylinder", {}),
    ("cone", {}),
    ("double_cone", {}),
    ("ball", {}),
    ("ball", {"a": -1.0}),
    ("paraboloid", {}),
    ("hyperboloid", {"rho": 0.5}),
    ("hyperboloid_two_sheets", {"rho": 0.5}),
]


def test_profiles():
    cone = make_geometry("cone")
    assert cone.profile == QuadricProfile("linear", (0.0, 1.0), ((0.0, 1.0),))
    ball = make_geometry("ball")
    assert ball.profile.phi2_coefficients() == (1.0, 0.0, -1.0)
    assert ball.intervals == ((0.0, 1.0),)
    hyp = make_geometry("hyperboloid", rho=0.3)
    assert hyp.phi(0.0) == pytest.approx(0.3)
    assert make_geometry("cylinder", radius=2.0).phi(0.3) == pytest.approx(2.0)
    two = make_geometry("hyperboloid_two_sheets", rho=0.5)
    assert two.intervals == ((-2.0, -0.5), (0.5, 2.0))


@pytest.mark.parametrize("name,params", ALL)
def test_phi_squared_consistent(name, params):
    g = make_geometry(name, params)
    for lo, hi in g.intervals:
        t = np.linspace(lo, hi, 101)
        q0, q1, q2 = g.profile.phi2_coefficients()
        assert np.allclose(g.phi(t) ** 2, q0 + q1 * t + q2 * t * t, atol=1e-14)
        assert np.allclose(g.phi2(t), g.phi(t) ** 2, atol=1e-14)


@pytest.mark.parametrize("name,params", ALL)
@pytest.mark.parametrize("p", [0.5, 1.0, 3.0])
def test_power_weight_pointwise(name, params, p):
    g = make_geometry(name, params)
    wp = g.profile.power(p)
    for lo, hi in g.intervals:
        t = np.linspace(lo, hi, 57)[1:-1]
        assert np.allclose(wp(t), g.phi(t) ** p, rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("name,params", ALL)
def test_masses_match_quadrature(name, params):
    g = make_geometry(name, params)
    w = jacobi_weight(g, 0.5, 0.25)
    red = reduced_weight_surface(g, w, 2)
    ref = sum(
        integrate.quad(lambda t: g.phi(t) ** 5 * w(t), lo, hi, limit=200)[0] for lo, hi in g.intervals
    )
    assert family_recurrence(red, 1).norm0 == pytest.approx(ref, rel=1e-9)
    sw = surface_weight(g, 0.5, 0.25)
    assert sw.c_w == pytest.approx(
        1.0 / sum(integrate.quad(lambda t: g.phi(t) * w(t), lo, hi, limit=200)[0] for lo, hi in g.intervals),
        rel=1e-9,
    )


def test_reduced_weight_classes():
    cone = make_geometry("cone")
    red = reduced_weight_surface(cone, jacobi_weight(cone, 0.5, 2.0), 3)
    assert red.classify() == ("jacobi", JacobiParams(7.5, 2.0, shifted=True, interval=(0.0, 1.0)))
    par = make_geometry("paraboloid")
    assert reduced_weight_surface(par, jacobi_weight(par), 2).classify()[1] == JacobiParams(
        2.5, 0.0, shifted=True, interval=(0.0, 1.0)
    )
    dc = make_geometry("double_cone")
    kind, p = reduced_weight_surface(dc, jacobi_weight(dc, 1.0, 1.0), 2).classify()
    assert kind == "gen_gegenbauer"
    assert (p.mu, p.nu) == pytest.approx((1.5, 2.5))
    cyl = make_geometry("cylinder")
    assert reduced_weight_surface(cyl, jacobi_weight(cyl, 1.0, 0.5), 4).classify()[0] == "jacobi"
    hyp = make_geometry("hyperboloid", rho=0.5)
    assert reduced_weight_surface(hyp, jacobi_weight(hyp), 0).classify()[0] == "stieltjes"
    hyp0 = make_geometry("hyperboloid", rho=0.0)
    kind, p = reduced_weight_surface(hyp0, jacobi_weight(hyp0), 1).classify()
    assert kind == "gen_gegenbauer" and p.nu == pytest.approx(1.5)


def test_solid_reduced_weight_cone():
    cone = make_geometry("cone")
    sw = solid_weight(cone, 0.5, 1.0, mu=0.7)
    red = reduced_weight_solid(cone, sw.w1, 2)
    kind, p = red.classify()
    assert kind == "jacobi"
    assert (p.alpha, p.beta) == pytest.approx((2 * 2 + 2 + 2 * 0.7 - 1 + 0.5, 1.0))


def test_solid_weight_pointwise():
    cone = make_geometry("cone")
    sw = solid_weight(cone, 0.5, 0.0, mu=1.5)
    x, y, t = 0.1, 0.2, 0.6
    assert sw(x, y, t) == pytest.approx(t**0.5 * (t * t - x * x - y * y), rel=1e-13)
    assert sw(0.7, 0.0, 0.6) == 0.0


def test_solid_weight_mass():
    ball = make_geometry("ball", a=-1.0)
    sw = solid_weight(ball, 0.0, 0.0, mu=0.5)
    # W = 1 on the unit ball
    assert 1.0 / sw.b_W == pytest.approx(4.0 * math.pi / 3.0, rel=1e-13)


def test_hyperboloid_approaches_double_cone():
    t = np.linspace(-1, 1, 41)
    d = make_geometry("double_cone")
    for rho in (1e-2, 1e-4, 1e-6):
        h = make_geometry("hyperboloid", rho=rho)
        assert np.max(np.abs(h.phi(t) - d.phi(t))) <= rho * (1 + 1e-12)


def test_geometry_errors():
    with pytest.raises(GeometryError):
        make_geometry("torus")
    with pytest.raises(GeometryError):
        make_geometry("hyperboloid")
    with pytest.raises(GeometryError):
        make_geometry("cone", rho=1.0)
    with pytest.raises(GeometryError):
        make_geometry("hyperboloid_two_sheets", rho=3.0)
    with pytest.raises(GeometryError):
        QuadricProfile("linear", (0.0, 1.0), ((-1.0, 1.0),))
    with pytest.raises(GeometryError):
        QuadricProfile("linear", (0.0, 1.0), ((1.0, 1.0),))
    with pytest.raises(GeometryError):
        QuadricProfile("cubic", (0.0, 1.0), ((0.0, 1.0),))


def test_nonintegrable_weight_rejected():
    cone = make_geometry("cone")
    with pytest.raises(ParameterDomainError):
        reduced_weight_surface(cone, jacobi_weight(cone, -2.5, 0.0), 0)
    with pytest.raises(ParameterDomainError):
        solid_weight(cone, mu=-0.5)


@pytest.mark.parametrize("name,params", ALL)
def test_serialisation_roundtrip(name, params):
    g = make_geometry(name, params)
    assert GeometrySpec.from_dict(g.to_dict()) == g
    assert name in GEOMETRY_NAMES
