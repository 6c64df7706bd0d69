import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import eval_jacobi, roots_jacobi

from quadric_ops import (
    ConvergenceError,
    GenGegenbauerParams,
    InsufficientDataError,
    JacobiParams,
    ParameterDomainError,
    RecurrenceCoefficients,
    Weight1D,
    family_recurrence,
    gauss_rule,
    gen_gegenbauer_eval,
    gen_gegenbauer_recurrence,
    jacobi_eval,
    jacobi_norm,
    jacobi_recurrence,
    stieltjes_recurrence,
)
from quadric_ops.poly1d import aux_rule, discrete_stieltjes, jacobi_norms

params = st.floats(min_value=-0.9, max_value=6.0)


# -- Jacobi -------------------------------------------------------------------


def test_jacobi_eval_examples():
    assert jacobi_eval(JacobiParams(0, 0), 2, 0.5) == pytest.approx(-0.125, abs=1e-15)
    # P_3^{(1,2)}(1) = binom(4, 3)
    assert jacobi_eval(JacobiParams(1, 2), 3, 1.0) == pytest.approx(4.0, rel=1e-14)


@given(params, params, st.integers(0, 25))
@settings(max_examples=60, deadline=None)
def test_jacobi_eval_matches_scipy(alpha, beta, n):
    s = np.linspace(-1, 1, 13)
    ref = eval_jacobi(n, alpha, beta, s)
    got = jacobi_eval(JacobiParams(alpha, beta), n, s)
    assert np.allclose(got, ref, rtol=1e-11, atol=1e-11 * np.max(np.abs(ref)))


@given(params, params, st.integers(0, 20))
@settings(max_examples=40, deadline=None)
def test_shifted_form_is_standard_at_one_minus_two_t(alpha, beta, n):
    t = np.linspace(0, 1, 9)
    sh = jacobi_eval(JacobiParams(alpha, beta, shifted=True), n, t)
    std = jacobi_eval(JacobiParams(alpha, beta), n, 1 - 2 * t)
    assert np.allclose(sh, std, rtol=1e-13, atol=1e-13)


@given(params, st.integers(0, 20))
@settings(max_examples=40, deadline=None)
def test_jacobi_parity(alpha, n):
    s = np.linspace(-1, 1, 11)
    p = JacobiParams(alpha, alpha)
    assert np.allclose(jacobi_eval(p, n, -s), (-1) ** n * jacobi_eval(p, n, s), atol=1e-11)


def test_jacobi_norm_example_and_quadrature():
    assert jacobi_norm(JacobiParams(0, 0), 1) == pytest.approx(1 / 3, rel=1e-15)
    x, w = roots_jacobi(40, 1.5, 0.25)
    w = w / w.sum()
    for n in range(12):
        ref = np.sum(w * eval_jacobi(n, 1.5, 0.25, x) ** 2)
        assert jacobi_norm(JacobiParams(1.5, 0.25), n) == pytest.approx(ref, rel=1e-12)


def test_jacobi_norms_large_parameters_finite():
    h = jacobi_norms(200.0, 0.0, 50)
    assert np.all(np.isfinite(h)) and np.all(h > 0)


def test_legendre_recurrence_closed_form():
    rc = jacobi_recurrence(JacobiParams(0, 0), 30)
    k = np.arange(1, 30)
    assert rc.norm0 == pytest.approx(2.0)
    assert np.allclose(rc.a, 0, atol=1e-15)
    assert np.allclose(rc.b[1:], k**2 / (4.0 * k**2 - 1), rtol=1e-14)


def test_jacobi_recurrence_arbitrary_interval():
    # weight (3 - t)^2 on (1, 3) is an affine image of (1-s)^2 on (-1, 1)
    rc = jacobi_recurrence(JacobiParams(2.0, 0.0, interval=(1.0, 3.0)), 5)
    mass = integrate.quad(lambda t: (3 - t) ** 2, 1, 3)[0]
    assert rc.norm0 == pytest.approx(mass, rel=1e-14)
    g = gauss_rule(rc, 5)
    for k in range(10):
        ref = integrate.quad(lambda t: t**k * (3 - t) ** 2, 1, 3)[0]
        assert g.integrate(lambda t: t**k) == pytest.approx(ref, rel=1e-12)


def test_jacobi_params_domain():
    with pytest.raises(ParameterDomainError):
        JacobiParams(-1.0, 0.0)
    with pytest.raises(ParameterDomainError):
        JacobiParams(0.0, 0.0, interval=(1.0, 1.0))


# -- generalized Gegenbauer -------------------------------------------------


def test_gen_gegenbauer_parity_and_legendre():
    t = np.linspace(-1, 1, 17)
    p = GenGegenbauerParams(0.7, 1.3)
    for n in range(8):
        assert np.allclose(gen_gegenbauer_eval(p, n, -t), (-1) ** n * gen_gegenbauer_eval(p, n, t))
    # mu = 1/2, nu = 0 is the Legendre weight: same polynomials up to a constant
    leg = GenGegenbauerParams(0.5, 0.0)
    for n in range(1, 8):
        ratio = gen_gegenbauer_eval(leg, n, t[t != 0]) / eval_jacobi(n, 0, 0, t[t != 0])
        assert np.allclose(ratio, ratio[0], rtol=1e-12)


def test_gen_gegenbauer_orthogonality_by_quad():
    p = GenGegenbauerParams(0.8, 0.6)
    wfun = lambda t: abs(t) ** 1.2 * (1 - t * t) ** 0.3
    for i in range(5):
        for j in range(i):
            val = integrate.quad(
                lambda t: wfun(t) * gen_gegenbauer_eval(p, i, t) * gen_gegenbauer_eval(p, j, t), -1, 1, points=[0]
            )[0]
            assert abs(val) < 1e-10


def test_gen_gegenbauer_recurrence_vs_quad():
    p = GenGegenbauerParams(0.8, 0.6, half_width=2.0)
    rc = gen_gegenbauer_recurrence(p, 12)
    mass = integrate.quad(lambda t: p.weight(t), -2, 2, points=[0])[0]
    assert rc.norm0 == pytest.approx(mass, rel=1e-10)
    g = gauss_rule(rc, 12)
    for k in range(0, 24, 2):
        ref = integrate.quad(lambda t: t**k * p.weight(t), -2, 2, points=[0], limit=200)[0]
        assert g.integrate(lambda t: t**k) == pytest.approx(ref, rel=1e-9)


# -- recurrences and Gauss rules ---------------------------------------------


def test_gauss_rule_example():
    rc = jacobi_recurrence(JacobiParams(1.0, 0.0, shifted=True), 1)
    g = gauss_rule(rc, 1)
    assert g.nodes[0] == pytest.approx(2 / 3, abs=1e-15)
    assert g.weights[0] == pytest.approx(0.5, abs=1e-15)


@given(params, params, st.integers(1, 40))
@settings(max_examples=50, deadline=None)
def test_gauss_rule_matches_scipy(alpha, beta, n):
    g = gauss_rule(jacobi_recurrence(JacobiParams(alpha, beta), n), n)
    x, w = roots_jacobi(n, alpha, beta)
    assert np.allclose(g.nodes, x, atol=1e-12)
    assert np.allclose(g.weights, w, rtol=1e-10, atol=1e-14 * w.max())
    assert np.sum(g.weights) == pytest.approx(jacobi_recurrence(JacobiParams(alpha, beta), 1).norm0, rel=1e-12)


def test_gauss_rule_errors():
    rc = jacobi_recurrence(JacobiParams(0, 0), 3)
    with pytest.raises(InsufficientDataError):
        gauss_rule(rc, 4)
    with pytest.raises(InsufficientDataError):
        gauss_rule(rc, 0)
    with pytest.raises(InsufficientDataError):
        rc.orthonormal(3, 0.0)


def test_orthonormal_evaluation_is_orthonormal():
    rc = jacobi_recurrence(JacobiParams(0.3, 2.5, shifted=True), 26)
    g = gauss_rule(rc, 26)
    Q = rc.orthonormal(25, g.nodes)
    assert np.allclose((Q * g.weights) @ Q.T, np.eye(26), atol=1e-13)


def test_recurrence_validation():
    with pytest.raises(ParameterDomainError):
        RecurrenceCoefficients([0.0, 0.0], [1.0, -1.0])
    with pytest.raises(InsufficientDataError):
        RecurrenceCoefficients([0.0], [1.0, 1.0])


# -- structured weights and Stieltjes -----------------------------------------


def test_weight_classification():
    assert Weight1D(((0, 1),), roots=((0, 2.5), (1, 1.0))).classify() == (
        "jacobi",
        JacobiParams(2.5, 1.0, shifted=True, interval=(0.0, 1.0)),
    )
    kind, p = Weight1D(((-1, 1),), roots=((0, 3.0),)).classify()
    assert kind == "gen_gegenbauer" and p.nu == pytest.approx(1.5) and p.mu == pytest.approx(0.5)
    assert Weight1D(((-1, 1),), quadratics=((0, 0.25, 0.5),)).classify()[0] == "stieltjes"
    # a quadratic with no imaginary part merges into the root list
    merged = Weight1D(((-1, 1),), quadratics=((0.0, 0.0, 1.5),))
    assert merged.quadratics == () and merged.power_at(0.0) == pytest.approx(3.0)


def test_weight_validate_and_roundtrip():
    with pytest.raises(ParameterDomainError):
        Weight1D(((0, 1),), roots=((0, -1.0),)).validate()
    with pytest.raises(ParameterDomainError):
        Weight1D(((0, 1), (0.5, 2)))
    w = Weight1D(((-2, -0.5), (0.5, 2)), 1.5, ((0.0, 1.0),), ((0.1, 0.2, 0.5),))
    assert Weight1D.from_dict(w.to_dict()) == w


def test_family_recurrence_scale():
    w = Weight1D(((0, 1),), scale=3.0, roots=((0, 1.0),))
    assert family_recurrence(w, 4).norm0 == pytest.approx(1.5, rel=1e-14)


def test_stieltjes_legendre():
    rc = stieltjes_recurrence(Weight1D(((-1, 1),)), n=40)
    k = np.arange(1, 40)
    assert rc.norm0 == pytest.approx(2.0, rel=1e-13)
    assert np.max(np.abs(rc.a)) < 1e-13
    assert np.allclose(rc.b[1:], k**2 / (4.0 * k**2 - 1), rtol=1e-12)


def test_stieltjes_callable_weight():
    rc = stieltjes_recurrence(lambda t: np.ones_like(t), support=[(-1.0, 1.0)], n=10)
    k = np.arange(1, 10)
    assert np.allclose(rc.b[1:], k**2 / (4.0 * k**2 - 1), rtol=1e-11)
    with pytest.raises(ParameterDomainError):
        stieltjes_recurrence(lambda t: t, n=3)


def test_stieltjes_interior_root_matches_gen_gegenbauer():
    # |t|^3 (1 - t)(1 + t) seen as a generic structured weight
    w = Weight1D(((-1, 1),), roots=((0, 3.0), (-1, 1.0), (1, 1.0)))
    from quadric_ops.poly1d import aux_rule as _aux

    x, wts = _aux(w, 60)
    a, b = discrete_stieltjes(x, wts, 20)
    ref = gen_gegenbauer_recurrence(GenGegenbauerParams(1.5, 1.5), 20)
    assert np.max(np.abs(a - ref.a)) < 1e-13
    assert np.allclose(b, ref.b, rtol=1e-12)


def test_stieltjes_jacobi_endpoint_singularities():
    w = Weight1D(((0, 1),), roots=((0, -0.5), (1, 0.75)))
    rs = stieltjes_recurrence(w, n=25)
    rj = jacobi_recurrence(JacobiParams(-0.5, 0.75, shifted=True), 25)
    assert np.allclose(rs.a, rj.a, atol=1e-13)
    assert np.allclose(rs.b, rj.b, rtol=1e-12)


def test_stieltjes_two_intervals_symmetric():
    w = Weight1D(((-2, -0.5), (0.5, 2)))
    rc = stieltjes_recurrence(w, n=20)
    assert np.max(np.abs(rc.a)) < 1e-13
    g = gauss_rule(rc, 20)
    for k in range(0, 40, 2):
        exact = 2 * (2 ** (k + 1) - 0.5 ** (k + 1)) / (k + 1)
        assert g.integrate(lambda t: t**k) == pytest.approx(exact, rel=1e-12)


def test_stieltjes_near_singularity():
    # (t^2 + eps^2)^(1/2) with eps tiny: close to |t|
    w = Weight1D(((-1, 1),), quadratics=((0.0, 1e-16, 0.5),))
    rc = stieltjes_recurrence(w, n=20)
    ref = gen_gegenbauer_recurrence(GenGegenbauerParams(0.5, 0.5), 20)
    assert np.allclose(rc.b, ref.b, rtol=1e-7)


def test_aux_rule_integrates_weight():
    w = Weight1D(((0, 1),), roots=((0, 0.4),), quadratics=((0.3, 1e-4, -0.5),))
    x, wts = aux_rule(w, 40)
    ref = integrate.quad(w, 0, 1, points=[0.3], limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    assert np.sum(wts) == pytest.approx(ref, rel=1e-10)


def test_stieltjes_convergence_error():
    with pytest.raises(ConvergenceError) as info:
        stieltjes_recurrence(lambda t: np.abs(t) ** -0.9, support=[(-1.0, 1.0)], n=8, max_refinements=1)
    assert info.value.discrepancy > 1e-12
