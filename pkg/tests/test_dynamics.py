import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from liesym.expr import DomainError, parse
from liesym.geometry import Metric, laplacian
from liesym.symmetry import Lagrangian
from liesym.dynamics import (
    SolutionCandidate, bessel_derivative, bessel_i, bessel_k, drift, euler_lagrange,
    evaluate_along, integrate, pde_residuals, sample_points,
)

LINE = Metric.diagonal(("x",), ["1"])
E2 = Metric.diagonal(("x", "y"), ["1", "1"])


@pytest.fixture(scope="module")
def oscillator():
    return euler_lagrange(Lagrangian(LINE, parse("x^2/2")))


def test_euler_lagrange_oscillator(oscillator):
    assert oscillator.accelerations[0] is parse("-x")


def test_euler_lagrange_polar_kepler():
    g = Metric.diagonal(("r", "th"), ["1", "r^2"])
    sys = euler_lagrange(Lagrangian(g, parse("-1/r")))
    r_dd, th_dd = sys.accelerations
    assert r_dd is parse("r*th_dot^2 - r^(-2)")
    assert th_dd is parse("-2*r_dot*th_dot/r")


def _error(sys, h):
    traj = integrate(sys, (1.0, 0.0), (0.0, 2.0), h)
    return abs(traj.states[-1][0] - math.cos(traj.times[-1]))


def test_rk4_fourth_order(oscillator):
    e1, e2 = _error(oscillator, 0.1), _error(oscillator, 0.05)
    order = math.log2(e1 / e2)
    assert 3.7 < order < 4.3


def test_rk4_hits_end_of_span(oscillator):
    traj = integrate(oscillator, (1.0, 0.0), (0.0, 1.0), 0.3)
    assert traj.times[-1] == pytest.approx(1.0)
    assert not traj.truncated


def test_energy_drift_small(oscillator):
    traj = integrate(oscillator, (1.0, 0.5), (0.0, 5.0), 1e-3)
    d = drift(traj, parse("x_dot^2/2 + x^2/2"))
    assert d.max_abs < 1e-10
    assert d.initial == pytest.approx(0.625)


def test_drift_detects_non_integral(oscillator):
    traj = integrate(oscillator, (1.0, 0.0), (0.0, 1.0), 1e-2)
    assert drift(traj, parse("x")).max_abs > 0.4


def test_domain_error_truncates():
    sys = euler_lagrange(Lagrangian(LINE, parse("sqrt(x)")))
    # reaches x = 0 in finite time, after which sqrt(x) is undefined
    traj = integrate(sys, (1.0, 0.0), (0.0, 5.0), 1e-3)
    assert traj.truncated
    assert traj.times[-1] < 5.0


def test_time_dependent_integral_evaluated_with_time(oscillator):
    traj = integrate(oscillator, (1.0, 0.0), (0.0, 1.0), 1e-3)
    # x cos t - x_dot sin t is conserved for x'' = -x
    vals = evaluate_along(traj, parse("x*cos(t) - x_dot*sin(t)"))
    assert max(abs(v - 1.0) for v in vals) < 1e-9


# -- Bessel functions against an arbitrary-precision oracle -------------------------


ORDERS = [0.0, 0.5, 1.0, 1.5, 2.0, 3.3, 7.0]
XS = [1e-3, 0.07, 0.5, 1.0, 1.99, 2.01, 5.0, 12.5, 30.0]


@pytest.mark.parametrize("nu", ORDERS)
@pytest.mark.parametrize("x", XS)
def test_bessel_i_oracle(nu, x):
    ref = float(mpmath.besseli(nu, x))
    assert bessel_i(nu, x) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("nu", ORDERS)
@pytest.mark.parametrize("x", XS)
def test_bessel_k_oracle(nu, x):
    ref = float(mpmath.besselk(nu, x))
    assert bessel_k(nu, x) == pytest.approx(ref, rel=1e-10)


@settings(max_examples=80, deadline=None)
@given(st.floats(0.0, 6.0), st.floats(1e-3, 30.0))
def test_wronskian(nu, x):
    # I_nu K_{nu+1} + I_{nu+1} K_nu = 1/x
    w = bessel_i(nu, x) * bessel_k(nu + 1, x) + bessel_i(nu + 1, x) * bessel_k(nu, x)
    assert w * x == pytest.approx(1.0, rel=1e-10)


def test_negative_order_reflection():
    assert bessel_k(-2.5, 1.3) == pytest.approx(bessel_k(2.5, 1.3), rel=1e-14)
    assert bessel_i(-2.0, 1.3) == pytest.approx(bessel_i(2.0, 1.3), rel=1e-14)


@pytest.mark.parametrize("kind, fn", [("I", mpmath.besseli), ("K", mpmath.besselk)])
def test_bessel_derivatives(kind, fn):
    for n in (1, 2):
        ref = float(mpmath.diff(lambda t: fn(1.5, t), 2.2, n))
        assert bessel_derivative(kind, 1.5, 2.2, n) == pytest.approx(ref, rel=1e-9)


def test_bessel_rejects_nonpositive_argument():
    with pytest.raises(DomainError):
        bessel_k(1.0, 0.0)


# -- PDE residuals --------------------------------------------------------------------


def test_harmonic_function_residual():
    model = laplacian(E2)
    cand = SolutionCandidate(parse("exp(x)*cos(y)"), ("x", "y"))
    pts = sample_points(cand, 10)
    assert max(abs(r) for r in pde_residuals(model, cand, pts)) < 1e-12


def test_stencil_agrees_with_symbolic():
    model = laplacian(E2).with_potential(parse("x^2 + y^2"))
    cand = SolutionCandidate(parse("exp(x^2/2 + y^2/2)*x"), ("x", "y"))
    pts = sample_points(cand, 6)
    sym = pde_residuals(model, cand, pts)
    fd = pde_residuals(model, cand, pts, method="stencil")
    for a, b in zip(sym, fd):
        assert abs(a - b) < 1e-3


def test_non_solution_detected():
    model = laplacian(E2)
    cand = SolutionCandidate(parse("x^2"), ("x", "y"))
    assert max(abs(r) for r in pde_residuals(model, cand, sample_points(cand, 4))) == pytest.approx(2.0)


def test_bessel_solution_of_modified_equation():
    # u = I_1(r) solves u'' + u'/r - u/r^2 = u, i.e. Delta(u e^{i th}) = u e^{i th} in the plane
    g = Metric.diagonal(("r", "th"), ["1", "r^2"])
    model = laplacian(g).with_potential(1)
    cand = SolutionCandidate(parse("besselI(1, r)*cos(th)"), ("r", "th"), domain={"r": (0.5, 5.0)})
    res = pde_residuals(model, cand, sample_points(cand, 12))
    assert max(abs(r) for r in res) < 1e-9
