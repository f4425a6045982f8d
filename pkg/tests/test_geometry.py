import pytest

from liesym.expr import Verdict, is_zero, normalize, parse
from liesym.geometry import (
    ChartMismatchError, Metric, SingularMetricError, VectorField, christoffel, conformal_transform,
    covariant_hessian, curvature, laplace_beltrami, laplacian_divergence_form,
    lie_derivative_metric,
)


def zero(e, **kw):
    return is_zero(e, **kw).verdict is Verdict.ZERO


@pytest.fixture(scope="module")
def polar():
    return Metric.diagonal(("r", "th"), ["1", "r^2"], singular=["r"])


@pytest.fixture(scope="module")
def spherical():
    return Metric.diagonal(("r", "th", "ph"), ["1", "r^2", "r^2*sin(th)^2"],
                           singular=["r", "sin(th)"], domain={"th": (0.3, 2.8)})


@pytest.fixture(scope="module")
def sphere3():
    # unit S^3 in hyperspherical angles
    return Metric.diagonal(("chi", "th", "ph"),
                           ["1", "sin(chi)^2", "sin(chi)^2*sin(th)^2"],
                           domain={"chi": (0.3, 2.8), "th": (0.3, 2.8)})


def test_christoffel_polar(polar):
    G = christoffel(polar)
    assert G[0][1][1] is parse("-r")
    assert G[1][0][1] is normalize(parse("1/r"))


@pytest.mark.parametrize("name", ["polar", "spherical", "sphere3"])
def test_christoffel_lower_symmetry(name, request):
    g = request.getfixturevalue(name)
    G = christoffel(g)
    n = g.dim
    for k in range(n):
        for i in range(n):
            for j in range(n):
                assert G[k][i][j] is G[k][j][i]


@pytest.mark.parametrize("name", ["polar", "spherical"])
def test_flat_charts_have_zero_curvature(name, request):
    g = request.getfixturevalue(name)
    cb = curvature(g)
    n = g.dim
    dom = g.chart.domain
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    assert zero(cb.riemann[i][j][k][l], domain=dom)
    assert zero(cb.scalar, domain=dom)


def test_riemann_antisymmetric_in_last_pair(sphere3):
    R = curvature(sphere3).riemann
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    assert zero(R[i][j][k][l] + R[i][j][l][k], domain=sphere3.chart.domain)


def test_sphere_ricci_is_einstein(sphere3):
    # unit S^n: R_ij = (n - 1) g_ij, R = n(n - 1)
    cb = curvature(sphere3)
    dom = sphere3.chart.domain
    for i in range(3):
        for j in range(3):
            assert zero(cb.ricci[i][j] - 2 * sphere3.components[i][j], domain=dom)
            assert cb.ricci[i][j] is cb.ricci[j][i] or zero(cb.ricci[i][j] - cb.ricci[j][i], domain=dom)
    assert zero(cb.scalar - 6, domain=dom)


def test_two_sphere_scalar_curvature():
    g = Metric.diagonal(("th", "ph"), ["a^2", "a^2*sin(th)^2"], domain={"th": (0.3, 2.8)})
    assert zero(curvature(g).scalar - parse("2/a^2"), domain=g.chart.domain)


def test_laplacian_polar(polar):
    u = parse("r^3*cos(th)")
    lap = laplace_beltrami(polar, u)
    assert zero(lap - parse("8*r*cos(th)"))


def test_laplacian_two_routes_agree(spherical):
    u = parse("r^2*sin(th)*cos(ph) + exp(r)*cos(th)")
    a = laplace_beltrami(spherical, u)
    b = laplacian_divergence_form(spherical, u)
    assert zero(a - b, domain=spherical.chart.domain)


def test_lie_derivative_rotation_is_killing():
    g = Metric.diagonal(("x", "y"), ["1", "1"])
    rot = VectorField.on(g.chart, {"x": "-y", "y": "x"})
    L = lie_derivative_metric(g, rot)
    assert all(normalize(c) is parse("0") for row in L for c in row)


def test_covariant_hessian_flat():
    g = Metric.diagonal(("x", "y"), ["1", "1"])
    H = covariant_hessian(g, parse("x^2*y"))
    assert H[0][0] is parse("2*y") and H[0][1] is parse("2*x")


def test_conformal_transform_scales_components(polar):
    gb = conformal_transform(polar, parse("r"))
    assert gb.components[1][1] is parse("r^4")


def test_inverse_metric(spherical):
    inv = spherical.inverse
    for i in range(3):
        for j in range(3):
            s = sum((inv[i][k] * spherical.components[k][j] for k in range(3)), parse("0"))
            assert zero(s - (1 if i == j else 0), domain=spherical.chart.domain)


def test_degenerate_metric_rejected():
    g = Metric.from_rows(("x", "y"), [["1", "1"], ["1", "1"]])
    with pytest.raises(SingularMetricError):
        g.check_nondegenerate()


def test_asymmetric_metric_rejected():
    with pytest.raises(Exception):
        Metric.from_rows(("x", "y"), [["1", "x"], ["0", "1"]])


def test_chart_mismatch():
    g = Metric.diagonal(("x", "y"), ["1", "1"])
    h = Metric.diagonal(("u", "v"), ["1", "1"])
    v = VectorField.on(h.chart, {"u": "1"})
    with pytest.raises(ChartMismatchError):
        lie_derivative_metric(g, v)
