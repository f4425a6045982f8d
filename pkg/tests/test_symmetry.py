import pytest

from liesym.config import CheckConfig
from liesym.expr import Bindings, Instantiation, Verdict, is_zero, parse
from liesym.geometry import Metric, VectorField
from liesym.symmetry import (
    HV, KV, NOTCKV, PROPER, SPCKV, Lagrangian, NotConformalError, PointSymmetry,
    ckv_ricci_identity, classify, combine_verdicts, conformal_lagrangian, conformal_psi_law,
    induced_noether, kg_symmetry_residual, kv_discover_polynomial, noether_condition,
    noether_integral, noether_residual, null2d_condition, schrodinger_check_gradient,
    schrodinger_check_nongradient, time_free, yamabe_residual,
)
from liesym.symmetry.report import NotASymmetryError

E2 = Metric.diagonal(("x", "y"), ["1", "1"])
E3 = Metric.diagonal(("x", "y", "z"), ["1", "1", "1"])
F_SQ = Bindings({}, {"f": Instantiation(["s"], "s^2")})
F_EXP = Bindings({}, {"f": Instantiation(["s"], "exp(s)")})


def vf(g, **comps):
    return VectorField.on(g.chart, comps)


# -- classification ------------------------------------------------------------


@pytest.mark.parametrize("comps, cls", [
    ({"x": "1"}, KV),
    ({"x": "-y", "y": "x"}, KV),
    ({"x": "x", "y": "y"}, HV),
    ({"x": "x^2 - y^2", "y": "2*x*y"}, SPCKV),  # z^2: psi = 2x has zero Hessian
    ({"x": "x^3 - 3*x*y^2", "y": "3*x^2*y - y^3"}, PROPER),
    ({"x": "x*y", "y": "1"}, NOTCKV),
])
def test_classify_plane(comps, cls):
    assert classify(E2, vf(E2, **comps)).cls == cls


def test_special_conformal_in_three_dimensions():
    # K = 2 x (x.r) - r^2 e_x type field with psi = 2x
    K = vf(E3, x="x^2 - y^2 - z^2", y="2*x*y", z="2*x*z")
    c = classify(E3, K)
    assert c.cls == SPCKV
    assert c.psi is parse("2*x")


def test_homothety_and_gradient():
    c = classify(E2, vf(E2, x="x", y="y"))
    assert c.homothety is parse("1")
    assert c.gradient


def test_classify_verdicts_carry_through():
    c = classify(E2, vf(E2, x="-y", y="x"))
    assert not c.gradient
    assert c.tests["conformal"] is Verdict.ZERO


# -- Klein-Gordon ----------------------------------------------------------------


@pytest.mark.parametrize("b", [F_SQ, F_EXP])
def test_dilation_invariant_potential(b):
    D = vf(E2, x="x", y="y")
    r = kg_symmetry_residual(E2, parse("x^(-2)*f(y/x)"), D, bindings=b)
    assert r.verdict is Verdict.ZERO


def test_wrong_weight_fails():
    D = vf(E2, x="x", y="y")
    r = kg_symmetry_residual(E2, parse("x^(-1)*f(y/x)"), D, bindings=F_SQ)
    assert r.verdict is Verdict.NONZERO
    assert r.witness is not None


def test_kg_needs_conformal_vector():
    with pytest.raises(NotConformalError):
        kg_symmetry_residual(E2, parse("x"), vf(E2, x="x*y", y="1"))


def test_three_dimensional_branch_uses_laplacian_of_psi():
    # psi = 2x is harmonic in flat space, so V = 0 must pass for the special CKV
    K = vf(E3, x="x^2 - y^2 - z^2", y="2*x*y", z="2*x*z")
    assert kg_symmetry_residual(E3, 0, K).verdict is Verdict.ZERO


def test_yamabe_on_sphere():
    g = Metric.diagonal(("chi", "th", "ph"), ["1", "sin(chi)^2", "sin(chi)^2*sin(th)^2"],
                        domain={"chi": (0.3, 2.8), "th": (0.3, 2.8)})
    rot = vf(g, ph="1")
    assert yamabe_residual(g, 0, rot).verdict is Verdict.ZERO


def test_ckv_ricci_identity_polar_dilation():
    g = Metric.diagonal(("r", "th"), ["1", "r^2"], singular=["r"])
    assert ckv_ricci_identity(g, vf(g, r="r")).verdict is Verdict.ZERO


# -- heat / Schrodinger -------------------------------------------------------------


def test_schrodinger_nongradient_constant():
    # V = x: d_x V = 1, so a0 = -1
    Y = vf(E2, x="1")
    assert schrodinger_check_nongradient(E2, parse("x"), Y, a0=-1).verdict is Verdict.ZERO
    assert schrodinger_check_nongradient(E2, parse("x"), Y, a0=0).verdict is Verdict.NONZERO


def test_schrodinger_rejects_proper_ckv():
    with pytest.raises(NotConformalError):
        schrodinger_check_nongradient(E2, 0, vf(E2, x="x^2 - y^2", y="2*x*y"))


def test_schrodinger_gradient_branch():
    # S = x, Y = d_x, V = x^2/2*c^2... choose V with Y(V) = c^2 S / 2 - d
    r = schrodinger_check_gradient(E2, parse("x^2/4"), parse("x"), parse("1"), parse("0"),
                                   T=parse("exp(t)"))
    assert r.verdict is Verdict.ZERO


# -- null plane ---------------------------------------------------------------------


def test_null2d_condition():
    # xi = w d_w - z d_z leaves V = g(w z) with (F V)_w + (G V)_z = 0
    b = Bindings({}, {"g": Instantiation(["s"], "s^2")})
    r = null2d_condition("w", "-z", parse("g(w*z)"), bindings=b)
    assert r.verdict is Verdict.ZERO


def test_null2d_rejects_mixed_dependence():
    with pytest.raises(ValueError):
        null2d_condition("z", "0", "1")


# -- conformal factor law ------------------------------------------------------------


def test_psi_law_translation_to_polar_like_factor():
    N = parse("1/sqrt(x^2 + y^2)")
    rep = conformal_psi_law(E2, N, vf(E2, x="x", y="y"), CheckConfig())
    assert rep.verdict is Verdict.ZERO
    assert rep.extra["class_bar"] == KV


# -- Noether ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def kepler():
    return Lagrangian(E2, parse("-1/sqrt(x^2 + y^2)"))


def test_time_translation_and_energy(kepler):
    X = PointSymmetry.on(kepler, 1, {})
    assert noether_residual(kepler, X).verdict is Verdict.ZERO
    I = noether_integral(kepler, X)
    assert time_free(I)
    assert is_zero(I - kepler.energy()).verdict is Verdict.ZERO


def test_rotation_gives_angular_momentum(kepler):
    X = PointSymmetry.on(kepler, 0, {"x": parse("-y"), "y": parse("x")})
    I = noether_integral(kepler, X)
    assert I.free_symbols == {"x", "y", "x_dot", "y_dot"}
    assert noether_residual(kepler, X).verdict is Verdict.ZERO


def test_non_symmetry_fails_per_monomial(kepler):
    X = PointSymmetry.on(kepler, 0, {"x": parse("1")})
    rep = noether_residual(kepler, X)
    assert rep.verdict is Verdict.NONZERO
    assert "1" in rep.labels


def test_noether_integral_refuses_non_symmetry(kepler):
    with pytest.raises(NotASymmetryError):
        noether_integral(kepler, PointSymmetry.on(kepler, 0, {"x": parse("1")}))


def test_free_particle_galilean_boost_needs_gauge():
    L = Lagrangian(E2, 0)
    X = PointSymmetry.on(L, 0, {"x": parse("t")})
    assert noether_residual(L, X, 0).verdict is Verdict.NONZERO
    assert noether_residual(L, X, parse("x")).verdict is Verdict.ZERO


def test_noether_condition_has_no_accelerations(kepler):
    X = PointSymmetry.on(kepler, parse("t"), {"x": parse("x/2"), "y": parse("y/2")})
    c = noether_condition(kepler, X)
    assert not any(s.endswith("_ddot") for s in c.free_symbols)


def test_induced_symmetry_of_homothety():
    # V = 1/(x^2 + y^2) has weight -2 under the dilation, so a0 = 0
    L = Lagrangian(E2, parse("1/(x^2 + y^2)"))
    Y = vf(E2, x="x", y="y")
    c = classify(E2, Y)
    X, f = induced_noether(L, Y, c.psi, 0)
    assert noether_residual(L, X, f).verdict is Verdict.ZERO


def test_conformal_lagrangian_reparametrizes():
    L = Lagrangian(E2, parse("1"))
    Lb = conformal_lagrangian(L, parse("x"))
    assert Lb.metric.components[0][0] is parse("x^2")
    assert Lb.potential is parse("x^(-2)")


def test_combine_verdicts():
    Z, N, I, S = Verdict.ZERO, Verdict.NONZERO, Verdict.INCONCLUSIVE, Verdict.SKIPPED
    assert combine_verdicts([Z, I, N]) is N
    assert combine_verdicts([Z, I]) is I
    assert combine_verdicts([S, Z]) is Z
    assert combine_verdicts([S]) is S


# -- Killing vector discovery ---------------------------------------------------------


@pytest.mark.parametrize("g, dim", [(E2, 3), (E3, 6)])
def test_kv_discover_dimension(g, dim):
    basis, n = kv_discover_polynomial(g, 1)
    assert n == dim
    assert all(classify(g, v).cls == KV for v in basis)


def test_kv_discover_null_plane():
    g = Metric.from_rows(("w", "z"), [["0", "1"], ["1", "0"]])
    # w d_w - z d_z plus two translations
    assert kv_discover_polynomial(g, 1)[1] == 3


def test_kv_discover_degree_two_adds_nothing_in_flat_space():
    assert kv_discover_polynomial(E2, 2)[1] == 3
