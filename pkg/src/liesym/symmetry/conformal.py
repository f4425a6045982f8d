"""Conformal classification of vector fields and the Klein–Gordon,
Yamabe and Schrödinger symmetry conditions built on it."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..config import DEFAULT, CheckConfig
from ..expr import (
    ZERO, Bindings, Expr, NotPolynomial, Num, Verdict, add, as_expr, diff, mul, normalize,
    poly_coeffs, power, subs, sym, to_text,
)
from ..geometry import (
    ChartMismatchError, Metric, VectorField, conformal_transform, covariant_hessian,
    laplace_beltrami, lie_derivative_metric, lower,
)
from .report import ConstraintReport, NotConformalError, run_checks

KV, HV, SPCKV, PROPER, NOTCKV = "KV", "HV", "spCKV", "properCKV", "notCKV"


@dataclass(frozen=True, eq=False)
class ConformalClassification:
    cls: str
    psi: Expr
    gradient: bool
    potential: Expr | None = None
    homothety: Expr | None = None
    tests: dict = field(default_factory=dict)
    conclusive: bool = True

    @property
    def is_conformal(self) -> bool:
        return self.cls != NOTCKV

    def to_json(self) -> dict:
        out = {"class": self.cls, "psi": to_text(self.psi), "gradient": self.gradient,
               "conclusive": self.conclusive}
        if self.potential is not None:
            out["potential"] = to_text(self.potential)
        if self.homothety is not None:
            out["homothety"] = to_text(self.homothety)
        return out


def _cfg(g: Metric, config: CheckConfig | None, bindings: Bindings | None = None) -> CheckConfig:
    return g.chart.config(config).with_bindings(bindings)


def _all(cfg: CheckConfig, exprs) -> Verdict:
    worst = Verdict.ZERO
    for e in exprs:
        v = cfg.test(e).verdict
        if v is Verdict.NONZERO:
            return v
        if v is Verdict.INCONCLUSIVE:
            worst = v
    return worst


def conformal_factor(g: Metric, xi: VectorField) -> Expr:
    """ψ = tr(g⁻¹ L_ξ g) / (2n)."""
    L = lie_derivative_metric(g, xi)
    n, inv = g.dim, g.inverse
    tr = add(*(mul(inv[i][j], L[j][i]) for i in range(n) for j in range(n)))
    return normalize(mul(Fraction(1, 2 * n), tr))


def gradient_potential(g: Metric, xi: VectorField) -> Expr | None:
    """S with S_{,i} = g_ij ξ^j when the lowered field is polynomial in the coordinates.

    Uses the homotopy integral S(x) = ∫₀¹ ξ_i(s x) x^i ds; returns ``None``
    when the lowered field is not polynomial or the candidate fails.
    """
    xs = g.coords
    low = lower(g, xi)
    terms = []
    try:
        for i, comp in enumerate(low):
            for expo, c in poly_coeffs(comp, xs).items():
                mono = mul(c, *(power(sym(x), k) for x, k in zip(xs, expo) if k), sym(xs[i]))
                terms.append(mul(Fraction(1, sum(expo) + 1), mono))
    except NotPolynomial:
        return None
    S = normalize(add(*terms))
    if all(normalize(add(diff(S, x), mul(-1, w))) is ZERO for x, w in zip(xs, low)):
        return S
    return None


def classify(g: Metric, xi: VectorField, config: CheckConfig | None = None,
             bindings: Bindings | None = None) -> ConformalClassification:
    """Place ξ in the chain KV ⊂ HV ⊂ spCKV ⊂ CKV (or notCKV)."""
    if not g.chart.same_as(xi.chart):
        raise ChartMismatchError(f"chart mismatch: {g.coords} vs {xi.chart.coords}")
    cfg = _cfg(g, config, bindings)
    n, xs = g.dim, g.coords
    L = lie_derivative_metric(g, xi)
    psi = conformal_factor(g, xi)
    resid = [normalize(add(L[i][j], mul(-2, psi, g.components[i][j])))
             for i in range(n) for j in range(i, n)]
    tests = {"conformal": _all(cfg, resid)}

    low = lower(g, xi)
    curl = [normalize(add(diff(low[j], xs[i]), mul(-1, diff(low[i], xs[j]))))
            for i in range(n) for j in range(i + 1, n)]
    tests["gradient"] = _all(cfg, curl)
    gradient = tests["gradient"] is Verdict.ZERO
    S = gradient_potential(g, xi) if gradient else None

    if tests["conformal"] is not Verdict.ZERO:
        return ConformalClassification(NOTCKV, psi, gradient, S, tests=tests,
                                       conclusive=tests["conformal"] is Verdict.NONZERO)
    tests["killing"] = cfg.test(psi).verdict
    if tests["killing"] is Verdict.ZERO:
        return ConformalClassification(KV, ZERO, gradient, S, tests=tests)
    tests["homothetic"] = _all(cfg, [diff(psi, x) for x in xs])
    if tests["homothetic"] is Verdict.ZERO:
        return ConformalClassification(HV, psi, gradient, S, homothety=psi, tests=tests)
    hess = covariant_hessian(g, psi)
    tests["special"] = _all(cfg, [hess[i][j] for i in range(n) for j in range(i, n)])
    cls = SPCKV if tests["special"] is Verdict.ZERO else PROPER
    conclusive = all(v is not Verdict.INCONCLUSIVE for v in tests.values())
    return ConformalClassification(cls, psi, gradient, S, tests=tests, conclusive=conclusive)


def _require_ckv(g, xi, config, bindings, allowed=None) -> ConformalClassification:
    c = classify(g, xi, config, bindings)
    if not c.is_conformal:
        raise NotConformalError(f"{xi} is not a conformal Killing vector of the metric")
    if allowed is not None and c.cls not in allowed:
        raise NotConformalError(f"{xi} is {c.cls}; expected one of {sorted(allowed)}")
    return c


def kg_symmetry_residual(g: Metric, V, xi: VectorField, config: CheckConfig | None = None,
                         bindings: Bindings | None = None,
                         classification: ConformalClassification | None = None) -> ConstraintReport:
    """Lie symmetry condition of Δu = V u for a CKV ξ.

    ξ^k V_{,k} + 2ψV − ((2−n)/2)Δψ, the last term absent for n = 2.
    """
    V = normalize(as_expr(V))
    c = classification or _require_ckv(g, xi, config, bindings)
    n = g.dim
    r = add(xi.apply(V), mul(2, c.psi, V))
    if n != 2:
        r = add(r, mul(Fraction(n - 2, 2), laplace_beltrami(g, c.psi)))
    return run_checks("kg_symmetry", [r], _cfg(g, config), labels=["condition"],
                      bindings=bindings, extra={"class": c.cls, "psi": c.psi, "dimension": n})


def conformal_ricci_potential(g: Metric) -> Expr:
    """−((n−2)/(4(n−1))) R, the curvature term of the conformal Klein–Gordon equation."""
    n = g.dim
    if n < 2:
        raise ValueError("the conformal Klein-Gordon equation needs n >= 2")
    return normalize(mul(Fraction(-(n - 2), 4 * (n - 1)), g.curvature.scalar))


def yamabe_residual(g: Metric, Vbar, xi: VectorField, config: CheckConfig | None = None,
                    bindings: Bindings | None = None) -> ConstraintReport:
    """ξ^k V̄_{,k} + 2ψV̄ together with the full condition for V = −(n−2)R/(4(n−1)) + V̄.

    Both must agree; a disagreement means the curvature term did not cancel
    and is reported as ``NonZero`` with a note.
    """
    Vbar = normalize(as_expr(Vbar))
    c = _require_ckv(g, xi, config, bindings)
    short = run_checks("yamabe", [add(xi.apply(Vbar), mul(2, c.psi, Vbar))], _cfg(g, config),
                       labels=["reduced"], bindings=bindings)
    V = add(conformal_ricci_potential(g), Vbar)
    full = kg_symmetry_residual(g, V, xi, config, bindings, classification=c)
    consistent = short.verdict is full.verdict
    notes = () if consistent else (
        f"reduced condition gives {short.verdict.value} but the full condition gives "
        f"{full.verdict.value}",)
    verdict = short.verdict if consistent else Verdict.NONZERO
    return ConstraintReport("yamabe", short.residuals + full.residuals, short.tests + full.tests,
                            ("reduced", "full"), verdict, short.instantiations, notes,
                            {"class": c.cls, "psi": c.psi, "consistent": consistent})


def ckv_ricci_identity(g: Metric, xi: VectorField, config: CheckConfig | None = None,
                       bindings: Bindings | None = None) -> ConstraintReport:
    """ξ^k R_{,k} + 2ψR + 2(n−1)Δψ, which vanishes for every CKV."""
    c = _require_ckv(g, xi, config, bindings)
    R = g.curvature.scalar
    n = g.dim
    r = add(xi.apply(R), mul(2, c.psi, R), mul(2 * (n - 1), laplace_beltrami(g, c.psi)))
    return run_checks("ckv_ricci_identity", [r], _cfg(g, config), labels=["identity"],
                      bindings=bindings, extra={"class": c.cls, "psi": c.psi})


def schrodinger_operator(g: Metric, u, V, time: str = "t") -> Expr:
    """Δu − u_t − V u."""
    u = as_expr(u)
    return normalize(add(laplace_beltrami(g, u), mul(-1, diff(u, time)), mul(-1, as_expr(V), u)))


def schrodinger_check_nongradient(g: Metric, V, Y: VectorField, a0=0, b=None,
                                  config: CheckConfig | None = None,
                                  bindings: Bindings | None = None,
                                  time: str = "t") -> ConstraintReport:
    """L_Y V + 2ψV + a₀ for a KV/HV Y (the scale constant c is set to 1).

    When ``b`` is given it must itself solve Δb − b_t = V b; that residual is
    added to the report.
    """
    c = _require_ckv(g, Y, config, bindings, allowed={KV, HV})
    V = normalize(as_expr(V))
    a0 = normalize(as_expr(a0))
    residuals = [add(Y.apply(V), mul(2, c.psi, V), a0)]
    labels = ["condition"]
    if b is not None:
        residuals.append(schrodinger_operator(g, b, V, time))
        labels.append("b_solves_equation")
    psi_t = to_text(normalize(mul(2, c.psi, sym(time))))
    gen = f"({psi_t} + c1)*d_{time} + {Y} + ({to_text(a0)})*u*d_u"
    notes = () if not c.gradient else ("Y is a gradient field; the gradient branch also applies",)
    return run_checks("schrodinger_nongradient", residuals, _cfg(g, config), labels=labels,
                      bindings=bindings, notes=notes,
                      extra={"class": c.cls, "psi": c.psi, "gradient": c.gradient,
                             "generator": gen})


def gradient_field(g: Metric, S) -> VectorField:
    """Y^i = g^{ij} S_{,j}."""
    S = as_expr(S)
    n, inv = g.dim, g.inverse
    dS = [diff(S, x) for x in g.coords]
    return VectorField(g.chart, tuple(add(*(mul(inv[i][j], dS[j]) for j in range(n))) for i in range(n)))


def schrodinger_check_gradient(g: Metric, V, S, c, d, T=None, F=None,
                               config: CheckConfig | None = None,
                               bindings: Bindings | None = None,
                               time: str = "t") -> ConstraintReport:
    """L_H V + 2ψV − ½c²H + d with H := S and Y = grad S a KV/HV.

    Optional ``T(t)`` and ``F(t)`` candidates are checked against
    T_tt = c²T and ½T_tψ + F_t = T d.
    """
    Y = gradient_field(g, S)
    cl = _require_ckv(g, Y, config, bindings, allowed={KV, HV})
    V, S, c, d = (normalize(as_expr(x)) for x in (V, S, c, d))
    residuals = [add(Y.apply(V), mul(2, cl.psi, V), mul(Fraction(-1, 2), power(c, 2), S), d)]
    labels = ["condition"]
    if T is not None:
        T = as_expr(T)
        residuals.append(add(diff(T, time, 2), mul(-1, power(c, 2), T)))
        labels.append("T_equation")
        if F is not None:
            F = as_expr(F)
            residuals.append(add(mul(Fraction(1, 2), diff(T, time), cl.psi), diff(F, time),
                                 mul(-1, T, d)))
            labels.append("F_equation")
    return run_checks("schrodinger_gradient", residuals, _cfg(g, config), labels=labels,
                      bindings=bindings,
                      extra={"class": cl.cls, "psi": cl.psi, "gradient_field": str(Y)})


def conformal_psi_law(g: Metric, N, xi: VectorField, config: CheckConfig | None = None,
                      bindings: Bindings | None = None) -> ConstraintReport:
    """Transport of the conformal factor to ḡ = N²g.

    With L_ξ g = 2ψg and L_ξ ḡ = 2ψ̄ḡ one has ψ = ψ̄ − N_{,i}ξ^i / N; that
    residual decides the verdict.  The variant ψ = ψ̄N² − N N_{,i}ξ^i is
    tested too and reported under ``details`` (it differs by the factor N²).
    """
    N = normalize(as_expr(N))
    gbar = conformal_transform(g, N)
    c = _require_ckv(g, xi, config, bindings)
    cbar = _require_ckv(gbar, xi, config, bindings)
    xiN = xi.apply(N)
    law = add(c.psi, mul(-1, cbar.psi), mul(xiN, power(N, -1)))
    rep = run_checks("conformal_psi_law", [law], _cfg(g, config), labels=["law"],
                     bindings=bindings)
    scaled = add(c.psi, mul(-1, cbar.psi, power(N, 2)), mul(N, xiN))
    alt = _cfg(g, config, bindings).test(scaled)
    extra = {"psi": c.psi, "psi_bar": cbar.psi, "class": c.cls, "class_bar": cbar.cls,
             "scaled_law_verdict": alt.verdict}
    return ConstraintReport(rep.name, rep.residuals, rep.tests, rep.labels, rep.verdict,
                            rep.instantiations, rep.notes, extra)


def null2d_condition(F, G, V, w: str = "w", z: str = "z", config: CheckConfig | None = None,
                     bindings: Bindings | None = None) -> ConstraintReport:
    """(F V)_{,w} + (G V)_{,z} for ξ = F(w)∂_w + G(z)∂_z on ds² = 2 dw dz."""
    F, G, V = (normalize(as_expr(x)) for x in (F, G, V))
    if z in F.free_symbols or w in G.free_symbols:
        raise ValueError(f"F must depend on {w} only and G on {z} only")
    r = add(diff(mul(F, V), w), diff(mul(G, V), z))
    return run_checks("null2d", [r], config or DEFAULT, labels=["condition"], bindings=bindings)


# ----------------------------------------------------------- KV discovery


def _monomials(n: int, degree: int):
    out = []

    def rec(prefix, left, k):
        if k == n:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e, k + 1)

    rec([], degree, 0)
    return sorted(out, key=lambda m: (sum(m), tuple(-e for e in m)))


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    rows = [r[:] for r in rows if any(r)]
    pivots = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def kv_discover_polynomial(g: Metric, degree: int) -> tuple[list[VectorField], int]:
    """Basis of Killing vectors whose components are polynomials of ``degree`` at most.

    Solves L_ξ g = 0 for rational ansatz coefficients by exact elimination.
    The metric components must be polynomials in the coordinates with
    rational coefficients.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    xs, n = g.coords, g.dim
    for row in g.components:
        for comp in row:
            for coeff in poly_coeffs(comp, xs).values():
                if comp.free_symbols - set(xs) or not isinstance(coeff, Num):
                    raise NotPolynomial(f"metric component {comp} is not a rational polynomial")
    monos = _monomials(n, degree)
    unknowns = []
    comps = []
    for i in range(n):
        terms = []
        for m in monos:
            u = f"_k{len(unknowns)}"
            unknowns.append(u)
            terms.append(mul(sym(u), *(power(sym(x), e) for x, e in zip(xs, m) if e)))
        comps.append(add(*terms))
    ansatz = VectorField(g.chart, tuple(comps))
    L = lie_derivative_metric(g, ansatz)
    index = {u: k for k, u in enumerate(unknowns)}
    rows = []
    for i in range(n):
        for j in range(i, n):
            for coeff in poly_coeffs(L[i][j], xs).values():
                row = [Fraction(0)] * len(unknowns)
                for expo, c in poly_coeffs(coeff, unknowns).items():
                    if sum(expo) != 1 or not isinstance(c, Num):
                        raise NotPolynomial("ansatz produced a nonlinear condition")
                    row[expo.index(1)] = c.value
                rows.append(row)
    basis = []
    for vec in _nullspace(rows, len(unknowns)):
        sub = {u: Num(vec[index[u]]) for u in unknowns}
        basis.append(VectorField(g.chart, tuple(subs(c, sub) for c in comps)))
    return basis, len(basis)
