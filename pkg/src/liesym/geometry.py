"""Tensor calculus over a coordinate chart.

Index placement follows the usual convention: ``christoffel[i][j][k]`` is
Γ^i_{jk}, ``riemann[i][j][k][l]`` is R^i_{jkl} with

    R^i_{jkl} = Γ^i_{jl,k} − Γ^i_{jk,l} + Γ^i_{mk}Γ^m_{jl} − Γ^i_{ml}Γ^m_{jk},

Ricci R_{jl} = R^i_{jil} and R = g^{jl} R_{jl}.  With this choice a round
sphere has positive scalar curvature.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .config import DEFAULT, CheckConfig
from .expr import (
    HALF, ONE, ZERO, Expr, ExprError, Verdict, add, as_expr, diff, mul, normalize, power, sqrt,
)

Matrix = tuple  # tuple of tuples of Expr


class GeometryError(ExprError):
    pass


class SingularMetricError(GeometryError):
    """The metric determinant vanishes (syntactically or on the sampling box)."""


class ChartMismatchError(GeometryError):
    pass


@dataclass(frozen=True, eq=False)
class Chart:
    """Ordered coordinates plus sampling information.

    ``domain`` gives sampling intervals for coordinates (and any constants that
    need one); ``singular`` lists expressions that must stay nonzero.
    """

    coords: tuple
    singular: tuple = ()
    domain: Mapping = field(default_factory=dict)

    def __post_init__(self):
        coords = tuple(str(c) for c in self.coords)
        if not coords:
            raise GeometryError("a chart needs at least one coordinate")
        if len(set(coords)) != len(coords):
            raise GeometryError(f"duplicate coordinate names in {coords}")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "singular", tuple(as_expr(s) for s in self.singular))
        object.__setattr__(self, "domain", dict(self.domain))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def same_as(self, other: "Chart") -> bool:
        return self is other or self.coords == other.coords

    def config(self, base: CheckConfig | None = None) -> CheckConfig:
        return (base or DEFAULT).with_domain(self.domain, self.singular)


def _matrix(rows) -> Matrix:
    return tuple(tuple(normalize(as_expr(x)) for x in row) for row in rows)


def _det(m: Sequence[Sequence[Expr]]) -> Expr:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return add(mul(m[0][0], m[1][1]), mul(-1, m[0][1], m[1][0]))
    terms = []
    for j in range(n):
        if m[0][j] is ZERO:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        sign = 1 if j % 2 == 0 else -1
        terms.append(mul(sign, m[0][j], _det(minor)))
    return add(*terms)


def determinant(rows) -> Expr:
    return normalize(_det(_matrix(rows)))


def invert(rows) -> Matrix:
    """Symbolic inverse by cofactors; entries normalized."""
    m = _matrix(rows)
    n = len(m)
    det = normalize(_det(m))
    if det is ZERO:
        raise SingularMetricError("determinant is identically zero")
    inv_det = power(det, -1)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if n == 1:
                cof = ONE
            else:
                minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
                cof = _det(minor)
                if (i + j) % 2:
                    cof = mul(-1, cof)
            out[j][i] = normalize(mul(cof, inv_det))
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True, eq=False)
class CurvatureBundle:
    christoffel: tuple
    contracted: tuple
    riemann: tuple
    ricci: Matrix
    scalar: Expr


@dataclass(frozen=True, eq=False)
class Metric:
    """Symmetric nondegenerate metric on a chart (any signature)."""

    chart: Chart
    components: Matrix
    name: str = ""

    def __post_init__(self):
        comps = _matrix(self.components)
        n = self.chart.dim
        if len(comps) != n or any(len(r) != n for r in comps):
            raise GeometryError(f"metric must be {n}x{n} on chart {self.chart.coords}")
        for i in range(n):
            for j in range(i + 1, n):
                if comps[i][j] is not comps[j][i]:
                    raise GeometryError(f"metric not symmetric at ({i},{j})")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_rows(cls, coords, rows, singular=(), domain=None, name: str = "") -> "Metric":
        return cls(Chart(tuple(coords), tuple(singular), domain or {}), rows, name)

    @classmethod
    def diagonal(cls, coords, entries, singular=(), domain=None, name: str = "") -> "Metric":
        n = len(entries)
        rows = [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(coords, rows, singular, domain, name)

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def coords(self) -> tuple:
        return self.chart.coords

    def __getitem__(self, ij):
        i, j = ij
        return self.components[i][j]

    @cached_property
    def det(self) -> Expr:
        return normalize(_det(self.components))

    @cached_property
    def inverse(self) -> Matrix:
        return invert(self.components)

    @cached_property
    def curvature(self) -> CurvatureBundle:
        return _curvature(self)

    def check_nondegenerate(self, config: CheckConfig | None = None) -> None:
        if self.det is ZERO:
            raise SingularMetricError("determinant is identically zero")
        if self.chart.config(config).test(self.det).verdict is Verdict.ZERO:
            raise SingularMetricError("determinant vanishes on the sampling domain")


@dataclass(frozen=True, eq=False)
class VectorField:
    chart: Chart
    components: tuple

    def __post_init__(self):
        comps = tuple(normalize(as_expr(c)) for c in self.components)
        if len(comps) != self.chart.dim:
            raise GeometryError(
                f"vector field has {len(comps)} components, chart has {self.chart.dim}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def on(cls, chart: Chart, components) -> "VectorField":
        """Build from a sequence or from a ``{coordinate: component}`` mapping."""
        if isinstance(components, Mapping):
            unknown = set(components) - set(chart.coords)
            if unknown:
                raise GeometryError(f"components for unknown coordinates {sorted(unknown)}")
            components = [components.get(c, 0) for c in chart.coords]
        return cls(chart, tuple(components))

    def __getitem__(self, i) -> Expr:
        return self.components[i]

    def apply(self, f) -> Expr:
        """Directional derivative ξ(f) = ξ^k ∂_k f."""
        f = as_expr(f)
        return normalize(add(*(mul(c, diff(f, x)) for c, x in zip(self.components, self.chart.coords)
                               if c is not ZERO)))

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_chart(self.chart, other.chart)
        return VectorField(self.chart, tuple(add(a, b) for a, b in zip(self.components, other.components)))

    def scale(self, k) -> "VectorField":
        return VectorField(self.chart, tuple(mul(k, c) for c in self.components))

    def __str__(self):
        parts = [f"({c})*d_{x}" for c, x in zip(self.components, self.chart.coords) if c is not ZERO]
        return " + ".join(parts) or "0"


def _same_chart(a: Chart, b: Chart) -> None:
    if not a.same_as(b):
        raise ChartMismatchError(f"chart mismatch: {a.coords} vs {b.coords}")


# ------------------------------------------------------------------ curvature


def christoffel(g: Metric) -> tuple:
    return g.curvature.christoffel


def _christoffel(g: Metric) -> tuple:
    n, xs, m, inv = g.dim, g.coords, g.components, g.inverse
    dg = [[[diff(m[i][j], xs[k]) for k in range(n)] for j in range(n)] for i in range(n)]
    first = [[[None] * n for _ in range(n)] for _ in range(n)]  # Γ_{l,jk}
    for l in range(n):
        for j in range(n):
            for k in range(j, n):
                v = mul(HALF, add(dg[l][j][k], dg[l][k][j], mul(-1, dg[j][k][l])))
                first[l][j][k] = first[l][k][j] = v
    gamma = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                v = normalize(add(*(mul(inv[i][l], first[l][j][k]) for l in range(n)
                                    if inv[i][l] is not ZERO)))
                gamma[i][j][k] = gamma[i][k][j] = v
    return tuple(tuple(tuple(r) for r in plane) for plane in gamma)



def _curvature(g: Metric) -> CurvatureBundle:
    n, xs, inv = g.dim, g.coords, g.inverse
    G = _christoffel(g)
    contracted = tuple(
        normalize(add(*(mul(inv[j][k], G[i][j][k]) for j in range(n) for k in range(n)
                        if inv[j][k] is not ZERO)))
        for i in range(n))
    R = [[[[ZERO] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(k + 1, n):
                    v = add(diff(G[i][j][l], xs[k]), mul(-1, diff(G[i][j][k], xs[l])),
                            *(mul(G[i][m][k], G[m][j][l]) for m in range(n)),
                            *(mul(-1, G[i][m][l], G[m][j][k]) for m in range(n)))
                    v = normalize(v)
                    R[i][j][k][l] = v
                    R[i][j][l][k] = normalize(mul(-1, v))
    ricci = tuple(tuple(normalize(add(*(R[i][j][i][l] for i in range(n)))) for l in range(n))
                  for j in range(n))
    scalar = normalize(add(*(mul(inv[j][l], ricci[j][l]) for j in range(n) for l in range(n)
                             if inv[j][l] is not ZERO)))
    riemann = tuple(tuple(tuple(tuple(c) for c in b) for b in a) for a in R)
    return CurvatureBundle(G, contracted, riemann, ricci, scalar)


def inverse_metric(g: Metric) -> Matrix:
    return g.inverse


def curvature(g: Metric) -> CurvatureBundle:
    return g.curvature


# ---------------------------------------------------------------- operators


@dataclass(frozen=True, eq=False)
class PDEModel:
    """Linear second-order operator in coefficient form.

        P[u] = A^{ij} u_{,ij} + B^i u_{,i} + C u + T u_{,t}

    For the Laplace–Beltrami operator A = g^{ij}, B^i = −Γ^i and C = T = 0.
    ``time`` names the time coordinate when ``T`` is nonzero.
    """

    chart: Chart
    second: Matrix
    first: tuple
    zeroth: Expr = ZERO
    time: str | None = None
    time_coeff: Expr = ZERO

    def apply(self, u) -> Expr:
        u = as_expr(u)
        xs = self.chart.coords
        n = len(xs)
        terms = []
        for i in range(n):
            ui = diff(u, xs[i])
            if self.first[i] is not ZERO:
                terms.append(mul(self.first[i], ui))
            for j in range(n):
                if self.second[i][j] is not ZERO:
                    terms.append(mul(self.second[i][j], diff(ui, xs[j])))
        if self.zeroth is not ZERO:
            terms.append(mul(self.zeroth, u))
        if self.time is not None and self.time_coeff is not ZERO:
            terms.append(mul(self.time_coeff, diff(u, self.time)))
        return normalize(add(*terms))

    def with_potential(self, V, time: str | None = None, time_coeff=0) -> "PDEModel":
        """The operator Δu − V u (+ time_coeff · u_t)."""
        return PDEModel(self.chart, self.second, self.first, normalize(mul(-1, as_expr(V))),
                        time, normalize(as_expr(time_coeff)))

    def scaled(self, k) -> "PDEModel":
        k = as_expr(k)
        return PDEModel(self.chart,
                        tuple(tuple(normalize(mul(k, a)) for a in row) for row in self.second),
                        tuple(normalize(mul(k, b)) for b in self.first),
                        normalize(mul(k, self.zeroth)), self.time, normalize(mul(k, self.time_coeff)))


def laplacian(g: Metric, u: str = "u") -> PDEModel:
    """Coefficient form of the Laplace–Beltrami operator g^{ij}u_{,ij} − Γ^i u_{,i}.

    ``u`` only names the unknown; the model is independent of it.
    """
    cb = g.curvature
    return PDEModel(g.chart, g.inverse, tuple(normalize(mul(-1, c)) for c in cb.contracted))


def laplace_beltrami(g: Metric, s) -> Expr:
    """Δs for a concrete scalar expression."""
    return laplacian(g).apply(s)


def laplacian_divergence_form(g: Metric, s) -> Expr:
    """(1/√|g|)(√|g| g^{ij} s_{,j})_{,i}; an independent route to Δs.

    |g| is taken as the determinant itself, or its negative when that is the
    sign on the first sample point (Lorentzian metrics).
    """
    s = as_expr(s)
    xs, inv, n = g.coords, g.inverse, g.dim
    det = g.det
    from .expr import eval_numeric
    from .expr.zero import sample_points
    cfg = g.chart.config()
    syms = tuple(sorted(det.free_symbols))
    sign = 1
    if syms:
        pt = sample_points(syms, cfg.domain, 1, cfg.seed)[0][0]
        try:
            sign = 1 if eval_numeric(det, dict(zip(syms, pt))) > 0 else -1
        except ExprError:
            sign = 1
    elif det.value < 0:
        sign = -1
    root = sqrt(mul(sign, det))
    flux = [mul(root, add(*(mul(inv[i][j], diff(s, xs[j])) for j in range(n)))) for i in range(n)]
    return normalize(mul(power(root, -1), add(*(diff(flux[i], xs[i]) for i in range(n)))))


def lower(g: Metric, xi: VectorField) -> tuple:
    """ξ_i = g_{ij} ξ^j."""
    _same_chart(g.chart, xi.chart)
    n = g.dim
    return tuple(normalize(add(*(mul(g.components[i][j], xi.components[j]) for j in range(n))))
                 for i in range(n))


def lie_derivative_metric(g: Metric, xi: VectorField) -> Matrix:
    """(L_ξ g)_{ij} = ξ^k g_{ij,k} + g_{kj} ξ^k_{,i} + g_{ik} ξ^k_{,j}."""
    _same_chart(g.chart, xi.chart)
    n, xs, m, v = g.dim, g.coords, g.components, xi.components
    dv = [[diff(v[k], xs[i]) for i in range(n)] for k in range(n)]  # dv[k][i] = ξ^k_{,i}
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            terms = []
            for k in range(n):
                terms.append(mul(v[k], diff(m[i][j], xs[k])))
                terms.append(mul(m[k][j], dv[k][i]))
                terms.append(mul(m[i][k], dv[k][j]))
            out[i][j] = out[j][i] = normalize(add(*terms))
    return tuple(tuple(r) for r in out)


def covariant_hessian(g: Metric, s) -> Matrix:
    """s_{;ij} = s_{,ij} − Γ^k_{ij} s_{,k}."""
    s = as_expr(s)
    n, xs, G = g.dim, g.coords, g.curvature.christoffel
    ds = [diff(s, x) for x in xs]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            terms = [diff(ds[i], xs[j])]
            terms += [mul(-1, G[k][i][j], ds[k]) for k in range(n) if G[k][i][j] is not ZERO]
            out[i][j] = out[j][i] = normalize(add(*terms))
    return tuple(tuple(r) for r in out)


def conformal_transform(g: Metric, N, name: str = "") -> Metric:
    """The metric N² g.  Raises for N ≡ 0."""
    N = normalize(as_expr(N))
    if N is ZERO:
        raise GeometryError("conformal factor is identically zero")
    N2 = power(N, 2)
    rows = [[mul(N2, c) for c in row] for row in g.components]
    return Metric(g.chart, rows, name or (f"{N}^2 * {g.name}" if g.name else ""))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(normalize(add(*(mul(a[i][k], b[k][j]) for k in range(m)))) for j in range(p))
                 for i in range(n))
