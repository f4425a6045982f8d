"""Point-symmetry Lagrangians, the Noether condition and its first integrals.

Velocities are ordinary symbols named ``<coord>_dot`` (accelerations
``<coord>_ddot``), so everything stays inside the expression kernel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..config import CheckConfig
from ..expr import (
    ZERO, Bindings, Expr, Verdict, add, as_expr, diff, mul, normalize, parse, poly_coeffs,
    power, subs, sym, to_text,
)
from ..geometry import Metric, conformal_transform
from .report import ConstraintReport, NotASymmetryError, combine_verdicts, run_checks


def velocity(x: str) -> str:
    return f"{x}_dot"


def acceleration(x: str) -> str:
    return f"{x}_ddot"


@dataclass(frozen=True, eq=False)
class Lagrangian:
    """L = ½ g_ij ẋ^i ẋ^j − V(x), autonomous."""

    metric: Metric
    potential: Expr
    time: str = "t"
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        V = normalize(as_expr(self.potential))
        if self.time in V.free_symbols:
            raise ValueError("the potential must not depend on time")
        if self.time in self.metric.coords:
            raise ValueError(f"time symbol {self.time!r} clashes with a coordinate")
        object.__setattr__(self, "potential", V)

    @property
    def coords(self) -> tuple:
        return self.metric.coords

    @property
    def velocities(self) -> tuple:
        return tuple(velocity(x) for x in self.coords)

    @property
    def kinetic(self) -> Expr:
        g, v, n = self.metric.components, self.velocities, self.metric.dim
        return normalize(mul(Fraction(1, 2), add(*(mul(g[i][j], sym(v[i]), sym(v[j]))
                                                    for i in range(n) for j in range(n)))))

    @property
    def expr(self) -> Expr:
        return normalize(add(self.kinetic, mul(-1, self.potential)))

    def energy(self) -> Expr:
        """h = ½ g_ij ẋ^i ẋ^j + V."""
        return normalize(add(self.kinetic, self.potential))

    def total_derivative(self, F) -> Expr:
        """D_t F for F(t, x, ẋ); accelerations appear as ``<x>_ddot`` symbols."""
        F = as_expr(F)
        terms = [diff(F, self.time)]
        for x, v in zip(self.coords, self.velocities):
            terms.append(mul(sym(v), diff(F, x)))
            terms.append(mul(sym(acceleration(x)), diff(F, v)))
        return normalize(add(*terms))


@dataclass(frozen=True, eq=False)
class PointSymmetry:
    """X = ξ(t,x)∂_t + η^i(t,x)∂_i (+ (a₀u + b)∂_u for PDE symmetries)."""

    xi: Expr
    eta: tuple
    a0: Expr = ZERO
    b: Expr = ZERO
    coords: tuple = ()  # names for printing only

    def __post_init__(self):
        object.__setattr__(self, "xi", normalize(as_expr(self.xi)))
        object.__setattr__(self, "eta", tuple(normalize(as_expr(e)) for e in self.eta))
        object.__setattr__(self, "a0", normalize(as_expr(self.a0)))
        object.__setattr__(self, "b", normalize(as_expr(self.b)))

    @classmethod
    def on(cls, L: Lagrangian, xi=0, eta: Mapping | None = None) -> "PointSymmetry":
        eta = dict(eta or {})
        unknown = set(eta) - set(L.coords)
        if unknown:
            raise ValueError(f"eta components for unknown coordinates {sorted(unknown)}")
        return cls(xi, tuple(eta.get(x, 0) for x in L.coords), coords=L.coords)

    def __str__(self):
        parts = []
        if self.xi is not ZERO:
            parts.append(f"({to_text(self.xi)})*d_t")
        names = self.coords or tuple(str(i) for i in range(len(self.eta)))
        parts += [f"({to_text(e)})*d_{x}" for x, e in zip(names, self.eta) if e is not ZERO]
        return " + ".join(parts) or "0"


def _check_shape(L: Lagrangian, X: PointSymmetry) -> None:
    if len(X.eta) != L.metric.dim:
        raise ValueError(f"symmetry has {len(X.eta)} eta components, Lagrangian has {L.metric.dim}")
    for e in (X.xi, *X.eta):
        if set(L.velocities) & e.free_symbols:
            raise ValueError("point symmetry components must not depend on velocities")


def noether_condition(L: Lagrangian, X: PointSymmetry, f=0) -> Expr:
    """X^[1]L + (D_t ξ) L − D_t f, a polynomial in the velocities."""
    lhs, rhs = _noether_sides(L, X, f)
    return normalize(add(lhs, mul(-1, rhs)))


def _noether_sides(L: Lagrangian, X: PointSymmetry, f=0) -> tuple:
    """(X^[1]L + (D_t ξ) L, D_t f), each normalized."""
    _check_shape(L, X)
    f = as_expr(f)
    Lx = L.expr
    Dxi = L.total_derivative(X.xi)
    terms = [mul(X.xi, diff(Lx, L.time))]
    for x, v, eta in zip(L.coords, L.velocities, X.eta):
        terms.append(mul(eta, diff(Lx, x)))
        prolonged = add(L.total_derivative(eta), mul(-1, sym(v), Dxi))
        terms.append(mul(prolonged, diff(Lx, v)))
    terms.append(mul(Dxi, Lx))
    return normalize(add(*terms)), normalize(L.total_derivative(f))


def _monomial_label(vs, expo) -> str:
    parts = [v if k == 1 else f"{v}^{k}" for v, k in zip(vs, expo) if k]
    return "*".join(parts) or "1"


def noether_residual(L: Lagrangian, X: PointSymmetry, f=0, config: CheckConfig | None = None,
                     bindings: Bindings | None = None) -> ConstraintReport:
    """Noether condition split into its coefficients in the velocities.

    Each coefficient is a function of (t, x) only and is zero-tested on its
    own, so the condition is verified identically in ẋ.
    """
    lhs, rhs = _noether_sides(L, X, f)
    vs = L.velocities
    # monomials are collected from both sides before they can cancel
    left, right = poly_coeffs(lhs, vs), poly_coeffs(rhs, vs)
    keys = sorted(set(left) | set(right))
    coeffs = {k: add(left.get(k, ZERO), mul(-1, right.get(k, ZERO))) for k in keys}
    cfg = L.metric.chart.config(config).with_domain({L.time: (0.0, 1.0)})
    return run_checks("noether", [coeffs[k] for k in keys], cfg,
                      labels=[_monomial_label(vs, k) for k in keys], bindings=bindings,
                      extra={"generator": str(X), "gauge": as_expr(f)})


def noether_integral(L: Lagrangian, X: PointSymmetry, f=0, check: bool = True,
                     config: CheckConfig | None = None,
                     bindings: Bindings | None = None) -> Expr:
    """I = ξ(ẋ^i ∂L/∂ẋ^i − L) − η^i ∂L/∂ẋ^i + f.

    With ``check`` the Noether condition is verified first and a
    :class:`NotASymmetryError` raised when it fails.
    """
    if check:
        rep = noether_residual(L, X, f, config, bindings)
        if rep.verdict is not Verdict.ZERO:
            raise NotASymmetryError(f"{X} with gauge {as_expr(f)} fails the Noether condition "
                                    f"({rep.verdict.value})")
    Lx = L.expr
    p = [diff(Lx, v) for v in L.velocities]
    vdotp = add(*(mul(sym(v), pi) for v, pi in zip(L.velocities, p)))
    I = add(mul(X.xi, add(vdotp, mul(-1, Lx))),
            *(mul(-1, e, pi) for e, pi in zip(X.eta, p)), as_expr(f))
    return normalize(I)


def combine_integrals(exprs: Mapping, formula: str) -> Expr:
    """Evaluate ``formula`` (expression text over the names in ``exprs``)."""
    e = parse(formula)
    return normalize(subs(e, {k: as_expr(v) for k, v in exprs.items()}))


def time_free(I, time: str = "t") -> bool:
    """True when ∂I/∂t normalizes to zero."""
    return normalize(diff(as_expr(I), time)) is ZERO


def conformal_lagrangian(L: Lagrangian, N, name: str = "") -> Lagrangian:
    """Kinetic metric N²g and potential V/N², with dτ = N² dt recorded in ``meta``."""
    N = normalize(as_expr(N))
    g2 = conformal_transform(L.metric, N)
    V2 = normalize(mul(L.potential, power(N, -2)))
    meta = dict(L.meta)
    meta.update({"conformal_factor": to_text(N),
                 "reparametrization": f"d{L.time}_new = ({to_text(normalize(power(N, 2)))}) d{L.time}"})
    return Lagrangian(g2, V2, L.time, name or (f"conformal({L.name})" if L.name else ""), meta)


def induced_noether(L: Lagrangian, Y, psi, a0=0) -> tuple[PointSymmetry, Expr]:
    """Noether candidate X = 2ψt∂_t + Y^i∂_i with gauge f = a₀t, built from a KV/HV Y.

    ψ is the homothety constant.  For a KV (ψ = 0) with a₀ = 0 the gauge is
    constant.
    """
    t = sym(L.time)
    psi = as_expr(psi)
    X = PointSymmetry(mul(2, psi, t), tuple(Y.components))
    return X, normalize(mul(as_expr(a0), t))


__all__ = ["Lagrangian", "PointSymmetry", "noether_condition", "noether_residual",
           "noether_integral", "combine_integrals", "time_free", "conformal_lagrangian",
           "induced_noether", "velocity", "acceleration", "combine_verdicts"]
