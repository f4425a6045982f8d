"""Substitute closed-form trajectories into Euler–Lagrange systems."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..config import CheckConfig
from ..expr import Expr, as_expr, diff, normalize, subs
from ..symmetry.noether import acceleration
from ..symmetry.report import ConstraintReport, run_checks
from .system import DynamicalSystem


@dataclass(frozen=True, eq=False)
class ClosedForm:
    """x^i(s) as expressions in the independent variable ``s``.

    ``identifications`` replace constants before checking (for instance a
    coupling constant expressed through the family's integration constants).
    ``energy`` is the required value of the Hamiltonian; ``None`` skips it.
    """

    variable: str
    functions: dict
    identifications: dict = field(default_factory=dict)
    energy: Expr | None = None
    domain: dict = field(default_factory=dict)

    def state(self, coords) -> dict:
        out = {}
        for x in coords:
            f = as_expr(self.functions[x])
            out[x] = f
            out[f"{x}_dot"] = diff(f, self.variable)
            out[acceleration(x)] = diff(f, self.variable, 2)
        return out


def on_family(e, sys: DynamicalSystem, family: ClosedForm) -> Expr:
    """Evaluate an expression in (x, ẋ, ẍ) along the family."""
    ident = {k: as_expr(v) for k, v in family.identifications.items()}
    e = subs(as_expr(e), ident)
    st = {k: subs(v, ident) for k, v in family.state(sys.coords).items()}
    return normalize(subs(e, st))


def verify_closed_form(sys: DynamicalSystem, family: ClosedForm,
                       config: CheckConfig | None = None) -> ConstraintReport:
    """Euler–Lagrange residuals (and the energy constraint) along the family."""
    if sys.time != family.variable:
        raise ValueError(f"family is in {family.variable!r}, system in {sys.time!r}")
    missing = set(sys.coords) - set(family.functions)
    if missing:
        raise ValueError(f"family lacks {sorted(missing)}")
    residuals, labels = [], []
    for x, r in zip(sys.coords, sys.residuals):
        residuals.append(on_family(r, sys, family))
        labels.append(f"euler_lagrange[{x}]")
    if family.energy is not None:
        h = sys.lagrangian.energy()
        residuals.append(on_family(h - as_expr(family.energy), sys, family))
        labels.append("energy")
    cfg = (config or CheckConfig()).with_domain(family.domain)
    return run_checks("closed_form", residuals, cfg, labels=labels,
                      extra={"family": {k: as_expr(v) for k, v in family.functions.items()},
                             "identifications": {k: as_expr(v) for k, v in
                                                 family.identifications.items()}})


def reconstruct_static_metric(family: ClosedForm, lapse_sq, change, substitutions=None,
                              coords=("t", "R", "th", "ph"), target=None):
    """Line element −a² dt² + dτ² + b²(dθ² + sin²θ dφ²) rebuilt from a family.

    The family gives a(s), b(s) in its own variable ``s``; ``dτ = ds / lapse_sq``
    with ``lapse_sq`` evaluated on the family, and ``change`` expresses ``s``
    through the new radial coordinate ``coords[1]``.  ``substitutions`` fix
    constants (applied after the family's identifications).
    """
    from ..geometry import Metric

    subs_map = {k: as_expr(v) for k, v in (substitutions or {}).items()}
    ident = {k: subs(as_expr(v), subs_map) for k, v in family.identifications.items()}
    s = family.variable
    change = as_expr(change)

    def on(e):
        e = subs(as_expr(e), ident)
        e = subs(e, {k: subs(as_expr(f), subs_map) for k, f in family.functions.items()})
        return subs(subs(e, subs_map), {s: change})

    a, b = on(family.functions["a"]), on(family.functions["b"])
    n2 = on(lapse_sq)
    ds_dR = diff(change, coords[1])
    t, R, th, ph = coords
    rows = [["0"] * 4 for _ in range(4)]
    rows[0][0] = normalize(-(a ** 2))
    rows[1][1] = normalize(ds_dR ** 2 / n2 ** 2)
    rows[2][2] = normalize(b ** 2)
    rows[3][3] = normalize(b ** 2 * as_expr(f"sin({th})^2"))
    dom = dict(target.chart.domain) if target is not None else {}
    sing = tuple(target.chart.singular) if target is not None else ()
    return Metric.from_rows(coords, rows, sing, dom, name="reconstructed")


def compare_metrics(g, target, config: CheckConfig | None = None) -> ConstraintReport:
    """Componentwise g_ij − target_ij, each zero-tested on the target's box."""
    if g.coords != target.coords:
        raise ValueError(f"charts differ: {g.coords} vs {target.coords}")
    n = g.dim
    res, labels = [], []
    for i in range(n):
        for j in range(i, n):
            res.append(normalize(g[i, j] - target[i, j]))
            labels.append(f"g[{g.coords[i]},{g.coords[j]}]")
    cfg = target.chart.config(config)
    return run_checks("metric_match", res, cfg, labels=labels)
