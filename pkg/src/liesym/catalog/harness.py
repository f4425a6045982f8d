"""Pairwise cross-checks between PDE symmetries and Noether symmetries over the catalog.

For every (metric, KV/HV Y, potential V) found in the catalog:

* if Y is a Lie symmetry of Δu = V u, the induced point symmetry
  X = 2ψt ∂_t + Y must be a Noether symmetry of L = ½g ẋẋ − V with a
  constant gauge;
* if Y is a Lie symmetry of Δu − u_t = V u with constant a₀, X must be a
  Noether symmetry with gauge a₀ t, and with a constant gauge exactly when
  a₀ = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..config import CheckConfig
from ..expr import Verdict, diff, normalize, to_text
from ..symmetry.conformal import HV, KV, classify, kg_symmetry_residual, schrodinger_check_nongradient
from ..symmetry.noether import Lagrangian, induced_noether, noether_residual
from .registry import enumerate, load


@dataclass(frozen=True, eq=False)
class Pair:
    label: str
    metric: object
    vector: object
    potential: object
    bindings: tuple


def candidate_pairs() -> list[Pair]:
    """Table rows plus every catalog potential combined with each KV/HV on its metric."""
    out = []
    for row in enumerate("table-row"):
        r = row.payload
        if r.skip_reason:
            continue
        out.append(Pair(row.id, r.metric, r.generator, r.potential, tuple(row.bindings())))
    for pot in enumerate("potential"):
        mid = pot.get("metric")
        g = load(mid).payload
        for v in enumerate("vector", metric=mid):
            if v.get("class") not in (KV, HV):
                continue
            out.append(Pair(f"{pot.id}|{v.id}", g, v.payload, pot.payload, tuple(pot.bindings())))
    return out


def check_pair(pair: Pair, config: CheckConfig | None = None) -> dict:
    """Run both implications for one pair under every instantiation."""
    out = {"pair": pair.label, "instantiations": []}
    for b in pair.bindings:
        c = classify(pair.metric, pair.vector, config, b)
        if c.cls not in (KV, HV):
            out["instantiations"].append({"class": c.cls, "applies": False})
            continue
        g, Y, V = pair.metric, pair.vector, pair.potential
        L = Lagrangian(g, V)
        rec = {"class": c.cls, "applies": True}
        kg = kg_symmetry_residual(g, V, Y, config, b, classification=c)
        rec["kg"] = kg.verdict.value
        a0 = normalize(-(Y.apply(V) + 2 * c.psi * V))
        cfg = g.chart.config(config).with_bindings(b)
        constant = all(cfg.test(diff(a0, x)).verdict is Verdict.ZERO for x in g.coords)
        if cfg.test(a0).verdict is Verdict.ZERO:
            a0 = normalize(0 * a0)
        rec["a0"] = to_text(a0) if constant else "not constant"
        schro = None
        if constant:
            schro = schrodinger_check_nongradient(g, V, Y, a0, config=config, bindings=b)
        rec["schrodinger"] = schro.verdict.value if schro is not None else "NonZero"
        X, f_ind = induced_noether(L, Y, c.psi, a0 if constant else 0)
        rec["noether_constant_gauge"] = noether_residual(L, X, 0, config, b).verdict.value
        rec["noether_induced_gauge"] = noether_residual(L, X, f_ind, config, b).verdict.value
        rec["induced_gauge"] = to_text(f_ind)
        out["instantiations"].append(rec)
    return out


def run_harness(config: CheckConfig | None = None) -> dict:
    """All pairs; counts of implications that hold and that fail."""
    results = [check_pair(p, config) for p in candidate_pairs()]
    kg_cases = kg_fail = sch_cases = sch_fail_const = sch_fail_induced = 0
    failures = []
    for r in results:
        for rec in r["instantiations"]:
            if not rec["applies"]:
                continue
            if rec["kg"] == Verdict.ZERO.value:
                kg_cases += 1
                if rec["noether_constant_gauge"] != Verdict.ZERO.value:
                    kg_fail += 1
                    failures.append((r["pair"], "kg->constant gauge"))
            if rec["schrodinger"] == Verdict.ZERO.value:
                sch_cases += 1
                if rec["noether_constant_gauge"] != Verdict.ZERO.value:
                    sch_fail_const += 1
                    failures.append((r["pair"], f"schrodinger->constant gauge (a0 = {rec['a0']})"))
                if rec["noether_induced_gauge"] != Verdict.ZERO.value:
                    sch_fail_induced += 1
                    failures.append((r["pair"], "schrodinger->gauge a0 t"))
    return {"pairs": results, "kg_cases": kg_cases, "kg_failures": kg_fail,
            "schrodinger_cases": sch_cases, "schrodinger_constant_gauge_failures": sch_fail_const,
            "schrodinger_induced_gauge_failures": sch_fail_induced, "failures": failures}


def x2_noether_check(config: CheckConfig | None = None) -> dict:
    """X2 on the field Lagrangian and on its constant-g0 conformal partner."""
    from ..expr import parse
    from ..symmetry.noether import PointSymmetry

    base = load("lagrangian.minisuperspace").payload
    conf = load("lagrangian.minisuperspace.g0").payload
    X_base = PointSymmetry.on(base, 0, {"a": parse("1/(a*b)")})
    X_conf = PointSymmetry.on(conf, 0, {"a": parse("1/(a*b)")})
    return {"base": noether_residual(base, X_base, 0, config).verdict.value,
            "conformal": noether_residual(conf, X_conf, 0, config).verdict.value}


__all__ = ["Pair", "candidate_pairs", "check_pair", "run_harness", "x2_noether_check"]
