"""Command-line front end.

Every command builds a JSON report; the human-readable output is rendered
from that report.  Exit codes: 0 when every verdict is Zero (or the check
passed), 1 when some verdict is NonZero, 2 on bad input, 3 when something
is Inconclusive and nothing is NonZero.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import __version__
from .config import CheckConfig
from .expr import ZERO, ExprError, Instantiation, NotPolynomial, Verdict, parse, to_text
from .geometry import GeometryError, conformal_transform
from .symmetry import (
    KV, NotASymmetryError, NotConformalError, PointSymmetry, classify, conformal_lagrangian,
    conformal_psi_law, kg_symmetry_residual, kv_discover_polynomial, noether_residual,
    schrodinger_check_gradient, schrodinger_check_nongradient, table_verify, yamabe_residual,
)
from .symmetry.tables import TableRow

SCHEMA_VERSION = 1
EXIT = {Verdict.ZERO: 0, Verdict.SKIPPED: 0, Verdict.NONZERO: 1, Verdict.INCONCLUSIVE: 3}


class UsageError(ValueError):
    """Bad command-line input that argparse cannot catch."""


# ------------------------------------------------------------------ helpers


def _instantiations(items) -> dict:
    """``f=body`` or ``f(u,v)=body`` pairs to Instantiation objects."""
    out = {}
    for item in items or ():
        name, sep, body = item.partition("=")
        name = name.strip()
        if not sep or not name or not body.strip():
            raise UsageError(f"--instantiate expects NAME=BODY, got {item!r}")
        if "(" in name:
            if not name.endswith(")"):
                raise UsageError(f"bad function head {name!r}")
            name, _, formals = name[:-1].partition("(")
            formals = tuple(f.strip() for f in formals.split(",") if f.strip())
        else:
            e = parse(body)
            used = sorted(e.free_symbols)
            formals = tuple(f for f in ("s", "t", "w") if f in used) or ("s",)
            stray = set(used) - set(formals)
            if stray:
                raise UsageError(f"instantiation of {name} uses {sorted(stray)}; "
                                 f"write {name}(s, ...)=body to name the formals")
        out[name.strip()] = Instantiation(formals, parse(body))
    return out


def _config(args) -> CheckConfig:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    return CheckConfig(trials=args.trials, tol=args.tol, seed=args.seed)


def _model(args):
    from .catalog import resolve_model

    return resolve_model(args.model)


def _potential(args, model, required=True):
    if getattr(args, "potential", None) is not None:
        return parse(args.potential)
    if model.potential is not None:
        return model.potential
    if required:
        raise UsageError("no potential: give --potential or add one to the model")
    return None


def _vector(model, name):
    from .catalog import ModelError

    try:
        return model.vector(name)
    except ModelError:
        hits = [k for k in model.vector_fields if k.lower() == name.lower()]
        if len(hits) == 1:
            return model.vector_fields[hits[0]]
        raise


def _bindings(args, model, *exprs):
    return model.bindings_for(*exprs, extra=_instantiations(args.instantiate))


def _scenario(name: str) -> str:
    from .catalog import ids

    if name.startswith("scenario.") or name in ids():
        return name
    return f"scenario.{name}"


def _vexprs(v):
    return tuple(v.components)


# ------------------------------------------------------------------ commands


def cmd_classify(args, cfg):
    model = _model(args)
    Y = _vector(model, args.vector)
    out = []
    for b in _bindings(args, model, *_vexprs(Y)):
        c = classify(model.metric, Y, cfg, b)
        item = c.to_json()
        item["vector"] = str(Y)
        item["tests"] = {k: v.value for k, v in c.tests.items()}
        if b.functions:
            item["instantiations"] = {k: f.to_text() for k, f in sorted(b.functions.items())}
        verdict = Verdict.ZERO if c.conclusive else Verdict.INCONCLUSIVE
        if args.expect is not None and c.cls != args.expect:
            verdict = Verdict.NONZERO
            item["expected"] = args.expect
        item["verdict"] = verdict.value
        out.append(item)
    return out


def _report_or_nonzero(fn, label):
    try:
        return fn().to_json()
    except (NotConformalError, NotASymmetryError) as exc:
        return {"check": label, "verdict": Verdict.NONZERO.value, "notes": [str(exc)],
                "residuals": []}


def cmd_check_kg(args, cfg):
    model = _model(args)
    Y = _vector(model, args.vector)
    V = _potential(args, model)
    return [_report_or_nonzero(lambda b=b: kg_symmetry_residual(model.metric, V, Y, cfg, b),
                               "kg_symmetry")
            for b in _bindings(args, model, V, *_vexprs(Y))]


def cmd_check_schrodinger(args, cfg):
    model = _model(args)
    V = _potential(args, model)
    g = model.metric
    if args.gradient is not None:
        if args.c is None or args.d is None:
            raise UsageError("--gradient needs --c and --d")
        S, c, d = parse(args.gradient), parse(args.c), parse(args.d)
        return [_report_or_nonzero(
            lambda b=b: schrodinger_check_gradient(g, V, S, c, d, config=cfg, bindings=b),
            "schrodinger_gradient") for b in _bindings(args, model, V, S)]
    if args.vector is None:
        raise UsageError("check-schrodinger needs --vector or --gradient")
    Y = _vector(model, args.vector)
    a0 = parse(args.a0)
    bsol = parse(args.b) if args.b is not None else None
    extra = (bsol,) if bsol is not None else ()
    return [_report_or_nonzero(
        lambda b=b: schrodinger_check_nongradient(g, V, Y, a0, bsol, config=cfg, bindings=b),
        "schrodinger_nongradient") for b in _bindings(args, model, V, a0, *_vexprs(Y), *extra)]


def _lagrangian(args, model):
    from .symmetry import Lagrangian

    if getattr(args, "potential", None) is not None:
        time_name = model.lagrangian.get("time", "t") if model.lagrangian else "t"
        return Lagrangian(model.metric, parse(args.potential), time_name, model.name)
    if model.lagrangian is not None:
        return model.to_lagrangian()
    if model.potential is not None:
        return Lagrangian(model.metric, model.potential, "t", model.name)
    return Lagrangian(model.metric, 0, "t", model.name)


def cmd_check_noether(args, cfg):
    model = _model(args)
    L = _lagrangian(args, model)
    xi = parse(args.xi)
    gauge = parse(args.gauge)
    if args.eta is not None:
        eta = dict(zip(model.coords, _vector(model, args.eta).components))
    else:
        eta = {}
    for item in args.eta_component or ():
        x, sep, body = item.partition("=")
        if not sep or x.strip() not in model.coords:
            raise UsageError(f"--eta-component expects COORD=EXPR with COORD in {model.coords}")
        eta[x.strip()] = parse(body)
    X = PointSymmetry.on(L, xi, eta)
    out = []
    for b in _bindings(args, model, L.potential, xi, gauge, *eta.values()):
        rep = noether_residual(L, X, gauge, cfg, b).to_json()
        rep["generator"] = str(X)
        rep["lagrangian"] = {"potential": to_text(L.potential), "time": L.time}
        out.append(rep)
    return out


def cmd_check_yamabe(args, cfg):
    model = _model(args)
    Y = _vector(model, args.vector)
    Vbar = _potential(args, model, required=False)
    Vbar = Vbar if Vbar is not None else parse("0")
    return [_report_or_nonzero(lambda b=b: yamabe_residual(model.metric, Vbar, Y, cfg, b),
                               "yamabe")
            for b in _bindings(args, model, Vbar, *_vexprs(Y))]


def cmd_curvature(args, cfg):
    """Ricci components are zero-tested; the verdict is Zero exactly for Ricci-flat metrics."""
    model = _model(args)
    g = model.metric
    cb = g.curvature
    n, xs = g.dim, g.coords
    chart_cfg = g.chart.config(cfg)
    out = []
    for b in _bindings(args, model):
        c = chart_cfg.with_bindings(b)
        ricci = []
        verdicts = []
        for i in range(n):
            for j in range(i, n):
                t = c.test(cb.ricci[i][j])
                verdicts.append(t.verdict)
                ricci.append({"component": f"R_{xs[i]}{xs[j]}", "expression": to_text(cb.ricci[i][j]),
                              "verdict": t.verdict.value})
        gamma = []
        for k in range(n):
            for i in range(n):
                for j in range(i, n):
                    e = cb.christoffel[k][i][j]
                    if e is not ZERO:
                        gamma.append({"symbol": f"Gamma^{xs[k]}_{xs[i]}{xs[j]}", "expression": to_text(e)})
        from .symmetry import combine_verdicts

        out.append({"check": "ricci_flat", "verdict": combine_verdicts(verdicts).value,
                    "christoffel": gamma, "ricci": ricci,
                    "scalar": to_text(cb.scalar),
                    "scalar_verdict": c.test(cb.scalar).verdict.value})
    return out


def cmd_conformal(args, cfg):
    model = _model(args)
    N = parse(args.factor)
    g = model.metric
    gbar = conformal_transform(g, N, name=f"{model.name or 'g'}_conformal")
    out = [{"check": "conformal_metric", "verdict": Verdict.ZERO.value,
            "factor": to_text(N),
            "metric": [[to_text(c) for c in row] for row in gbar.components]}]
    for name in sorted(model.vector_fields):
        Y = model.vector_fields[name]
        for b in _bindings(args, model, N, *_vexprs(Y)):
            rep = _report_or_nonzero(lambda: conformal_psi_law(g, N, Y, cfg, b), "conformal_psi_law")
            rep["vector"] = name
            out.append(rep)
    if args.emit_lagrangian:
        L = _lagrangian(args, model)
        Lbar = conformal_lagrangian(L, N)
        out.append({"check": "conformal_lagrangian", "verdict": Verdict.ZERO.value,
                    "lagrangian": {"potential": to_text(Lbar.potential), "time": Lbar.time,
                                   "metric": [[to_text(c) for c in row]
                                              for row in Lbar.metric.components],
                                   "expression": to_text(Lbar.expr)}})
    return out


def _rows(args):
    from .catalog import enumerate as entries

    sel = entries("table-row") if args.table is None else entries("table-row", table=args.table)
    if args.row is not None:
        want = args.row.lower()
        sel = [e for e in sel if want in (e.id.lower(), e.payload.label.lower(), str(e.get("row")),
                                          f"row{e.get('row')}")]
        if not sel:
            raise UsageError(f"no table row matches {args.row!r}")
    return sel


def cmd_tables(args, cfg):
    out = []
    for e in _rows(args):
        row: TableRow = e.payload
        rep = table_verify(row, None if row.instantiations else e.bindings(), cfg).to_json()
        rep["row"] = e.id
        rep["generator"] = str(row.generator) if row.generator is not None else None
        rep["potential"] = to_text(row.potential) if row.potential is not None else None
        if row.notes:
            rep.setdefault("notes", list(row.notes))
        if args.printed and not row.skip_reason:
            rep["printed"] = _printed_variant(e, cfg)
        out.append(rep)
    return out


def _printed_variant(e, cfg) -> dict:
    """The row as printed, before any reading was applied; informational only."""
    from dataclasses import replace

    row = e.payload
    pot, gen = e.get("printed_potential"), e.get("printed_generator")
    if pot is None and gen is None:
        return {"differs": False}
    out = {"differs": True}
    if gen is not None:
        # printed generators that differ are not well-formed fields on the chart
        out["generator"] = gen
    if pot is not None:
        out["potential"] = pot
        try:
            out["verdict"] = table_verify(replace(row, potential=parse(pot)), None, cfg).verdict.value
        except (NotConformalError, ExprError) as exc:
            out["verdict"] = f"not checkable: {exc}"
    return out


def cmd_drift(args, cfg):
    from .catalog.scenarios import run_drift

    rep = run_drift(_scenario(args.scenario), args.h, args.span)
    rep["check"] = "drift"
    rep["verdict"] = (Verdict.ZERO if rep["pass"] else Verdict.NONZERO).value
    return [rep]


def cmd_verify_solution(args, cfg):
    from .catalog.scenarios import run_solution

    rep = run_solution(_scenario(args.scenario), args.points, seed=args.seed, method=args.method)
    rep["check"] = "solution"
    rep["verdict"] = (Verdict.ZERO if rep["pass"] else Verdict.NONZERO).value
    return [rep]


def cmd_discover_kv(args, cfg):
    model = _model(args)
    if args.degree < 0:
        raise UsageError("--degree must be non-negative")
    basis, dim = kv_discover_polynomial(model.metric, args.degree)
    vecs = []
    verdicts = []
    for v in basis:
        c = classify(model.metric, v, cfg)
        verdicts.append(Verdict.ZERO if c.cls == KV else Verdict.NONZERO)
        vecs.append({"field": str(v), "class": c.cls})
    from .symmetry import combine_verdicts

    return [{"check": "kv_discover", "degree": args.degree, "dimension": dim, "basis": vecs,
             "verdict": combine_verdicts(verdicts).value}]


def cmd_catalog(args, cfg):
    from .catalog import aliases, enumerate as entries, export

    if args.action == "list":
        kind = args.id
        items = [{"id": e.id, "kind": e.kind, "anchor": e.anchor} for e in entries(kind)]
        return [{"check": "catalog_list", "verdict": Verdict.ZERO.value, "entries": items,
                 "aliases": aliases()}]
    if args.id is None:
        raise UsageError("catalog export needs an id")
    doc = export(args.id)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc.get("model", doc), fh, indent=2)
            fh.write("\n")
    return [{"check": "catalog_export", "verdict": Verdict.ZERO.value, "export": doc}]


COMMANDS = {
    "classify": cmd_classify, "check-kg": cmd_check_kg, "check-schrodinger": cmd_check_schrodinger,
    "check-noether": cmd_check_noether, "check-yamabe": cmd_check_yamabe,
    "curvature": cmd_curvature, "conformal": cmd_conformal, "tables": cmd_tables,
    "drift": cmd_drift, "verify-solution": cmd_verify_solution, "discover-kv": cmd_discover_kv,
    "catalog": cmd_catalog,
}


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("checking")
    g.add_argument("--tol", type=float, default=1e-9, help="relative zero tolerance")
    g.add_argument("--trials", type=int, default=24, help="sample points per zero test")
    g.add_argument("--seed", type=lambda s: int(s, 0), default=0x5EED, help="sampling seed")
    g.add_argument("--json", action="store_true", help="print the JSON report")
    g.add_argument("--quiet", action="store_true", help="print only the summary line")
    g.add_argument("--no-timings", action="store_true", help="leave timings out of the report")
    g.add_argument("--instantiate", action="append", metavar="NAME=BODY",
                   help="meaning of an arbitrary function, e.g. f='s^2' or F(s,t)='s*t'")

    p = argparse.ArgumentParser(prog="liesym", description=__doc__.splitlines()[0],
                                parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def cmd(name, help):
        return sub.add_parser(name, help=help, parents=[common], description=help)

    def model_vector(sp, vector_required=True):
        sp.add_argument("--model", required=True, help="model file, catalog metric id or alias")
        sp.add_argument("--vector", required=vector_required, help="vector field name in the model")
        sp.add_argument("--potential", help="potential expression (overrides the model's)")

    sp = cmd("classify", "classify a vector field as KV, HV, spCKV, properCKV or notCKV")
    model_vector(sp)
    sp.add_argument("--expect", choices=["KV", "HV", "spCKV", "properCKV", "notCKV"])

    sp = cmd("check-kg", "Lie symmetry condition of the Klein-Gordon equation")
    model_vector(sp)

    sp = cmd("check-schrodinger", "Lie symmetry condition of the heat/Schrodinger equation")
    model_vector(sp, vector_required=False)
    sp.add_argument("--a0", default="0", help="constant a0 of the non-gradient branch")
    sp.add_argument("--b", help="candidate solution b to check alongside")
    sp.add_argument("--gradient", metavar="S", help="gradient branch with Y = grad S")
    sp.add_argument("--c", help="constant c of the gradient branch")
    sp.add_argument("--d", help="constant d of the gradient branch")

    sp = cmd("check-noether", "Noether condition of a point symmetry")
    sp.add_argument("--model", required=True)
    sp.add_argument("--potential", help="Lagrangian potential (overrides the model's)")
    sp.add_argument("--xi", default="0", help="time component")
    sp.add_argument("--eta", help="vector field of the model giving the space components")
    sp.add_argument("--eta-component", action="append", metavar="COORD=EXPR",
                    help="space component given directly; may repeat")
    sp.add_argument("--gauge", default="0", help="gauge function f")

    sp = cmd("check-yamabe", "symmetry condition of the conformal Klein-Gordon equation")
    model_vector(sp)

    sp = cmd("curvature", "Christoffel symbols, Ricci tensor and scalar; Zero when Ricci flat")
    sp.add_argument("--model", required=True)

    sp = cmd("conformal", "conformally related metric and transport of the conformal factor")
    sp.add_argument("--model", required=True)
    sp.add_argument("--factor", required=True, help="N in g_bar = N^2 g")
    sp.add_argument("--potential", help="Lagrangian potential for --emit-lagrangian")
    sp.add_argument("--emit-lagrangian", action="store_true")

    sp = cmd("tables", "symmetry tables")
    sp.add_argument("action", choices=["verify"])
    sp.add_argument("--table", type=int, choices=[1, 2])
    sp.add_argument("--row", help="row label, number or id")
    sp.add_argument("--printed", action="store_true",
                    help="also check rows as printed before any reading was applied")

    sp = cmd("drift", "integrate a scenario and measure the drift of its first integrals")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--h", type=float, help="RK4 step")
    sp.add_argument("--span", type=float, help="integration time")

    sp = cmd("verify-solution", "pointwise or symbolic check of a solution scenario")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--points", type=int)
    sp.add_argument("--method", choices=["symbolic", "stencil"], default="symbolic")

    sp = cmd("discover-kv", "polynomial Killing vectors of a metric")
    sp.add_argument("--model", required=True)
    sp.add_argument("--degree", type=int, default=1)

    sp = cmd("catalog", "list or export catalog entries")
    sp.add_argument("action", choices=["list", "export"])
    sp.add_argument("id", nargs="?", help="kind to list, or id to export")
    sp.add_argument("-o", "--output", help="write the exported model file here")
    return p


# ------------------------------------------------------------------ output


def overall(results) -> Verdict:
    from .symmetry import combine_verdicts

    vs = [Verdict(r["verdict"]) for r in results]
    return combine_verdicts(vs) if vs else Verdict.ZERO


def render(report: dict) -> str:
    """Human text for a report; nothing here is computed anew."""
    lines = []
    if "error" in report:
        return f"error: {report['error']}"
    q = report["options"]["quiet"]
    if not q:
        for r in report["results"]:
            lines.extend(_render_result(report["command"], r))
    lines.append(f"{report['command']}: {report['verdict']} (exit {report['exit_code']})")
    return "\n".join(lines)


def _render_result(command, r) -> list:
    head = r.get("row") or r.get("vector") or r.get("scenario") or r.get("check", command)
    out = []
    if "class" in r and command == "classify":
        out.append(f"{head}: {r['class']}  psi = {r['psi']}  gradient = {r['gradient']}")
    elif command == "catalog" and "entries" in r:
        for e in r["entries"]:
            out.append(f"{e['id']:<40} {e['kind']:<10} {e['anchor']}")
        return out
    elif command == "catalog":
        return [json.dumps(r["export"], indent=2)]
    elif command == "drift":
        for row in r["integrals"]:
            tf = f"  time-free={row['time_free']}" if "time_free" in row else ""
            out.append(f"{row['integral']:<36} drift {row['max_abs_drift']:.3e}{tf}  "
                       f"{'pass' if row['pass'] else 'FAIL'}")
    elif command == "verify-solution" and "results" in r:
        for row in r["results"]:
            out.append(f"{row['convention']:<14} {row['parameter']!s:<4} max residual "
                       f"{row['max_abs_residual']:.3e}  {'pass' if row['pass'] else 'FAIL'}")
    elif command == "verify-solution":
        out.append(f"equations: {r['equations']['verdict']}  reconstruction: "
                   f"{r['reconstruction']['verdict']}")
        for k, v in r["diagnostics"].items():
            out.append(f"  {k}: {v}")
    elif command == "curvature":
        for c in r["ricci"]:
            out.append(f"{c['component']} = {c['expression']}")
        out.append(f"R = {r['scalar']}")
    elif command == "discover-kv":
        out.append(f"dimension {r['dimension']} (degree <= {r['degree']})")
        out.extend(f"  {v['field']}  [{v['class']}]" for v in r["basis"])
    elif "metric" in r and r.get("check") == "conformal_metric":
        out.append(f"g_bar = {r['metric']}")
    elif r.get("check") == "conformal_lagrangian":
        out.append(f"L_bar = {r['lagrangian']['expression']}")
    det = r.get("details", {})
    if "class_bar" in det:
        out.append(f"  class {det['class']} -> {det['class_bar']}  psi = {det['psi']}  "
                   f"psi_bar = {det['psi_bar']}")
    for res in r.get("residuals", ()):
        w = f"  witness {res['witness']}" if "witness" in res else ""
        out.append(f"  {res['label']}: {res['verdict']}{w}")
    for note in r.get("notes", ()):
        out.append(f"  note: {note}")
    if "printed" in r and r["printed"].get("differs"):
        out.append(f"  as printed: {r['printed'].get('verdict', 'not checkable')}")
    out.append(f"{head}: {r['verdict']}")
    return out


# ------------------------------------------------------------------ entry


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the command, write the report; return the exit code."""
    from .catalog import CatalogError, ModelError

    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, "argv": argv,
              "options": {"tol": args.tol, "trials": args.trials, "seed": args.seed,
                          "quiet": args.quiet}}
    t0 = time.perf_counter()
    try:
        cfg = _config(args)
        results = COMMANDS[args.command](args, cfg)
    except (UsageError, ModelError, CatalogError, ExprError, GeometryError, NotPolynomial,
            KeyError, ValueError) as exc:
        msg = str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc)
        report.update({"error": msg, "error_type": type(exc).__name__, "exit_code": 2})
        if args.json:
            stdout.write(json.dumps(report, indent=2) + "\n")
        print(f"error: {msg}", file=stderr)
        return 2
    verdict = overall(results)
    code = EXIT[verdict]
    report.update({"results": results, "verdict": verdict.value, "exit_code": code})
    if not args.no_timings:
        report["timings"] = {"total_seconds": round(time.perf_counter() - t0, 6)}
    if args.json:
        stdout.write(json.dumps(report, indent=2, default=str) + "\n")
    else:
        stdout.write(render(report) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
