"""Model files: a chart, a metric and optional fields, potentials and functions in JSON.

Layout::

    {
      "name": "euclid2",
      "chart": ["x", "y"],
      "metric": [["1", "0"], ["0", "1"]],
      "singular": ["x"],
      "domain": {"x": [0.5, 2]},
      "potential": "x^(-2)*f(y/x)",
      "vector_fields": {"dilation": {"x": "x", "y": "y"}},
      "lagrangian": {"potential": "x^2/2", "time": "t"},
      "constants": {"a": [0.5, 2]},
      "opaque": {"f": {"arity": 1, "default": ["s^2", "exp(s)"]}}
    }

Every expression uses the ordinary expression grammar.  ``default`` may be
a single body or a list of bodies; formals are ``s, t, w`` unless a
``formals`` list is given.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from ..expr import Bindings, Expr, ExprError, Instantiation, as_expr, parse, to_text
from ..geometry import Chart, GeometryError, Metric, VectorField
from ..symmetry.noether import Lagrangian
from .entry import DEFAULT_FORMALS, opaque_arities

_KEYS = {"name", "chart", "metric", "singular", "domain", "potential", "vector_fields",
         "lagrangian", "constants", "opaque"}


class ModelError(ValueError):
    """A model file does not match the schema or cannot be interpreted."""


@dataclass(frozen=True)
class OpaqueSpec:
    arity: int
    defaults: tuple = ()  # body texts
    formals: tuple = ()

    def instantiation(self, k: int) -> Instantiation:
        formals = self.formals or DEFAULT_FORMALS[:self.arity]
        return Instantiation(formals, self.defaults[k % len(self.defaults)])


@dataclass(frozen=True, eq=False)
class Model:
    metric: Metric
    name: str = ""
    vector_fields: Mapping = field(default_factory=dict)
    potential: Expr | None = None
    lagrangian: Mapping | None = None  # {"potential": Expr, "time": str}
    constants: Mapping = field(default_factory=dict)
    opaque: Mapping = field(default_factory=dict)

    @property
    def coords(self) -> tuple:
        return self.metric.coords

    def vector(self, name: str) -> VectorField:
        try:
            return self.vector_fields[name]
        except KeyError:
            known = ", ".join(sorted(self.vector_fields)) or "none"
            raise ModelError(f"model has no vector field {name!r} (known: {known})") from None

    def to_lagrangian(self) -> Lagrangian:
        if self.lagrangian is None:
            raise ModelError("model has no lagrangian")
        return Lagrangian(self.metric, self.lagrangian["potential"],
                          self.lagrangian.get("time", "t"), self.name)

    def bindings_for(self, *exprs, extra: Mapping | None = None) -> list[Bindings]:
        """One Bindings per default instantiation of the opaque functions in ``exprs``.

        ``extra`` maps names to :class:`Instantiation` objects given on the
        command line; they override the model's defaults.  A function with
        neither raises :class:`ModelError`.
        """
        extra = dict(extra or {})
        used = opaque_arities(*exprs, *(c for row in self.metric.components for c in row))
        used = {n: a for n, a in used.items() if n not in ("besselI", "besselK")}
        rounds = 1
        for n, ar in used.items():
            if n in extra:
                if extra[n].arity != ar:
                    raise ModelError(f"{n} has arity {ar}, its instantiation has {extra[n].arity}")
                continue
            spec = self.opaque.get(n)
            if spec is None or not spec.defaults:
                raise ModelError(f"arbitrary function {n!r} has no instantiation; "
                                 f"give one with --instantiate {n}='...'")
            if spec.arity != ar:
                raise ModelError(f"{n} declared with arity {spec.arity} but used with {ar}")
            rounds = max(rounds, len(spec.defaults))
        out = []
        for k in range(rounds):
            funcs = {n: extra[n] if n in extra else self.opaque[n].instantiation(k) for n in used}
            out.append(Bindings({}, funcs))
        return out

    def to_json(self) -> dict:
        m = self.metric
        out: dict = {"name": self.name, "chart": list(m.coords),
                     "metric": [[to_text(c) for c in row] for row in m.components],
                     "singular": [to_text(s) for s in m.chart.singular]}
        dom = {k: list(v) for k, v in m.chart.domain.items() if k not in self.constants}
        if dom:
            out["domain"] = dom
        if self.potential is not None:
            out["potential"] = to_text(self.potential)
        if self.vector_fields:
            out["vector_fields"] = {
                n: {x: to_text(c) for x, c in zip(m.coords, v.components)}
                for n, v in self.vector_fields.items()}
        if self.lagrangian is not None:
            out["lagrangian"] = {"potential": to_text(as_expr(self.lagrangian["potential"])),
                                 "time": self.lagrangian.get("time", "t")}
        if self.constants:
            out["constants"] = {k: list(v) for k, v in self.constants.items()}
        if self.opaque:
            ops = {}
            for n, s in self.opaque.items():
                d: dict = {"arity": s.arity, "default": list(s.defaults)}
                if s.formals:
                    d["formals"] = list(s.formals)
                ops[n] = d
            out["opaque"] = ops
        return out


def _expr(text, where: str) -> Expr:
    if not isinstance(text, (str, int, float)) or isinstance(text, bool):
        raise ModelError(f"{where}: expected an expression string, got {type(text).__name__}")
    try:
        return parse(str(text))
    except ExprError as exc:
        raise ModelError(f"{where}: {exc}") from None


def _interval(v, where: str) -> tuple:
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
            or not v[0] < v[1]):
        raise ModelError(f"{where}: expected [lo, hi] with lo < hi")
    return (float(v[0]), float(v[1]))


def _mapping(doc, key) -> dict:
    v = doc.get(key, {})
    if not isinstance(v, dict):
        raise ModelError(f"{key}: expected an object")
    return v


def model_from_json(doc) -> Model:
    """Validate a decoded model document and build the :class:`Model`."""
    if not isinstance(doc, dict):
        raise ModelError("model file must be a JSON object")
    unknown = set(doc) - _KEYS
    if unknown:
        raise ModelError(f"unknown model keys {sorted(unknown)}")
    for key in ("chart", "metric"):
        if key not in doc:
            raise ModelError(f"model file lacks {key!r}")
    chart = doc["chart"]
    if (not isinstance(chart, list) or not chart
            or not all(isinstance(c, str) and c.isidentifier() for c in chart)):
        raise ModelError("chart: expected a non-empty list of coordinate names")
    n = len(chart)
    rows = doc["metric"]
    if not isinstance(rows, list) or len(rows) != n or any(
            not isinstance(r, list) or len(r) != n for r in rows):
        raise ModelError(f"metric: expected a {n}x{n} array")
    comps = [[_expr(c, f"metric[{i}][{j}]") for j, c in enumerate(r)] for i, r in enumerate(rows)]
    singular = doc.get("singular", [])
    if not isinstance(singular, list):
        raise ModelError("singular: expected a list")
    sing = [_expr(s, f"singular[{i}]") for i, s in enumerate(singular)]
    domain = {k: _interval(v, f"domain.{k}") for k, v in _mapping(doc, "domain").items()}
    constants = {k: _interval(v, f"constants.{k}") for k, v in _mapping(doc, "constants").items()}
    clash = set(constants) & set(chart)
    if clash:
        raise ModelError(f"constants {sorted(clash)} clash with coordinates")
    try:
        metric = Metric(Chart(tuple(chart), tuple(sing), {**constants, **domain}),
                        tuple(tuple(r) for r in comps), doc.get("name", ""))
    except GeometryError as exc:
        raise ModelError(f"metric: {exc}") from None
    potential = _expr(doc["potential"], "potential") if "potential" in doc else None
    fields = {}
    for name, comp in _mapping(doc, "vector_fields").items():
        if not isinstance(comp, dict):
            raise ModelError(f"vector_fields.{name}: expected an object {{coord: expr}}")
        bad = set(comp) - set(chart)
        if bad:
            raise ModelError(f"vector_fields.{name}: unknown coordinates {sorted(bad)}")
        fields[name] = VectorField.on(metric.chart, {x: _expr(c, f"vector_fields.{name}.{x}")
                                                     for x, c in comp.items()})
    lag = None
    if "lagrangian" in doc:
        raw = doc["lagrangian"]
        if isinstance(raw, str):
            raw = {"potential": raw}
        if not isinstance(raw, dict) or "potential" not in raw:
            raise ModelError("lagrangian: expected {\"potential\": expr, \"time\": name}")
        time = raw.get("time", "t")
        if not isinstance(time, str) or not time.isidentifier() or time in chart:
            raise ModelError("lagrangian.time: expected a fresh identifier")
        lag = {"potential": _expr(raw["potential"], "lagrangian.potential"), "time": time}
    opaque = {}
    for name, spec in _mapping(doc, "opaque").items():
        if not isinstance(spec, dict) or not isinstance(spec.get("arity"), int) or spec["arity"] < 1:
            raise ModelError(f"opaque.{name}: expected {{\"arity\": k >= 1, \"default\": ...}}")
        ar = spec["arity"]
        formals = tuple(spec.get("formals", DEFAULT_FORMALS[:ar]))
        if len(formals) != ar:
            raise ModelError(f"opaque.{name}: {len(formals)} formals for arity {ar}")
        defaults = spec.get("default", [])
        if isinstance(defaults, str):
            defaults = [defaults]
        bodies = []
        for k, body in enumerate(defaults):
            e = _expr(body, f"opaque.{name}.default[{k}]")
            extra = e.free_symbols - set(formals)
            if extra:
                raise ModelError(f"opaque.{name}.default[{k}]: unbound symbols {sorted(extra)}")
            bodies.append(to_text(e))
        opaque[name] = OpaqueSpec(ar, tuple(bodies), tuple(spec["formals"]) if "formals" in spec else ())
    return Model(metric, doc.get("name", ""), fields, potential, lag, constants, opaque)


def load_model_file(path) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path} is not valid JSON: {exc}") from None
    return model_from_json(doc)
