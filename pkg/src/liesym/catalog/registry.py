"""Lookup, enumeration and model-file export of catalog entries."""
from __future__ import annotations

import builtins
import threading
from typing import Callable

from ..expr import to_text
from .entry import KINDS, CatalogEntry, CatalogError
from .model import Model, ModelError, OpaqueSpec, load_model_file

_LOCK = threading.Lock()
_STATE: dict = {}


def _state():
    if not _STATE:
        with _LOCK:
            if not _STATE:
                from .data import build

                entries, aliases = build()
                _STATE["entries"] = entries
                _STATE["aliases"] = aliases
    return _STATE


def load(id: str) -> CatalogEntry:
    """The entry registered under ``id``."""
    try:
        return _state()["entries"][id]
    except KeyError:
        raise CatalogError(f"unknown catalog id {id!r}") from None


def ids() -> list[str]:
    return sorted(_state()["entries"])


def aliases() -> dict:
    return dict(_state()["aliases"])


def enumerate(kind: str | None = None, filter: Callable | dict | None = None, **fields) -> list:
    """Entries of ``kind`` (all kinds when ``None``), sorted by id.

    ``filter`` is either a predicate on entries or a mapping of data fields
    that must match; keyword arguments are merged into that mapping, so
    ``enumerate("table-row", table=1)`` lists the rows of table 1.
    """
    if kind is not None and kind not in KINDS:
        raise CatalogError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    want = dict(filter) if isinstance(filter, dict) else {}
    want.update(fields)
    pred = filter if callable(filter) else None
    out = []
    for id in sorted(_state()["entries"]):
        e = _state()["entries"][id]
        if kind is not None and e.kind != kind:
            continue
        if any(e.get(k) != v for k, v in want.items()):
            continue
        if pred is not None and not pred(e):
            continue
        out.append(e)
    return out


def resolve_metric_id(name: str) -> str:
    st = _state()
    if name in st["aliases"]:
        return st["aliases"][name]
    if name in st["entries"] and st["entries"][name].kind == "metric":
        return name
    raise CatalogError(f"{name!r} is neither a catalog metric id nor a model alias")


def _opaque_specs(entry: CatalogEntry, *more) -> dict:
    specs: dict = {}
    for e in (entry, *more):
        for k, inst in builtins.enumerate(e.instantiations):
            for n, (formals, body) in inst.items():
                prev = specs.setdefault(n, (len(formals), {}))
                prev[1].setdefault(k, body)
    return {n: OpaqueSpec(ar, tuple(b[k] for k in sorted(b))) for n, (ar, b) in specs.items()}


def catalog_model(name: str) -> Model:
    """Bundle a catalog metric with every catalog vector field defined on it.

    Vector fields are keyed by the last component of their id (``x2`` for
    ``vector.minisuperspace.x2``).
    """
    from ..expr import parse

    mid = resolve_metric_id(name)
    me = load(mid)
    vecs = {}
    vents = enumerate("vector", metric=mid)
    for v in vents:
        vecs[v.id.rsplit(".", 1)[-1]] = v.payload
    pot = me.get("potential")
    lag = None
    if me.get("lagrangian_potential") is not None:
        lag = {"potential": parse(me.get("lagrangian_potential")), "time": me.get("time", "t")}
    alias = next((a for a, i in sorted(aliases().items()) if i == mid), mid)
    return Model(me.payload, alias, vecs, parse(pot) if pot is not None else None, lag, {},
                 _opaque_specs(me, *vents))


def resolve_model(ref: str) -> Model:
    """A model from a file path, a catalog metric id or an alias."""
    import os

    if os.path.exists(ref):
        return load_model_file(ref)
    try:
        return catalog_model(ref)
    except CatalogError:
        raise ModelError(f"{ref!r} is not a readable model file, catalog metric id or alias "
                         f"(aliases: {', '.join(sorted(aliases()))})") from None


def export(id: str) -> dict:
    """JSON form of an entry; metric-based entries become loadable model files."""
    e = load(id)
    head = {"id": e.id, "kind": e.kind, "anchor": e.anchor}
    if e.kind == "metric":
        model = catalog_model(id)
        return {**head, "model": model.to_json()}
    if e.kind in ("vector", "potential", "table-row", "lagrangian"):
        mid = e.get("metric")
        if e.kind == "table-row":
            row = e.payload
            doc = Model(row.metric, e.id,
                        {"generator": row.generator} if row.generator is not None else {},
                        row.potential, None, {}, _opaque_specs(e)).to_json()
            doc["metric"] = [[to_text(c) for c in r] for r in row.metric.components]
            return {**head, "model": doc, "data": _plain(e.data), "notes": list(e.notes)}
        base = catalog_model(mid).to_json() if mid else None
        if base is None:
            L = e.payload
            base = Model(L.metric, e.id).to_json()
        specs = _opaque_specs(e)
        if specs:
            base.setdefault("opaque", {}).update(
                {n: {"arity": s.arity, "default": list(s.defaults)} for n, s in specs.items()})
        if e.kind == "vector":
            base["vector_fields"] = {"field": {x: to_text(c) for x, c in
                                               zip(e.payload.chart.coords, e.payload.components)}}
        elif e.kind == "potential":
            base["potential"] = to_text(e.payload)
        else:
            base["lagrangian"] = {"potential": to_text(e.payload.potential), "time": e.payload.time}
            base["metric"] = [[to_text(c) for c in r] for r in e.payload.metric.components]
        return {**head, "model": base, "data": _plain(e.data), "notes": list(e.notes)}
    return {**head, "data": _plain(e.data), "notes": list(e.notes), "payload": _plain(e.payload)}


def _plain(v):
    """JSON-friendly copy of entry data."""
    from collections.abc import Mapping

    from ..expr import Expr

    if isinstance(v, Mapping):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, Expr):
        return to_text(v)
    if hasattr(v, "template"):
        return {"template": v.template, "coords": list(v.coords)}
    if hasattr(v, "functions") and hasattr(v, "variable"):
        return {"variable": v.variable,
                "functions": {k: to_text(x) for k, x in v.functions.items()}}
    return str(v)


__all__ = ["load", "ids", "aliases", "enumerate", "resolve_metric_id", "catalog_model",
           "resolve_model", "export"]
