"""Catalog entries and the default meanings of arbitrary functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Mapping

from ..expr import Bindings, Expr, Instantiation, as_expr, to_text

KINDS = ("metric", "vector", "potential", "lagrangian", "integral", "pde", "solution",
         "table-row", "scenario")

# two meanings per arity, used pairwise: all functions take their first
# default, then all take their second
DEFAULT_FORMALS = ("s", "t", "w")
DEFAULT_BODIES = {
    1: ("s^2", "exp(s)"),
    2: ("s^2*t + t", "exp(s)*t"),
    3: ("s^2*t*w + t", "exp(s)*t*w"),
}


class CatalogError(KeyError):
    """Unknown catalog id or malformed catalog query."""

    def __str__(self):  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


def freeze(obj):
    """Recursively turn dicts into read-only mappings and lists into tuples."""
    if isinstance(obj, Mapping):
        return MappingProxyType({k: freeze(v) for k, v in obj.items()})
    if isinstance(obj, (list, tuple)):
        return tuple(freeze(v) for v in obj)
    return obj


def opaque_arities(*exprs) -> dict:
    """name -> arity for every opaque function in ``exprs``."""
    out: dict = {}

    def walk(e: Expr):
        from ..expr import Opaque

        if isinstance(e, Opaque):
            prev = out.setdefault(e.name, len(e.fargs))
            if prev != len(e.fargs):
                raise ValueError(f"{e.name} used with {prev} and {len(e.fargs)} arguments")
        for a in e.args:
            walk(a)

    for e in exprs:
        if e is not None:
            walk(as_expr(e))
    return out


def default_instantiations(arities: Mapping, skip=("besselI", "besselK")) -> tuple:
    """The two default instantiation sets for the given opaque functions.

    Returns a tuple of ``{name: (formals, body_text)}`` dicts, or ``()`` when
    there is nothing to instantiate.
    """
    names = sorted(n for n in arities if n not in skip)
    if not names:
        return ()
    sets = []
    for k in range(2):
        one = {}
        for n in names:
            ar = arities[n]
            if ar not in DEFAULT_BODIES:
                raise ValueError(f"no default instantiation for arity {ar}")
            one[n] = (DEFAULT_FORMALS[:ar], DEFAULT_BODIES[ar][k])
        sets.append(one)
    return tuple(sets)


def to_bindings(spec: Mapping | None, values: Mapping | None = None) -> Bindings:
    """``{name: (formals, body)}`` to :class:`Bindings`."""
    funcs = {n: Instantiation(f, b) for n, (f, b) in (spec or {}).items()}
    return Bindings(dict(values or {}), funcs)


def describe_instantiation(spec: Mapping) -> dict:
    return {n: f"({', '.join(f)}) -> {to_text(as_expr(b))}" for n, (f, b) in spec.items()}


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """One named object.

    ``payload`` is the live object (a :class:`~liesym.geometry.Metric`, a
    :class:`~liesym.symmetry.TableRow`, ...); ``data`` holds the
    kind-specific extra fields (claimed class, printed variants, scenario
    parameters) as read-only mappings.
    """

    id: str
    kind: str
    payload: Any
    anchor: str = ""
    domain: Mapping = field(default_factory=dict)
    instantiations: tuple = ()
    data: Mapping = field(default_factory=dict)
    notes: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "domain", freeze(dict(self.domain)))
        object.__setattr__(self, "instantiations", freeze(tuple(self.instantiations)))
        object.__setattr__(self, "data", freeze(dict(self.data)))
        object.__setattr__(self, "notes", tuple(self.notes))

    def bindings(self) -> list[Bindings]:
        """One :class:`Bindings` per default instantiation (at least one)."""
        if not self.instantiations:
            return [Bindings()]
        return [to_bindings(s) for s in self.instantiations]

    def get(self, key, default=None):
        return self.data.get(key, default)

    def __repr__(self):
        return f"<CatalogEntry {self.id} ({self.kind})>"
