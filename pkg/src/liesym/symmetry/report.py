"""Verdict-carrying result of a symmetry check."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..config import CheckConfig
from ..expr import Bindings, Expr, Verdict, ZeroTest, as_expr, normalize, to_text


class NotConformalError(ValueError):
    """A check requiring a conformal Killing vector got something else."""


class NotASymmetryError(ValueError):
    pass


def combine_verdicts(verdicts: Sequence[Verdict]) -> Verdict:
    vs = list(verdicts)
    if not vs:
        return Verdict.ZERO
    if Verdict.NONZERO in vs:
        return Verdict.NONZERO
    if Verdict.INCONCLUSIVE in vs:
        return Verdict.INCONCLUSIVE
    if all(v is Verdict.SKIPPED for v in vs):
        return Verdict.SKIPPED
    return Verdict.ZERO


def describe_bindings(bindings: Bindings | None) -> dict:
    if bindings is None:
        return {}
    out = {}
    for name, fn in sorted(bindings.functions.items()):
        out[name] = fn.to_text() if hasattr(fn, "to_text") else getattr(fn, "__name__", repr(fn))
    for name, v in sorted(bindings.values.items()):
        out[name] = str(v)
    return out


@dataclass(frozen=True, eq=False)
class ConstraintReport:
    """Residuals of one check together with their zero tests.

    ``verdict`` is ``Zero`` exactly when every residual tested ``Zero``.
    ``labels`` names each residual; ``extra`` holds check-specific data such as
    the conformal factor or the generator that was checked.
    """

    name: str
    residuals: tuple = ()
    tests: tuple = ()
    labels: tuple = ()
    verdict: Verdict = Verdict.ZERO
    instantiations: dict = field(default_factory=dict)
    notes: tuple = ()
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict is Verdict.ZERO

    @property
    def witness(self) -> dict | None:
        for t in self.tests:
            if t.verdict is Verdict.NONZERO:
                return t.witness
        return None

    def to_json(self) -> dict:
        checks = []
        for label, r, t in zip(self.labels, self.residuals, self.tests):
            item = {"label": label, "residual": to_text(r), "verdict": t.verdict.value,
                    "samples": t.samples}
            if t.witness is not None:
                item["witness"] = t.witness
                item["value"] = t.value
            if t.domain_failures:
                item["domain_failures"] = t.domain_failures
            checks.append(item)
        out = {"check": self.name, "verdict": self.verdict.value, "residuals": checks}
        if self.instantiations:
            out["instantiations"] = dict(self.instantiations)
        if self.notes:
            out["notes"] = list(self.notes)
        if self.extra:
            out["details"] = {k: _jsonable(v) for k, v in self.extra.items()}
        return out


def _jsonable(v):
    if isinstance(v, Expr):
        return to_text(v)
    if isinstance(v, Verdict):
        return v.value
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, ConstraintReport):
        return v.to_json()
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


def run_checks(name: str, residuals, config: CheckConfig, labels=None, notes=(), extra=None,
               bindings: Bindings | None = None) -> ConstraintReport:
    """Zero-test each residual and assemble the report."""
    residuals = tuple(normalize(as_expr(r)) for r in residuals)
    labels = tuple(labels) if labels is not None else tuple(f"r{i}" for i in range(len(residuals)))
    cfg = config.with_bindings(bindings)
    tests = tuple(cfg.test(r) for r in residuals)
    return ConstraintReport(
        name=name, residuals=residuals, tests=tests, labels=labels,
        verdict=combine_verdicts([t.verdict for t in tests]),
        instantiations=describe_bindings(cfg.bindings), notes=tuple(notes), extra=dict(extra or {}))


def skipped(name: str, reason: str, extra=None) -> ConstraintReport:
    return ConstraintReport(name=name, verdict=Verdict.SKIPPED, notes=(reason,), extra=dict(extra or {}))


def merge(name: str, reports: Sequence[ConstraintReport], notes=(), extra=None) -> ConstraintReport:
    """One report whose residuals are the union of ``reports``."""
    residuals, tests, labels, inst, all_notes = [], [], [], {}, list(notes)
    many = len(reports) > 1
    for i, rep in enumerate(reports):
        tag = f"{rep.name}[{i}]" if many else rep.name
        residuals += rep.residuals
        tests += rep.tests
        labels += [f"{tag}:{lab}" for lab in rep.labels]
        inst.update({(f"{k}[{i}]" if many else k): v for k, v in rep.instantiations.items()})
        all_notes += list(rep.notes)
    verdicts = [r.verdict for r in reports]
    return ConstraintReport(name, tuple(residuals), tuple(tests), tuple(labels),
                            combine_verdicts(verdicts), inst, tuple(all_notes),
                            dict(extra or {}, parts=list(reports)))


__all__ = ["ConstraintReport", "NotConformalError", "NotASymmetryError", "combine_verdicts",
           "run_checks", "skipped", "merge", "describe_bindings", "ZeroTest"]
