"""Probabilistic zero testing of expressions."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .calculus import normalize
from .nodes import ZERO, Expr, as_expr
from .numeric import Bindings, DomainError, UnboundError, call_compiled, compile_exprs, prepare

DEFAULT_TRIALS = 24
DEFAULT_TOL = 1e-9
DEFAULT_SEED = 0x5EED
DEFAULT_INTERVAL = (0.5, 2.0)
_GRID = 2**20


class Verdict(str, Enum):
    ZERO = "Zero"
    NONZERO = "NonZero"
    INCONCLUSIVE = "Inconclusive"
    SKIPPED = "Skipped"


@dataclass
class ZeroTest:
    verdict: Verdict
    witness: dict | None = None
    value: float | None = None
    samples: int = 0
    domain_failures: int = 0
    max_ratio: float = 0.0
    notes: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.verdict is Verdict.ZERO

    @property
    def is_zero(self) -> bool:
        return self.verdict is Verdict.ZERO


def sample_points(symbols: Sequence[str], domain: Mapping | None, trials: int, seed: int,
                  default=DEFAULT_INTERVAL):
    """Latin-hypercube points on the per-symbol intervals, snapped to a dyadic grid."""
    rng = random.Random(seed)
    domain = domain or {}
    columns = []
    for s in symbols:
        lo, hi = domain.get(s, default)
        perm = list(range(trials))
        rng.shuffle(perm)
        col = []
        for i in range(trials):
            u = (perm[i] + rng.random()) / trials
            x = lo + (hi - lo) * u
            col.append(round(x * _GRID) / _GRID)
        columns.append(col)
    return [tuple(col[i] for col in columns) for i in range(trials)], rng


def is_zero(e, domain: Mapping | None = None, trials: int = DEFAULT_TRIALS,
            tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED,
            bindings: Bindings | None = None, singular: Sequence = (),
            default_interval=DEFAULT_INTERVAL) -> ZeroTest:
    """Decide whether ``e`` vanishes identically on the sampling box.

    ``Zero`` when normalization gives syntactic zero or every sample is below
    ``tol * (1 + scale)``, where ``scale`` is the absolute-value evaluation of
    the expression (the size of the terms that cancel).  ``NonZero`` carries
    the witness point.  ``Inconclusive`` when some samples left the domain and
    the rest were below tolerance.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    e = prepare(as_expr(e), bindings)
    if normalize(e) is ZERO:
        return ZeroTest(Verdict.ZERO, samples=0)
    numeric = bindings.numeric() if bindings is not None else {}
    missing = e.opaque_names - numeric.keys()
    if missing:
        raise UnboundError(f"opaque functions without instantiation: {sorted(missing)}")
    sing = [prepare(as_expr(s), bindings) for s in singular]
    names = set(e.free_symbols)
    for s in sing:
        names |= s.free_symbols
    symbols = tuple(sorted(names))
    fn = compile_exprs((e,), symbols, with_scale=True)
    guard = compile_exprs(tuple(sing), symbols, with_scale=True) if sing else None
    points, rng = sample_points(symbols, domain, trials, seed, default_interval)
    dom = domain or {}

    def acceptable(pt) -> bool:
        if guard is None:
            return True
        try:
            out = call_compiled(guard, pt, numeric)
        except DomainError:
            return False
        k = len(sing)
        return all(abs(out[i]) > 1e-8 * (1.0 + out[k + i]) for i in range(k))

    failures = 0
    max_ratio = 0.0
    for pt in points:
        tries = 0
        while not acceptable(pt) and tries < 64:
            pt = tuple(round((lo + (hi - lo) * rng.random()) * _GRID) / _GRID
                       for lo, hi in (dom.get(s, default_interval) for s in symbols))
            tries += 1
        try:
            value, scale = call_compiled(fn, pt, numeric)
        except DomainError:
            failures += 1
            continue
        ratio = abs(value) / (tol * (1.0 + scale))
        max_ratio = max(max_ratio, ratio)
        if ratio > 1.0:
            return ZeroTest(Verdict.NONZERO, witness=dict(zip(symbols, pt)), value=value,
                            samples=trials, domain_failures=failures, max_ratio=ratio)
    if failures:
        return ZeroTest(Verdict.INCONCLUSIVE, samples=trials, domain_failures=failures,
                        max_ratio=max_ratio)
    return ZeroTest(Verdict.ZERO, samples=trials, max_ratio=max_ratio)
