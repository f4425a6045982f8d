"""Sampling settings shared by every symbolic check."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .expr import Bindings, ZeroTest, is_zero
from .expr.zero import DEFAULT_INTERVAL, DEFAULT_SEED, DEFAULT_TOL, DEFAULT_TRIALS


@dataclass(frozen=True)
class CheckConfig:
    """How residuals are zero-tested: sample count, tolerance, seed and box.

    ``domain`` maps symbol names to sampling intervals; symbols not listed
    (including constants such as ``a``, ``b``, ``mu``) use ``[1/2, 2]``.
    ``singular`` lists expressions that must stay away from zero at every
    sample point.
    """

    trials: int = DEFAULT_TRIALS
    tol: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    domain: Mapping = field(default_factory=dict)
    singular: tuple = ()
    bindings: Bindings | None = None

    def with_domain(self, domain: Mapping | None = None, singular=()) -> "CheckConfig":
        merged = dict(domain or {})
        merged.update(self.domain)
        return replace(self, domain=merged, singular=tuple(self.singular) + tuple(singular))

    def with_bindings(self, bindings: Bindings | None) -> "CheckConfig":
        if bindings is None:
            return self
        if self.bindings is None:
            return replace(self, bindings=bindings)
        merged = Bindings({**self.bindings.values, **bindings.values},
                          {**self.bindings.functions, **bindings.functions})
        return replace(self, bindings=merged)

    def test(self, e) -> ZeroTest:
        return is_zero(e, domain=self.domain, trials=self.trials, tol=self.tol, seed=self.seed,
                       bindings=self.bindings, singular=self.singular,
                       default_interval=DEFAULT_INTERVAL)


DEFAULT = CheckConfig()
