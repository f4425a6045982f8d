"""Euler–Lagrange equations, fixed-step RK4 and first-integral drift."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from ..expr import (
    Bindings, DomainError, ExprError, add, as_expr, compile_exprs, diff, mul, normalize, subs,
)
from ..expr.numeric import call_compiled, prepare
from ..geometry import SingularMetricError, invert
from ..symmetry.noether import Lagrangian, acceleration


@dataclass(frozen=True, eq=False)
class DynamicalSystem:
    """ẍ^i = F^i(x, ẋ) obtained from a Lagrangian.

    ``residuals`` are the Euler–Lagrange expressions d/dt(∂L/∂ẋ^i) − ∂L/∂x^i
    with accelerations as ``<x>_ddot`` symbols.
    """

    lagrangian: Lagrangian
    residuals: tuple
    accelerations: tuple

    @property
    def coords(self) -> tuple:
        return self.lagrangian.coords

    @property
    def velocities(self) -> tuple:
        return self.lagrangian.velocities

    @property
    def time(self) -> str:
        return self.lagrangian.time


def euler_lagrange(L: Lagrangian) -> DynamicalSystem:
    Lx = L.expr
    accs = [acceleration(x) for x in L.coords]
    residuals = []
    for x, v in zip(L.coords, L.velocities):
        residuals.append(normalize(add(L.total_derivative(diff(Lx, v)), mul(-1, diff(Lx, x)))))
    # EL is linear in the accelerations: A ẍ + rest = 0
    A = [[diff(r, a) for a in accs] for r in residuals]
    zero = {a: 0 for a in accs}
    rest = [subs(r, zero) for r in residuals]
    try:
        Ainv = invert(A)
    except SingularMetricError as exc:
        raise SingularMetricError(f"kinetic metric is singular: {exc}") from None
    n = len(accs)
    F = tuple(normalize(mul(-1, add(*(mul(Ainv[i][j], rest[j]) for j in range(n)))))
              for i in range(n))
    return DynamicalSystem(L, tuple(residuals), F)


@dataclass
class Trajectory:
    times: list
    states: list  # tuples (x^1..x^n, ẋ^1..ẋ^n)
    coords: tuple
    velocities: tuple
    time: str
    method: str = "rk4"
    step: float = 0.0
    span: tuple = (0.0, 0.0)
    truncated: bool = False
    message: str = ""
    params: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.times)

    def column(self, name: str) -> list:
        names = self.coords + self.velocities
        k = names.index(name)
        return [s[k] for s in self.states]


def _rhs(sys: DynamicalSystem, params: Mapping, bindings: Bindings | None):
    F = [prepare(f, bindings) for f in sys.accelerations]
    F = [subs(f, {k: as_expr(v) for k, v in params.items()}) for f in F]
    names = (sys.time,) + sys.coords + sys.velocities
    extra = set().union(*(f.free_symbols for f in F)) - set(names)
    if extra:
        raise ExprError(f"no value for constants {sorted(extra)}")
    fn = compile_exprs(tuple(F), names)
    numeric = bindings.numeric() if bindings is not None else {}
    n = len(sys.coords)

    def rhs(t, y):
        acc = call_compiled(fn, (t, *y), numeric)
        return y[n:] + tuple(acc)

    return rhs


def integrate(sys: DynamicalSystem, init, span, step: float, params: Mapping | None = None,
              bindings: Bindings | None = None) -> Trajectory:
    """Classical fixed-step RK4 from ``init`` = (x..., ẋ...) over ``span``.

    A domain error part-way stops the integration; the trajectory so far is
    returned with ``truncated`` set.
    """
    t0, t1 = float(span[0]), float(span[1])
    if step <= 0 or t1 <= t0:
        raise ValueError("need step > 0 and span[1] > span[0]")
    params = dict(params or {})
    n = len(sys.coords)
    y = tuple(float(v) for v in init)
    if len(y) != 2 * n:
        raise ValueError(f"initial state needs {2 * n} values")
    rhs = _rhs(sys, params, bindings)
    # whole steps, then one short step if the span is not a multiple of ``step``
    steps = max(1, math.ceil((t1 - t0) / step - 1e-9))
    traj = Trajectory([t0], [y], sys.coords, sys.velocities, sys.time, "rk4", step, (t0, t1),
                      params=params)
    for k in range(steps):
        t = t0 + k * step
        h = min(step, t1 - t) if k == steps - 1 else step
        try:
            k1 = rhs(t, y)
            k2 = rhs(t + h / 2, tuple(a + h / 2 * b for a, b in zip(y, k1)))
            k3 = rhs(t + h / 2, tuple(a + h / 2 * b for a, b in zip(y, k2)))
            k4 = rhs(t + h, tuple(a + h * b for a, b in zip(y, k3)))
        except DomainError as exc:
            traj.truncated = True
            traj.message = f"stopped at t={t}: {exc}"
            break
        y = tuple(a + h / 6 * (p + 2 * q + 2 * r + s) for a, p, q, r, s in zip(y, k1, k2, k3, k4))
        if not all(math.isfinite(v) for v in y):
            traj.truncated = True
            traj.message = f"non-finite state at t={t + h}"
            break
        traj.times.append(t1 if k == steps - 1 else t0 + (k + 1) * step)
        traj.states.append(y)
    return traj


@dataclass(frozen=True)
class Drift:
    max_abs: float
    relative: float | None
    initial: float
    values: tuple = ()


def evaluate_along(traj: Trajectory, I, bindings: Bindings | None = None) -> list[float]:
    I = prepare(as_expr(I), bindings)
    I = subs(I, {k: as_expr(v) for k, v in traj.params.items()})
    names = (traj.time,) + traj.coords + traj.velocities
    extra = I.free_symbols - set(names)
    if extra:
        raise ExprError(f"no value for constants {sorted(extra)}")
    fn = compile_exprs((I,), names)
    numeric = bindings.numeric() if bindings is not None else {}
    return [call_compiled(fn, (t, *s), numeric)[0] for t, s in zip(traj.times, traj.states)]


def drift(traj: Trajectory, I, bindings: Bindings | None = None) -> Drift:
    """max |I(t) − I(t₀)| over the grid, plus the relative value when I(t₀) ≠ 0."""
    vals = evaluate_along(traj, I, bindings)
    i0 = vals[0]
    m = max(abs(v - i0) for v in vals)
    rel = m / abs(i0) if i0 != 0 else None
    return Drift(m, rel, i0, tuple(vals))
