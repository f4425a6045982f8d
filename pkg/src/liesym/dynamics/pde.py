"""Pointwise residuals of closed-form PDE solutions."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..expr import Bindings, DomainError, Expr, as_expr, compile_exprs, normalize, subs
from ..expr.numeric import call_compiled, prepare
from ..geometry import PDEModel
from .bessel import SPECIAL_FUNCTIONS


@dataclass(frozen=True, eq=False)
class SolutionCandidate:
    """Closed-form u(x) with free constants.

    ``constants`` maps constant names to sampling intervals, ``domain`` maps
    coordinates to intervals and ``positive`` lists expressions that must be
    positive at a sample point (e.g. the argument of a square root).
    """

    expr: Expr
    coords: tuple
    constants: dict = field(default_factory=dict)
    domain: dict = field(default_factory=dict)
    positive: tuple = ()
    special: tuple = ()
    name: str = ""

    def __post_init__(self):
        e = as_expr(self.expr)
        object.__setattr__(self, "expr", e)
        object.__setattr__(self, "positive", tuple(as_expr(p) for p in self.positive))
        allowed = set(self.coords) | set(self.constants)
        extra = e.free_symbols - allowed
        if extra:
            raise ValueError(f"candidate uses undeclared symbols {sorted(extra)}")

    def fix(self, **values) -> "SolutionCandidate":
        """Substitute fixed values for some constants."""
        e = subs(self.expr, {k: as_expr(v) for k, v in values.items()})
        pos = tuple(subs(p, {k: as_expr(v) for k, v in values.items()}) for p in self.positive)
        consts = {k: v for k, v in self.constants.items() if k not in values}
        return SolutionCandidate(e, self.coords, consts, self.domain, pos, self.special, self.name)


def _bindings(bindings: Bindings | None) -> Bindings:
    funcs = dict(SPECIAL_FUNCTIONS)
    if bindings is not None:
        funcs.update(bindings.functions)
        return Bindings(dict(bindings.values), funcs)
    return Bindings({}, funcs)


def sample_points(cand: SolutionCandidate, n: int, seed: int = 0x5EED,
                  default=(0.5, 2.0), max_tries: int = 10000) -> list[dict]:
    """``n`` points in the candidate's box where every ``positive`` expression is > 0."""
    rng = random.Random(seed)
    names = tuple(cand.coords) + tuple(sorted(cand.constants))
    box = {**{c: cand.domain.get(c, default) for c in cand.coords}, **cand.constants}
    guard = compile_exprs(cand.positive, names) if cand.positive else None
    pts = []
    tries = 0
    while len(pts) < n:
        tries += 1
        if tries > max_tries:
            raise DomainError("could not find admissible sample points")
        vals = tuple(lo + (hi - lo) * rng.random() for lo, hi in (box[k] for k in names))
        if guard is not None:
            try:
                if not all(v > 0 for v in call_compiled(guard, vals)):
                    continue
            except DomainError:
                continue
        pts.append(dict(zip(names, vals)))
    return pts


def _symbolic_residuals(model: PDEModel, cand: SolutionCandidate, points, bindings: Bindings):
    u = prepare(cand.expr, bindings)
    r = model.apply(u)
    names = tuple(sorted(set(r.free_symbols) | set(points[0])))
    fn = compile_exprs((r,), names)
    numeric = bindings.numeric()
    return [call_compiled(fn, tuple(p[k] for k in names), numeric)[0] for p in points]


# five-point stencils, exact for polynomials of degree four
_D1 = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))
_D2 = ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12))


def _stencil_residuals(model: PDEModel, cand: SolutionCandidate, points, bindings: Bindings,
                       step: float):
    u = prepare(cand.expr, bindings)
    xs = model.chart.coords
    names = tuple(sorted(set(u.free_symbols) | set(points[0])))
    ufn = compile_exprs((u,), names)
    cnames = tuple(sorted(set(points[0])))
    cexprs = [c for row in model.second for c in row] + list(model.first) + [model.zeroth]
    cfn = compile_exprs(tuple(cexprs), cnames)
    numeric = bindings.numeric()
    n = len(xs)
    out = []
    for p in points:
        hs = {x: step * max(1.0, abs(p[x])) for x in xs}

        def U(shift: Mapping) -> float:
            q = dict(p)
            for x, k in shift.items():
                q[x] = p[x] + k * hs[x]
            return call_compiled(ufn, tuple(q[k] for k in names), numeric)[0]

        c = call_compiled(cfn, tuple(p[k] for k in cnames), numeric)
        A = [c[i * n:(i + 1) * n] for i in range(n)]
        B = c[n * n:n * n + n]
        C = c[-1]
        u0 = U({})
        total = C * u0
        for i, x in enumerate(xs):
            d1 = sum(w * U({x: k}) for k, w in _D1) / hs[x]
            total += B[i] * d1
            for j, y in enumerate(xs):
                if A[i][j] == 0:
                    continue
                if i == j:
                    d2 = sum(w * U({x: k}) for k, w in _D2) / hs[x] ** 2
                else:
                    d2 = sum(wa * wb * U({x: ka, y: kb}) for ka, wa in _D1 for kb, wb in _D1)
                    d2 /= hs[x] * hs[y]
                total += A[i][j] * d2
        out.append(total)
    return out


def pde_residuals(model: PDEModel, cand: SolutionCandidate, points: Sequence[Mapping],
                  bindings: Bindings | None = None, method: str = "symbolic",
                  step: float = 1e-2) -> list[float]:
    """P[u] at each point.

    ``symbolic`` differentiates the candidate exactly (special functions via
    their derivative recurrences); ``stencil`` uses five-point central
    differences with step ``step·max(1, |x|)``.
    """
    if model.time is not None and model.time_coeff != as_expr(0):
        raise ValueError("time-dependent models are not supported by the residual sampler")
    if not points:
        raise ValueError("no sample points")
    b = _bindings(bindings)
    if method == "symbolic":
        return _symbolic_residuals(model, cand, list(points), b)
    if method == "stencil":
        return _stencil_residuals(model, cand, list(points), b, step)
    raise ValueError(f"unknown method {method!r}")


def pde_residual(model: PDEModel, cand: SolutionCandidate, points: Sequence[Mapping],
                 bindings: Bindings | None = None, method: str = "symbolic",
                 step: float = 1e-2) -> float:
    """max |P[u]| over ``points``."""
    return max(abs(v) for v in pde_residuals(model, cand, points, bindings, method, step))


def scale_of(model: PDEModel, cand: SolutionCandidate, points, bindings=None) -> float:
    """max |u| over the points, useful to put a residual in proportion."""
    b = _bindings(bindings)
    u = normalize(prepare(cand.expr, b))
    names = tuple(sorted(set(points[0])))
    fn = compile_exprs((u,), names)
    return max(abs(call_compiled(fn, tuple(p[k] for k in names), b.numeric())[0]) for p in points)
