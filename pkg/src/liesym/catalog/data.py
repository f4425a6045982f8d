"""The built-in library of metrics, fields, systems, solutions and symmetry tables."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..dynamics.closed_form import ClosedForm
from ..dynamics.pde import SolutionCandidate
from ..expr import Bindings, Instantiation, normalize, parse
from ..geometry import Metric, PDEModel, VectorField, conformal_transform, laplacian
from ..symmetry.conformal import conformal_ricci_potential
from ..symmetry.noether import Lagrangian, conformal_lagrangian
from ..symmetry.tables import TableRow
from .entry import CatalogEntry, default_instantiations, opaque_arities, to_bindings

CONSTANT_RANGE = (0.5, 2.0)


@dataclass(frozen=True, eq=False)
class SolutionFamily:
    """A closed-form solution depending on a parameter that enters exponents and orders.

    ``template`` is expression text with ``{p}`` placeholders for the
    parameter (and ``{p2}`` for p/2, ``{p4}`` for p/4); ``at(value)`` returns
    the concrete :class:`SolutionCandidate`.
    """

    template: str
    coords: tuple
    constants: Mapping = field(default_factory=dict)
    domain: Mapping = field(default_factory=dict)
    positive: tuple = ()
    values: tuple = (0, 1, 2)
    name: str = ""

    def text(self, p) -> str:
        from fractions import Fraction

        q = Fraction(p)
        fmt = {"p": f"({q})", "p2": f"({q / 2})", "p4": f"({q / 4})", "mp2": f"({-q / 2})"}
        return self.template.format(**fmt)

    def at(self, p) -> SolutionCandidate:
        return SolutionCandidate(parse(self.text(p)), self.coords, dict(self.constants),
                                 dict(self.domain), tuple(parse(x) for x in self.positive),
                                 ("besselI", "besselK"), f"{self.name}[{p}]")


class _Builder:
    def __init__(self):
        self.entries: dict = {}
        self.aliases: dict = {}

    def add(self, entry: CatalogEntry) -> CatalogEntry:
        if entry.id in self.entries:
            raise ValueError(f"duplicate catalog id {entry.id}")
        self.entries[entry.id] = entry
        return entry

    # ------------------------------------------------------------ helpers
    def metric(self, id, coords, rows, singular=(), domain=None, anchor="", notes=(),
               alias=None, **data):
        g = Metric.from_rows(coords, [[parse(str(c)) for c in r] for r in rows], singular,
                             domain or {}, name=id)
        return self._metric_entry(id, g, anchor, notes, alias, data)

    def _metric_entry(self, id, g, anchor, notes, alias, data):
        insts = default_instantiations(opaque_arities(*(c for r in g.components for c in r)))
        e = self.add(CatalogEntry(id, "metric", g, anchor, g.chart.domain, insts, data, notes))
        if alias:
            self.aliases[alias] = id
        return e

    def vector(self, id, metric_id, comps, cls, anchor="", notes=(), **data):
        g = self.entries[metric_id].payload
        xi = VectorField.on(g.chart, {k: parse(str(v)) for k, v in comps.items()})
        insts = default_instantiations(opaque_arities(*xi.components))
        anchor = anchor or f"{cls} {xi} of {g.name}"
        return self.add(CatalogEntry(id, "vector", xi, anchor, g.chart.domain, insts,
                                     {"metric": metric_id, "class": cls, **data}, notes))

    def potential(self, id, metric_id, text, anchor="", notes=(), **data):
        V = parse(text)
        g = self.entries[metric_id].payload
        insts = default_instantiations(opaque_arities(V))
        return self.add(CatalogEntry(id, "potential", V, anchor, g.chart.domain, insts,
                                     {"metric": metric_id, **data}, notes))

    def lagrangian(self, id, metric_id, V, time="t", anchor="", notes=(), **data):
        g = self.entries[metric_id].payload
        L = Lagrangian(g, parse(V) if isinstance(V, str) else V, time, id)
        return self._lagrangian_entry(id, L, metric_id, anchor, notes, data)

    def _lagrangian_entry(self, id, L, metric_id, anchor, notes, data):
        insts = default_instantiations(opaque_arities(L.expr))
        return self.add(CatalogEntry(id, "lagrangian", L, anchor, L.metric.chart.domain, insts,
                                     {"metric": metric_id, **data}, notes))

    def integral(self, id, lagrangian_id, text, anchor="", notes=(), **data):
        L = self.entries[lagrangian_id].payload
        I = normalize(parse(text))
        insts = default_instantiations(opaque_arities(I, L.expr))
        return self.add(CatalogEntry(id, "integral", I, anchor, L.metric.chart.domain, insts,
                                     {"lagrangian": lagrangian_id, **data}, notes))

    def pde(self, id, model: PDEModel, metric_id, anchor="", notes=(), **data):
        insts = default_instantiations(opaque_arities(
            *(c for r in model.second for c in r), *model.first, model.zeroth))
        return self.add(CatalogEntry(id, "pde", model, anchor, model.chart.domain, insts,
                                     {"metric": metric_id, **data}, notes))


# ------------------------------------------------------------------ metrics


def _metrics(b: _Builder):
    b.metric("metric.euclid2.cartesian", ("x", "y"), [[1, 0], [0, 1]], alias="euclid2",
             anchor="flat plane, Cartesian", flat=True)
    b.metric("metric.euclid2.polar", ("r", "th"), [[1, 0], [0, "r^2"]], singular=("r",),
             alias="euclid2-polar", anchor="flat plane, polar", flat=True)
    b.metric("metric.euclid3.cartesian", ("x", "y", "z"), [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
             alias="euclid3", anchor="flat space, Cartesian", flat=True)
    b.metric("metric.euclid3.spherical", ("r", "th", "ph"),
             [[1, 0, 0], [0, "r^2", 0], [0, 0, "r^2*sin(th)^2"]], singular=("r", "sin(th)"),
             alias="euclid3-spherical", anchor="flat space, spherical", flat=True)
    b.metric("metric.null2", ("w", "z"), [[0, 1], [1, 0]], alias="null2",
             anchor="two dimensional null line element 2 dw dz", flat=True)
    b.metric("metric.s3.stereographic", ("x", "y", "z"),
             [["4/(1+x^2+y^2+z^2)^2", 0, 0], [0, "4/(1+x^2+y^2+z^2)^2", 0],
              [0, 0, "4/(1+x^2+y^2+z^2)^2"]],
             domain={"x": (-1.0, 1.0), "y": (-1.0, 1.0), "z": (-1.0, 1.0)}, alias="s3",
             anchor="unit three-sphere, stereographic chart", scalar_curvature="6")
    b.metric("metric.s3.hyperspherical", ("chi", "th", "ph"),
             [[1, 0, 0], [0, "sin(chi)^2", 0], [0, 0, "sin(chi)^2*sin(th)^2"]],
             singular=("sin(chi)", "sin(th)"), alias="s3-hyperspherical",
             anchor="unit three-sphere, hyperspherical chart", scalar_curvature="6")
    b.metric("metric.schwarzschild.general", ("t", "tau", "th", "ph"),
             [["-a(tau)^2", 0, 0, 0], [0, 1, 0, 0], [0, 0, "b(tau)^2", 0],
              [0, 0, 0, "b(tau)^2*sin(th)^2"]], singular=("sin(th)",),
             alias="static-spherical", anchor="static spherically symmetric ansatz")
    b.metric("metric.schwarzschild.exterior", ("t", "R", "th", "ph"),
             [["-(1-2*m/R)", 0, 0, 0], [0, "1/(1-2*m/R)", 0, 0], [0, 0, "R^2", 0],
              [0, 0, 0, "R^2*sin(th)^2"]], singular=("R-2*m", "sin(th)"),
             domain={"R": (3.0, 6.0), "m": (0.5, 1.0)}, alias="schwarzschild",
             anchor="exterior Schwarzschild line element", vacuum=True)
    b.metric("metric.minisuperspace.sc01a", ("a", "b"), [[0, "2*b"], ["2*b", "2*a"]],
             singular=("b",), alias="minisuperspace", potential="2*a",
             anchor="two dimensional kinetic metric 2a db^2 + 4b da db")
    b.metric("metric.minisuperspace.kinetic", ("a", "b"), [[0, "4*b"], ["4*b", "4*a"]],
             singular=("b",), alias="minisuperspace-kinetic", potential="2*a",
             lagrangian_potential="-2*a", time="tau",
             anchor="kinetic metric 4a db^2 + 8b da db read off the field Lagrangian",
             notes=("twice the metric with 2a db^2 + 4b da db; the Laplacian of this one "
                    "reproduces the printed Klein-Gordon operator with V = 2a",))
    kin = b.entries["metric.minisuperspace.kinetic"].payload
    for id, N, alias, anchor in (
            ("metric.minisuperspace.conformal", "g(b)*sqrt(a)", "minisuperspace-conformal",
             "conformal family N^2 (4a db^2 + 8b da db), N = g(b) sqrt(a)"),
            ("metric.minisuperspace.conformal_g0", "g0*sqrt(a)", "minisuperspace-g0",
             "conformal family with g(b) = g0 constant"),
            ("metric.minisuperspace.conformal_x3", "f(a^2*b)*sqrt(a)", "minisuperspace-x3",
             "conformal metric making X3 a Killing vector, N = f(a^2 b) sqrt(a)")):
        g = conformal_transform(kin, parse(N), name=id)
        b._metric_entry(id, g, anchor, (), alias, {"conformal_factor": N,
                                                   "base": "metric.minisuperspace.kinetic"})


# ------------------------------------------------------------------ vectors


def _vectors(b: _Builder):
    e2 = "metric.euclid2.cartesian"
    b.vector("vector.euclid2.translation_x", e2, {"x": 1}, "KV", gradient=True, potential="x")
    b.vector("vector.euclid2.translation_y", e2, {"y": 1}, "KV", gradient=True, potential="y")
    b.vector("vector.euclid2.rotation", e2, {"x": "y", "y": "-x"}, "KV", gradient=False)
    b.vector("vector.euclid2.dilation", e2, {"x": "x", "y": "y"}, "HV", gradient=True)
    p2 = "metric.euclid2.polar"
    b.vector("vector.euclid2.polar.rotation", p2, {"th": 1}, "KV")
    b.vector("vector.euclid2.polar.dilation", p2, {"r": "r"}, "HV")
    e3 = "metric.euclid3.cartesian"
    b.vector("vector.euclid3.translation_x", e3, {"x": 1}, "KV")
    b.vector("vector.euclid3.rotation_xy", e3, {"x": "y", "y": "-x"}, "KV")
    b.vector("vector.euclid3.dilation", e3, {"x": "x", "y": "y", "z": "z"}, "HV")
    b.vector("vector.e3.spckv.mu", e3, {"x": "(x^2 - y^2 - z^2)/2", "y": "x*y", "z": "x*z"},
             "spCKV", psi="x", anchor="special conformal Killing vector K_C along x",
             notes=("printed components read as x^mu x^nu along nu and x^mu x^sigma along sigma",))
    b.vector("vector.e3.spckv.nu", e3, {"x": "x*y", "y": "(y^2 - x^2 - z^2)/2", "z": "y*z"},
             "spCKV", psi="y")
    b.vector("vector.e3.spckv.sigma", e3, {"x": "x*z", "y": "y*z", "z": "(z^2 - x^2 - y^2)/2"},
             "spCKV", psi="z")
    n2 = "metric.null2"
    b.vector("vector.null2.boost", n2, {"w": "w", "z": "-z"}, "KV")
    b.vector("vector.null2.dilation", n2, {"w": "w", "z": "z"}, "HV")
    b.vector("vector.null2.special", n2, {"w": "w^2"}, "spCKV")
    b.vector("vector.null2.proper", n2, {"w": "w^3", "z": "z^2"}, "properCKV")
    s3 = "metric.s3.stereographic"
    rho = "(1 - x^2 - y^2 - z^2)/2"
    for name, comps in (("rotation_xy", {"x": "y", "y": "-x"}),
                        ("rotation_xz", {"x": "z", "z": "-x"}),
                        ("rotation_yz", {"y": "z", "z": "-y"}),
                        ("shift_x", {"x": f"{rho} + x^2", "y": "x*y", "z": "x*z"}),
                        ("shift_y", {"x": "x*y", "y": f"{rho} + y^2", "z": "y*z"}),
                        ("shift_z", {"x": "x*z", "y": "y*z", "z": f"{rho} + z^2"})):
        b.vector(f"vector.s3.kv.{name}", s3, comps, "KV",
                 anchor="Killing vectors of the three-sphere")
    b.vector("vector.s3.ckv.translation_x", s3, {"x": 1}, "properCKV",
             anchor="flat translation, a proper conformal Killing vector of the sphere")
    b.vector("vector.s3.ckv.dilation", s3, {"x": "x", "y": "y", "z": "z"}, "properCKV")
    m = "metric.minisuperspace.sc01a"
    b.vector("vector.minisuperspace.h", m, {"a": "-2*a", "b": "2*b"}, "HV", gradient=False,
             anchor="non-gradient homothetic vector H")
    b.vector("vector.minisuperspace.x2", m, {"a": "1/(a*b)"}, "properCKV",
             anchor="proper conformal Killing vector X2")
    b.vector("vector.minisuperspace.x3", m, {"a": "a/(2*b)", "b": "-1"}, "properCKV",
             anchor="proper conformal Killing vector X3")
    k = "metric.minisuperspace.kinetic"
    b.vector("vector.minisuperspace.kinetic.h", k, {"a": "-2*a", "b": "2*b"}, "HV", gradient=False)
    b.vector("vector.minisuperspace.kinetic.x2", k, {"a": "1/(a*b)"}, "properCKV")
    b.vector("vector.minisuperspace.kinetic.x3", k, {"a": "a/(2*b)", "b": "-1"}, "properCKV")
    b.vector("vector.minisuperspace.g0.x2", "metric.minisuperspace.conformal_g0",
             {"a": "1/(a*b)"}, "KV", anchor="X2 becomes a Killing vector of N^2 g, N = g0 sqrt(a)")
    b.vector("vector.minisuperspace.conformal.x2", "metric.minisuperspace.conformal",
             {"a": "1/(a*b)"}, "KV")
    b.vector("vector.minisuperspace.x3metric.x3", "metric.minisuperspace.conformal_x3",
             {"a": "a/(2*b)", "b": "-1"}, "KV")
    sw = "metric.schwarzschild.exterior"
    b.vector("vector.schwarzschild.time", sw, {"t": 1}, "KV")
    b.vector("vector.schwarzschild.azimuth", sw, {"ph": 1}, "KV")


# --------------------------------------------------------------- potentials


def _potentials(b: _Builder):
    b.potential("potential.e3.spckv", "metric.euclid3.cartesian",
                "y^(-2)*F(z/y, (x^2 + y^2 + z^2)/y)", vector="vector.e3.spckv.mu",
                anchor="potential invariant under the special conformal vector K_C",
                notes=("sigma = y and nu = z; any relabelling of the pair works the same way",))
    b.potential("potential.minisuperspace.kg", "metric.minisuperspace.sc01a", "2*a",
                anchor="Klein-Gordon potential V = 2a on the minisuperspace")
    b.potential("potential.oscillator.printed", "metric.euclid2.cartesian", "-mu^2*x - F(y)",
                reading="printed", anchor="decomposable-space Lagrangian, linear term as printed")
    b.potential("potential.oscillator", "metric.euclid2.cartesian", "-mu^2*x^2/2 - F(y)",
                reading="oscillator", anchor="decomposable-space Lagrangian, oscillator reading")
    b.potential("potential.ermakov", "metric.euclid2.polar", "-mu^2*r^2/2 + F(th)/r^2",
                anchor="Ermakov potential in two dimensions")
    s3 = b.entries["metric.s3.stereographic"].payload
    V = conformal_ricci_potential(s3)
    b.add(CatalogEntry("potential.s3.yamabe", "potential", V, "conformal Laplace term on the sphere",
                       s3.chart.domain, (), {"metric": "metric.s3.stereographic",
                                             "closed_form": "-3/4"}))


# ---------------------------------------------------------------- Lagrangians


def _lagrangians(b: _Builder):
    b.lagrangian("lagrangian.free.euclid2", "metric.euclid2.cartesian", "0",
                 anchor="free particle, kinetic metric of the plane")
    b.lagrangian("lagrangian.free.s3", "metric.s3.stereographic", "0",
                 anchor="geodesic Lagrangian of the three-sphere")
    b.lagrangian("lagrangian.kepler.euclid2", "metric.euclid2.polar", "-1/r",
                 anchor="point Lagrangian 1/2 g x'x' - V with a central potential")
    b.lagrangian("lagrangian.oscillator.printed", "metric.euclid2.cartesian", "-mu^2*x - F(y)",
                 reading="printed", anchor="decomposable-space Lagrangian as printed (linear term)")
    b.lagrangian("lagrangian.oscillator", "metric.euclid2.cartesian", "-mu^2*x^2/2 - F(y)",
                 reading="oscillator",
                 anchor="decomposable-space Lagrangian, oscillator reading 1/2 mu^2 x^2")
    b.lagrangian("lagrangian.ermakov", "metric.euclid2.polar", "-mu^2*r^2/2 + F(th)/r^2",
                 anchor="Ermakov Lagrangian, two dimensional instance (h_AB = 1)")
    b.lagrangian("lagrangian.minisuperspace", "metric.minisuperspace.kinetic", "-2*a", time="tau",
                 anchor="field Lagrangian 2ab'^2 + 4ba'b' + 2a")
    base = b.entries["lagrangian.minisuperspace"].payload
    for id, N, mid, anchor in (
            ("lagrangian.minisuperspace.conformal", "g(b)*sqrt(a)",
             "metric.minisuperspace.conformal", "conformally related Lagrangian family"),
            ("lagrangian.minisuperspace.g0", "g0*sqrt(a)", "metric.minisuperspace.conformal_g0",
             "conformal Lagrangian with constant g0")):
        L = conformal_lagrangian(Lagrangian(base.metric, base.potential, "r", base.name),
                                 parse(N), name=id)
        b._lagrangian_entry(id, L, mid, anchor, (), {"conformal_factor": N,
                                                    "base": "lagrangian.minisuperspace"})


# ----------------------------------------------------------------- integrals


def _integrals(b: _Builder):
    osc = "lagrangian.oscillator"
    b.integral("integral.oscillator.energy", osc, "x_dot^2/2 + y_dot^2/2 - mu^2*x^2/2 - F(y)",
               generator={"xi": "1", "eta": {}}, gauge="0", sign=1,
               anchor="energy, the integral of d_t")
    b.integral("integral.oscillator.i_plus", osc, "exp(mu*t)*x_dot - mu*exp(mu*t)*x",
               generator={"xi": "0", "eta": {"x": "exp(mu*t)"}}, gauge="mu*exp(mu*t)*x", sign=-1,
               anchor="Noether integral of exp(mu t) d_x",
               notes=("stored as displayed; it is minus the generic Noether formula",))
    b.integral("integral.oscillator.i_minus", osc, "exp(-mu*t)*x_dot + mu*exp(-mu*t)*x",
               generator={"xi": "0", "eta": {"x": "exp(-mu*t)"}}, gauge="-mu*exp(-mu*t)*x",
               sign=-1, anchor="Noether integral of exp(-mu t) d_x",
               notes=("stored as displayed; it is minus the generic Noether formula",))
    b.integral("integral.oscillator.i0", osc, "x_dot^2 - mu^2*x^2",
               combination="i_plus*i_minus",
               parts={"i_plus": "integral.oscillator.i_plus", "i_minus": "integral.oscillator.i_minus"},
               time_free=True, anchor="time-free product of the two exponential integrals")
    erm = "lagrangian.ermakov"
    b.integral("integral.ermakov.h", erm, "r_dot^2/2 + r^2*th_dot^2/2 - mu^2*r^2/2 + F(th)/r^2",
               generator={"xi": "1", "eta": {}}, gauge="0", sign=1, anchor="Hamiltonian")
    b.integral("integral.ermakov.i_plus", erm,
               "h/mu*exp(2*mu*t) - exp(2*mu*t)*r*r_dot + mu*exp(2*mu*t)*r^2",
               generator={"xi": "exp(2*mu*t)/mu", "eta": {"r": "exp(2*mu*t)*r"}},
               gauge="mu*exp(2*mu*t)*r^2", sign=1, substitute={"h": "integral.ermakov.h"},
               anchor="sl(2,R) integral I+",
               notes=("the printed exp(2 mu s) in the second term is read as exp(2 mu t)",))
    b.integral("integral.ermakov.i_minus", erm,
               "h/mu*exp(-2*mu*t) + exp(-2*mu*t)*r*r_dot + mu*exp(-2*mu*t)*r^2",
               generator={"xi": "exp(-2*mu*t)/mu", "eta": {"r": "-exp(-2*mu*t)*r"}},
               gauge="mu*exp(-2*mu*t)*r^2", sign=1, substitute={"h": "integral.ermakov.h"},
               anchor="sl(2,R) integral I-")
    b.integral("integral.ermakov.phi0", erm, "r^4*th_dot^2 + 2*F(th)",
               combination="i_plus*i_minus - h^2/mu^2",
               printed_combination="h^2 - i_plus*i_minus",
               parts={"h": "integral.ermakov.h", "i_plus": "integral.ermakov.i_plus",
                      "i_minus": "integral.ermakov.i_minus"},
               time_free=True, anchor="Ermakov invariant",
               notes=("h^2 - I+ I- equals -mu^2 (r^4 th'^2 + 2F); the invariant itself is "
                      "I+ I- - h^2/mu^2",))
    b.integral("integral.minisuperspace.h", "lagrangian.minisuperspace",
               "2*a*b_dot^2 + 4*b*a_dot*b_dot - 2*a", generator={"xi": "1", "eta": {}},
               gauge="0", sign=1, anchor="minisuperspace Hamiltonian")
    b.integral("integral.minisuperspace.g0.h", "lagrangian.minisuperspace.g0",
               "2*g0^2*a^2*b_dot^2 + 4*g0^2*a*b*a_dot*b_dot - 2/g0^2",
               generator={"xi": "1", "eta": {}}, gauge="0", sign=1,
               anchor="Hamiltonian of the constant-g0 conformal Lagrangian")


# ------------------------------------------------------------------- PDEs


def _pdes(b: _Builder):
    e2 = b.entries["metric.euclid2.cartesian"].payload
    b.pde("pde.schrodinger.euclid2", laplacian(e2).with_potential(parse("V(x, y)"), "t", -1),
          "metric.euclid2.cartesian", anchor="Schroedinger (diffusion) equation Lap u - u_t = V u")
    b.pde("pde.klein_gordon.euclid2", laplacian(e2).with_potential(parse("V(x, y)")),
          "metric.euclid2.cartesian", anchor="Klein-Gordon equation Lap u = V u")
    b.pde("pde.oscillator.kg", PDEModel(e2.chart, e2.inverse, (parse("0"), parse("0")),
                                        parse("-mu^2*x^2 - F(y)")),
          "metric.euclid2.cartesian", anchor="Klein-Gordon equation of the decomposable space",
          notes=("zeroth-order term as printed: -mu^2 x^2 u - F u",))
    p2 = b.entries["metric.euclid2.polar"].payload
    b.pde("pde.ermakov.kg", PDEModel(p2.chart, p2.inverse, (parse("1/r"), parse("0")),
                                     parse("mu^2*r^2 + 2*F(th)/r^2")),
          "metric.euclid2.polar", anchor="Klein-Gordon equation of the Ermakov system",
          notes=("the printed equation omits u on mu^2 r^2 + 2F/r^2; read as multiplying u",))
    kin = b.entries["metric.minisuperspace.kinetic"].payload
    b.pde("pde.minisuperspace.kg", laplacian(kin).with_potential(parse("2*a")),
          "metric.minisuperspace.kinetic",
          anchor="Klein-Gordon equation -a u_aa/(4b^2) + u_ab/(2b) - u_a/(4b^2) - 2a u = 0",
          printed="-a*u__d2_0(a, b)/(4*b^2) + u__d1_1(a, b)/(2*b) - u__d1_0(a, b)/(4*b^2) - 2*a*u(a, b)")
    s3 = b.entries["metric.s3.stereographic"].payload
    b.pde("pde.s3.conformal_laplace", laplacian(s3).with_potential(conformal_ricci_potential(s3)),
          "metric.s3.stereographic", anchor="conformal Laplace equation on the three-sphere")


# ------------------------------------------------------------- solutions


def _solutions(b: _Builder):
    box = {"a": (0.7, 1.8), "b": (0.7, 1.8)}
    consts = {"c1": CONSTANT_RANGE, "c2": CONSTANT_RANGE}
    f1 = SolutionFamily("a^{p}*(c1*besselI({p}, 2*sqrt(2)*a*b) + c2*besselK({p}, 2*sqrt(2)*a*b))",
                        ("a", "b"), consts, box, name="bessel_h")
    b.add(CatalogEntry("solution.minisuperspace.bessel_h", "solution", f1,
                       "solution invariant under H - 2c u d_u", box, (),
                       {"pde": "pde.minisuperspace.kg", "parameter": "c", "values": (0, 1, 2)}))
    arg = "2*sqrt(2*b*(a^2*b - e))"
    printed = SolutionFamily(
        f"(a^2 - e/b)^{{p4}}*(c1*besselI({{mp2}}, {arg}) + c2*besselK({{p2}}, {arg}))",
        ("a", "b"), {**consts, "e": (0.5, 1.0)}, box, ("a^2*b - e",), name="bessel_hx2")
    same = SolutionFamily(
        f"(a^2 - e/b)^{{p4}}*(c1*besselI({{p2}}, {arg}) + c2*besselK({{p2}}, {arg}))",
        ("a", "b"), {**consts, "e": (0.5, 1.0)}, box, ("a^2*b - e",), name="bessel_hx2_same")
    b.add(CatalogEntry("solution.minisuperspace.bessel_hx2", "solution", printed,
                       "solution invariant under H + e X2 - c u d_u", box, (),
                       {"pde": "pde.minisuperspace.kg", "parameter": "c", "values": (0, 1, 2),
                        "conventions": {"printed": printed, "equal_orders": same}},
                       ("orders -c/2 on I and c/2 on K as printed; the variant with c/2 on both "
                        "is kept under conventions.equal_orders",)))
    fam = ClosedForm("r", {"b": parse("b1*r + b2"),
                           "a": parse("sqrt((V0*r + 2*a1*b1)/(2*b1*(b1*r + b2)))")},
                     {"g0": parse("(V0/2)^(-1/4)")}, parse("0"),
                     {"b1": CONSTANT_RANGE, "b2": CONSTANT_RANGE, "a1": CONSTANT_RANGE,
                      "V0": CONSTANT_RANGE, "r": CONSTANT_RANGE})
    b.add(CatalogEntry("solution.minisuperspace.closed_form", "solution", fam,
                       "closed-form a(r), b(r) of the constant-g0 conformal Lagrangian",
                       fam.domain, (),
                       {"lagrangian": "lagrangian.minisuperspace.g0",
                        "printed_identification": {"g0": "V0^(-1/4)"},
                        "printed_constraint": "a^2*b_dot^2 + 2*b^2*a_dot*b_dot - V0",
                        "printed_a_equation": "a_ddot + a_dot^2/a^2 + 2*a_dot*b_dot/b",
                        "reconstruction": {"target": "metric.schwarzschild.exterior",
                                           "V0": "2*b1^2", "a1": "-2*m + b2",
                                           "g0": "b1^(-1/2)", "r": "(R - b2)/b1"}},
                       ("the zero-energy constraint of the Lagrangian fixes g0^(-4) = V0/2",)))


# ---------------------------------------------------------------- tables


def _row(b: _Builder, table, n, metric_id, gen, V, anchor="", notes=(), skip=None, **data):
    g = b.entries[metric_id].payload
    xi = VectorField.on(g.chart, {k: parse(str(v)) for k, v in gen.items()}) if gen else None
    Ve = parse(V) if V else None
    insts = default_instantiations(opaque_arities(Ve)) if Ve is not None else ()
    anchor = anchor or (f"symmetry table {table}, row {n}: generator {xi}" if xi is not None
                        else f"symmetry table {table}, row {n}")
    row = TableRow(f"table{table}.row{n}", table, f"row{n}", g, xi, Ve,
                   tuple(to_bindings(s) for s in insts), {}, skip, tuple(notes), anchor)
    return b.add(CatalogEntry(row.id, "table-row", row, anchor, g.chart.domain, insts,
                              {"metric": metric_id, "table": table, "row": n, **data}, notes))


def _tables(b: _Builder):
    e2 = "metric.euclid2.cartesian"
    r = "sqrt(x^2 + y^2)"
    _row(b, 1, 1, e2, {"x": 1}, "f(y)", generator_text="d_x")
    _row(b, 1, 2, e2, {"y": 1}, "f(x)", generator_text="d_y")
    _row(b, 1, 3, e2, {"x": "y", "y": "-x"}, f"f({r})", generator_text="y d_x - x d_y")
    _row(b, 1, 4, e2, {"x": "x", "y": "y"}, "x^(-2)*f(y/x)", generator_text="x d_x + y d_y")
    _row(b, 1, 5, e2, {"x": 1, "y": "b"}, "f(y - b*x)", generator_text="d_x + b d_y")
    _row(b, 1, 6, e2, {"x": "a + y", "y": "b - x"}, "f((x^2 + y^2)/2 + a*y - b*x)",
         generator_text="(a + y) d_x + (b - x) d_y")
    _row(b, 1, 7, e2, {"x": "x + a*y", "y": "y - a*x"}, f"{r}^(-2)*f(arctan(x/y) - a*ln({r}))",
         generator_text="(x + a y) d_x + (y - a x) d_y",
         printed_potential=f"{r}^(-2)*f(arctan(y/x) - a*ln({r}))",
         notes=("theta is the angle with d_theta = (y dx - x dy)/r^2, i.e. arctan(x/y); "
                "with arctan(y/x) the row fails",))
    _row(b, 1, 8, e2, {"x": "a + x", "y": "b + y"}, "f((b + y)/(a + x))*(a + x)^(-2)",
         generator_text="(a + x) d_x + (b + y) d_y",
         printed_potential="f((b + x)/(a + x))*(a + x)^(-2)",
         notes=("the invariant is (b + y)/(a + x); the printed (b + x)/(a + x) is not invariant",))

    e3 = "metric.euclid3.cartesian"
    _row(b, 2, 1, e3, {"x": "a", "y": "b", "z": "c"}, "f(y - b/a*x, z - c/a*x)",
         generator_text="a d_mu + b d_nu + c d_sigma")
    _row(b, 2, 2, e3, {"x": "a + c*y", "y": "b - c*x"}, "f(c/2*(x^2 + y^2) - b*x + a*y, z)",
         generator_text="a d_mu + b d_nu + c (x_nu d_mu - x_mu d_nu)",
         printed_potential="f(c/2*sqrt(x^2 + y^2) - b*x + a*y, z)", interpretation=True,
         notes=("r_(mu nu) must be read as x_mu^2 + x_nu^2 here; the square-root reading "
                "fails",))
    _row(b, 2, 3, e3, {"x": "a + c*z", "y": "b", "z": "-c*x"},
         "f(y - b/c*arctan(c*x/(a + c*z)), (x^2 + z^2)/2 + a/c*z)",
         generator_text="a d_mu + b d_nu + c (x_sigma d_mu - x_mu d_sigma)",
         printed_potential="f(y - 1/c*arctan(c*x/(a + c*z)), sqrt(x^2 + z^2)/2 - a/c*z)",
         interpretation=True,
         notes=("first argument needs the factor b/c and the second +a/c x_sigma with "
                "r_(mu sigma) = x_mu^2 + x_sigma^2; absolute values dropped on the positive box",))
    _row(b, 2, 4, e3, {"x": "a + b*y + c*z", "y": "-b*x", "z": "-c*x"},
         "f(x^2 + y^2*(1 - c^2/b^2) + (2*a/b + 2*c/b*z)*y, z - c/b*y)",
         generator_text="a d_mu + b (x_nu d_mu - x_mu d_nu) + c (x_sigma d_mu - x_mu d_sigma)")
    _row(b, 2, 5, e3, None, None, skip="undefined symbol M1",
         generator_text="so(3) linear combination",
         printed_potential="F(R, b*tan(theta)*sin(phi) + c*cos(phi) - a*M1)",
         notes=("the symbol M1 is never defined, so the row cannot be checked",))
    ryz = "sqrt(y^2 + z^2)"
    _row(b, 2, 6, e3, {"x": "a + c*x", "y": "-b*z + c*y", "z": "b*y + c*z"},
         f"{ryz}^(-2)*f(arctan(z/y) - b/c*ln({ryz}), (a + c*x)/(c*{ryz}))",
         generator_text="a d_mu + b d_theta(nu sigma) + c R d_R",
         printed_generator="a d_mu + b theta d_theta + c R d_R", interpretation=True,
         notes=("r_(nu sigma) = sqrt(y^2 + z^2), theta_(nu sigma) = arctan(z/y); the "
                "generator term b theta d_theta is read as the rotation b d_theta",))
    _row(b, 2, 7, e3, {"x": "a + l*x", "y": "b + l*y", "z": "c + l*z"},
         "(a + l*x)^(-2)*f((b + l*y)/(l*(a + l*x)), (c + l*z)/(l*(a + l*x)))",
         generator_text="a d_mu + b d_nu + c d_sigma + l R d_R")


# -------------------------------------------------------------- scenarios


def _scenarios(b: _Builder):
    def scen(id, anchor, **data):
        b.add(CatalogEntry(id, "scenario", data, anchor, {}, (), data))

    scen("scenario.drift.oscillator", "oscillator integrals along an RK4 trajectory",
         type="drift", lagrangian="lagrangian.oscillator", params={"mu": 1.0},
         functions={"F": (("s",), "cos(s)")}, initial=(1.0, 0.3, 0.0, 0.0),
         integrals=("integral.oscillator.i_plus", "integral.oscillator.i_minus",
                    "integral.oscillator.i0", "integral.oscillator.energy"),
         span=5.0, step=1e-3)
    scen("scenario.drift.ermakov", "Ermakov integrals along an RK4 trajectory",
         type="drift", lagrangian="lagrangian.ermakov", params={"mu": 0.5},
         functions={"F": (("s",), "2 + sin(s)")}, initial=(1.0, 0.5, 0.1, 0.3),
         integrals=("integral.ermakov.h", "integral.ermakov.i_plus", "integral.ermakov.i_minus",
                    "integral.ermakov.phi0"),
         span=5.0, step=1e-3,
         notes=("mu = 1/2 keeps exp(2 mu t) r^2 moderate over the span",))
    scen("scenario.drift.minisuperspace", "minisuperspace Hamiltonian along an RK4 trajectory",
         type="drift", lagrangian="lagrangian.minisuperspace", params={},
         functions={}, initial=(1.0, 2.0, 0.1, 0.5), integrals=("integral.minisuperspace.h",),
         span=5.0, step=1e-3)
    scen("scenario.drift.minisuperspace_g0", "conformal minisuperspace Hamiltonian along RK4",
         type="drift", lagrangian="lagrangian.minisuperspace.g0", params={"g0": 1.0},
         functions={}, initial=(1.0, 1.0, -0.1, 0.5),
         integrals=("integral.minisuperspace.g0.h",), span=5.0, step=1e-3)
    scen("scenario.solution.bessel_h", "Bessel solution family invariant under H",
         type="pde-solution", solution="solution.minisuperspace.bessel_h",
         pde="pde.minisuperspace.kg", values=(0, 1, 2), points=12, tolerance=1e-6)
    scen("scenario.solution.bessel_hx2", "Bessel solution family invariant under H + e X2",
         type="pde-solution", solution="solution.minisuperspace.bessel_hx2",
         pde="pde.minisuperspace.kg", values=(0, 1, 2), points=12, tolerance=1e-6)
    scen("scenario.solution.closed_form", "closed-form trajectory of the conformal Lagrangian",
         type="closed-form", solution="solution.minisuperspace.closed_form",
         lagrangian="lagrangian.minisuperspace.g0")


def build() -> tuple[dict, dict]:
    b = _Builder()
    for part in (_metrics, _vectors, _potentials, _lagrangians, _integrals, _pdes, _solutions,
                 _tables, _scenarios):
        part(b)
    return b.entries, b.aliases


def scenario_bindings(entry: CatalogEntry) -> Bindings:
    funcs = {n: Instantiation(f, body) for n, (f, body) in entry.get("functions", {}).items()}
    return Bindings({}, funcs)


__all__ = ["SolutionFamily", "build", "scenario_bindings", "CONSTANT_RANGE"]
