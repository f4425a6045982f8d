import json

import pytest

from liesym import catalog
from liesym.catalog import CatalogError, ModelError, model_from_json
from liesym.catalog.harness import run_harness, x2_noether_check
from liesym.catalog.scenarios import derived_integral, integral_expr, run_drift
from liesym.expr import Verdict, is_zero, parse
from liesym.symmetry import classify, table_verify


def test_load_basic_metrics():
    g = catalog.load("metric.euclid2.cartesian").payload
    assert [[str(c) for c in r] for r in g.components] == [["1", "0"], ["0", "1"]]
    m = catalog.load("metric.minisuperspace.sc01a").payload
    assert m.coords == ("a", "b")
    assert m.components[0][1] is parse("2*b") and m.components[1][1] is parse("2*a")


def test_unknown_id():
    with pytest.raises(CatalogError, match="unknown catalog id"):
        catalog.load("metric.nowhere")


def test_entries_are_read_only():
    e = catalog.load("vector.e3.spckv.mu")
    with pytest.raises(Exception):
        e.id = "x"
    with pytest.raises(TypeError):
        e.data["class"] = "KV"


def test_enumerate_counts():
    assert len(catalog.enumerate("table-row", table=1)) == 8
    assert len(catalog.enumerate("table-row", table=2)) == 7
    assert len(catalog.enumerate("metric")) >= 9
    ids = [e.id for e in catalog.enumerate()]
    assert ids == sorted(ids) and len(ids) == len(set(ids))


def test_enumerate_bad_kind():
    with pytest.raises(CatalogError):
        catalog.enumerate("widget")


def test_every_payload_normalizes_and_has_anchor():
    for e in catalog.enumerate():
        assert e.anchor, e.id


@pytest.mark.parametrize("entry", catalog.enumerate("vector"), ids=lambda e: e.id)
def test_vector_classifies_as_claimed(entry):
    g = catalog.load(entry.get("metric")).payload
    for b in entry.bindings():
        assert classify(g, entry.payload, bindings=b).cls == entry.get("class")


@pytest.mark.parametrize("entry", catalog.enumerate("table-row"), ids=lambda e: e.id)
def test_table_row_verifies(entry):
    rep = table_verify(entry.payload)
    expected = Verdict.SKIPPED if entry.payload.skip_reason else Verdict.ZERO
    assert rep.verdict is expected


def test_flagged_row_is_the_undefined_symbol_row():
    skipped = [e.id for e in catalog.enumerate("table-row") if e.payload.skip_reason]
    assert skipped == ["table2.row5"]


@pytest.mark.parametrize("iid", [e.id for e in catalog.enumerate("integral")
                                 if not e.get("combination") and e.get("generator")])
def test_stored_integrals_match_noether_formula(iid):
    stored = integral_expr(iid)
    L = catalog.load(catalog.load(iid).get("lagrangian")).payload
    derived = derived_integral(iid)
    e = catalog.load(iid)
    dom = dict(L.metric.chart.domain)
    b = e.bindings()[0]
    assert is_zero(stored - derived, domain=dom, bindings=b).verdict is Verdict.ZERO


def test_drift_scenario():
    rep = run_drift("scenario.drift.oscillator", span=1.0)
    assert rep["pass"]


def test_catalog_model_and_export_roundtrip(tmp_path):
    doc = catalog.export("metric.minisuperspace.sc01a")["model"]
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    m = catalog.resolve_model(str(path))
    assert set(m.vector_fields) >= {"h", "x2", "x3"}
    assert classify(m.metric, m.vector("x2")).cls == "properCKV"


def test_aliases_resolve():
    assert catalog.resolve_metric_id("schwarzschild") == "metric.schwarzschild.exterior"
    with pytest.raises(ModelError):
        catalog.resolve_model("no-such-thing")


@pytest.mark.parametrize("doc, msg", [
    ([], "JSON object"),
    ({"chart": ["x"]}, "lacks 'metric'"),
    ({"chart": ["x"], "metric": [["1", "0"]]}, "1x1"),
    ({"chart": ["x"], "metric": [["1 +"]]}, "metric\\[0\\]\\[0\\]"),
    ({"chart": ["x"], "metric": [["1"]], "colour": 1}, "unknown model keys"),
    ({"chart": ["x"], "metric": [["1"]], "constants": {"x": [0, 1]}}, "clash"),
    ({"chart": ["x"], "metric": [["1"]], "opaque": {"f": {"arity": 1, "default": "s + q"}}},
     "unbound"),
    ({"chart": ["x", "y"], "metric": [["1", "x"], ["0", "1"]]}, "metric"),
])
def test_model_schema_errors(doc, msg):
    with pytest.raises(ModelError, match=msg):
        model_from_json(doc)


def test_missing_instantiation_is_model_error():
    m = catalog.resolve_model("euclid2")
    with pytest.raises(ModelError, match="no instantiation"):
        m.bindings_for(parse("x^(-2)*f(y/x)"))


def test_harness_finds_only_the_constant_gauge_exception():
    r = run_harness()
    assert r["kg_failures"] == 0
    assert r["schrodinger_induced_gauge_failures"] == 0
    labels = {p for p, _ in r["failures"]}
    assert labels == {"potential.oscillator.printed|vector.euclid2.translation_x"}


def test_x2_noether_split():
    assert x2_noether_check() == {"base": "NonZero", "conformal": "Zero"}
