import csv
import io
import json
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import CLAIM_VALUES, FROZEN_REL_ERR, rel_err
from pyramid_geometry.metrology import (
    CUBIT_IN_METERS,
    Claim,
    Dataset,
    Measurement,
    MetrologyError,
    MissingMeasurementError,
    SchemaError,
    Unit,
    bundled_claims,
    bundled_dataset,
    convert,
    evaluate_claim,
    load_claims,
    load_dataset,
    run_suite,
)

DATASET = bundled_dataset()
CLAIMS = {c.id: c for c in bundled_claims()}


# --- units -----------------------------------------------------------------------


def test_cubit_constant():
    assert CUBIT_IN_METERS == 0.5235
    assert DATASET.cubit_in_meters == 0.5235


@pytest.mark.parametrize(
    "value, src, dst, expected, tol",
    [
        (440, "cubit", "meter", 230.34, 5e-3),
        (0.5235, "meter", "cubit", 1.0, 1e-12),
        (105, "meter", "cubit", 200.57, 5e-3),
        (280, "cubit", "cubit", 280, 0),
    ],
)
def test_convert(value, src, dst, expected, tol):
    assert convert(value, src, dst) == pytest.approx(expected, abs=tol)


@given(st.floats(1e-6, 1e6), st.sampled_from(list(Unit)), st.sampled_from(list(Unit)))
def test_convert_round_trip(v, a, b):
    assert convert(convert(v, a, b), b, a) == pytest.approx(v, rel=1e-12)


def test_convert_rejects_unknown_unit():
    with pytest.raises(ValueError):
        convert(1, "foot", "meter")


# --- dataset ---------------------------------------------------------------------


def test_value_prefers_recorded_unit():
    assert DATASET.value("kheops", "base", "Lehner", "cubit") == 440
    assert DATASET.value("kheops", "base", "Lehner", "meter") == 230.3


def test_value_converts_when_needed():
    ds = Dataset((Measurement("m", "h", 100.0, Unit.CUBIT, "X"),))
    assert ds.value("m", "h", None, "meter") == pytest.approx(52.35)


def test_ambiguous_source_is_reported():
    ds = Dataset((Measurement("m", "h", 1.0, "meter", "A"), Measurement("m", "h", 1.1, "meter", "B")))
    with pytest.raises(MissingMeasurementError, match="ambiguous"):
        ds.value("m", "h", None, "meter")
    assert ds.value("m", "h", "B", "meter") == 1.1


def test_duplicate_measurement_rejected():
    m = Measurement("m", "h", 1.0, "meter", "A")
    with pytest.raises(MetrologyError, match="duplicate"):
        Dataset((m, m))


def test_measurement_must_be_positive():
    with pytest.raises(MetrologyError):
        Measurement("m", "h", 0.0, "meter", "A")


# --- claims ----------------------------------------------------------------------


def test_bundled_registry_matches_oracle_ids():
    assert set(CLAIMS) == set(CLAIM_VALUES) == set(FROZEN_REL_ERR)
    assert len(CLAIMS) == 21


@pytest.mark.parametrize("claim_id", sorted(FROZEN_REL_ERR))
def test_claim_matches_oracle(claim_id):
    res = evaluate_claim(CLAIMS[claim_id], DATASET)
    lhs, rhs = CLAIM_VALUES[claim_id]
    assert res.lhs_value == pytest.approx(lhs, rel=1e-12)
    assert res.rhs_value == pytest.approx(rhs, rel=1e-12)
    assert res.rel_err == pytest.approx(rel_err(claim_id), rel=1e-9)
    assert res.rel_err == pytest.approx(FROZEN_REL_ERR[claim_id], rel=1e-6)
    assert res.passed


def test_montel_read_in_cubits():
    res = evaluate_claim(replace(CLAIMS["C-MONTEL"], unit_system=Unit.CUBIT), DATASET)
    assert res.rel_err == pytest.approx(4.0e-4, abs=5e-6)


def test_spot_values():
    assert evaluate_claim(CLAIMS["C-KHEPHREN-273"], DATASET).rel_err == pytest.approx(5.0e-4, abs=1e-5)
    assert evaluate_claim(CLAIMS["C-MYK-AREA"], DATASET).rel_err == pytest.approx(1.0e-3, abs=5e-5)
    assert evaluate_claim(CLAIMS["C-DUP-CUBIT"], DATASET).rel_err == pytest.approx(1.88e-4, rel=1e-9)


def test_pass_rule_uses_slack():
    c = CLAIMS["C-MONTEL"]
    rel = evaluate_claim(c, DATASET).rel_err
    assert evaluate_claim(replace(c, claimed_rel_err=rel / 1.5 * 1.0001), DATASET).passed
    assert not evaluate_claim(replace(c, claimed_rel_err=rel / 1.5 * 0.9999), DATASET).passed
    tight = evaluate_claim(c, DATASET, slack=1.0)
    assert tight.margin == pytest.approx(c.claimed_rel_err - rel)


@pytest.mark.parametrize("claim_id", ["C-MONTEL", "C-DUP-CUBIT", "C-DUP-METER"])
def test_unit_system_invariance(claim_id):
    meters = DATASET.only("meter")
    a = evaluate_claim(replace(CLAIMS[claim_id], unit_system=Unit.METER), meters)
    b = evaluate_claim(replace(CLAIMS[claim_id], unit_system=Unit.CUBIT), meters)
    assert a.rel_err == pytest.approx(b.rel_err, rel=1e-9, abs=1e-15)


def test_claim_rejects_bad_expression():
    with pytest.raises(MetrologyError):
        Claim("X", "", "1 +", "1", "meter", 1e-3)
    with pytest.raises(MetrologyError):
        Claim("X", "", "1", "1", "meter", 0.0)


# --- suite -----------------------------------------------------------------------


def test_full_suite_passes():
    report = run_suite(list(CLAIMS.values()), DATASET)
    assert report.summary == {"total": 21, "passed": 21, "failed": 0, "errored": 0}
    assert report.all_passed


def test_empty_suite():
    report = run_suite([], DATASET)
    assert report.summary["total"] == 0
    assert report.to_csv().strip() == "id,lhs,rhs,rel_err,claimed,pass"


def test_missing_monument_is_isolated():
    ghost = Claim("C-GHOST", "", "atlantis.base", "1", "meter", 1e-3)
    report = run_suite([ghost, CLAIMS["C-MONTEL"]], DATASET)
    bad, good = report.results
    assert not bad.passed and "atlantis.base" in bad.error and bad.rel_err is None
    assert good.passed
    assert report.summary == {"total": 2, "passed": 1, "failed": 0, "errored": 1}
    with pytest.raises(MissingMeasurementError):
        evaluate_claim(ghost, DATASET)


def test_ambiguous_claim_is_errored_and_binding_resolves():
    ds = Dataset((Measurement("m", "h", 1.0, "meter", "A"), Measurement("m", "h", 1.1, "meter", "B")))
    c = Claim("C-AMB", "", "m.h", "1", "meter", 1e-3)
    (res,) = run_suite([c], ds).results
    assert "ambiguous" in res.error
    bound = evaluate_claim(replace(c, source_bindings={"m.h": "A"}), ds)
    assert bound.rel_err == 0.0


def test_report_formats():
    report = run_suite(list(CLAIMS.values()), DATASET)
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert [r["id"] for r in rows] == list(CLAIMS)
    assert all(r["pass"] == "true" for r in rows)
    doc = json.loads(report.to_json())
    first = doc["results"][0]
    assert {"claim_id", "lhs_value", "rhs_value", "rel_err", "pass", "margin"} <= set(first)
    assert first["rel_err"] == pytest.approx(FROZEN_REL_ERR[first["claim_id"]], rel=1e-6)
    assert "C-MONTEL" in report.to_text()


def test_suite_is_deterministic():
    a = run_suite(list(CLAIMS.values()), bundled_dataset()).to_json()
    b = run_suite(list(CLAIMS.values()), bundled_dataset()).to_json()
    assert a == b


# --- schema ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, where",
    [
        ("{", "line 1"),
        ('{"measurements": []}', ""),
        ('{"cubit_in_meters": "0.5", "measurements": [{"monument": "a"}]}', "measurements[0]"),
        (
            '{"cubit_in_meters": "0.5", "measurements": [{"monument": "a", "dimension": "b",'
            ' "value": 3.0, "unit": "meter", "source": "s"}]}',
            "measurements[0].value",
        ),
        (
            '{"cubit_in_meters": "0.5", "measurements": [{"monument": "a", "dimension": "b",'
            ' "value": "3", "unit": "foot", "source": "s"}]}',
            "measurements[0].unit",
        ),
    ],
)
def test_dataset_schema_errors(text, where):
    with pytest.raises(SchemaError) as exc:
        load_dataset("x.json", text)
    assert exc.value.where == where


def test_claims_schema_errors():
    with pytest.raises(SchemaError):
        load_claims("c.json", '{"claims": [{"id": "X"}]}')
    dup = {"id": "X", "lhs": "1", "rhs": "1", "unit_system": "meter", "claimed_rel_err": "1e-3"}
    with pytest.raises(SchemaError, match="duplicate"):
        load_claims("c.json", json.dumps({"claims": [dup, dup]}))
    with pytest.raises(SchemaError):
        load_claims("c.json", json.dumps({"claims": [dict(dup, lhs="1 +")]}))


def test_missing_file_is_schema_error(tmp_path):
    with pytest.raises(SchemaError, match="cannot read"):
        load_dataset(tmp_path / "missing.json")
