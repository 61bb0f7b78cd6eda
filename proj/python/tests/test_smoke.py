import json
import math

import pytest

import metpath


def test_fixture_catalog():
    names = metpath.fixture_names()
    assert "cantor" in names and "vp_pair" in names
    circle = metpath.make_fixture("circle")
    assert circle.path.evaluate(0.0) == [1.0, 0.0]
    assert circle.meta.is_ac
    assert metpath.make_fixture("segment", {"speed": 2.0}).meta.variation_exact == 4.0


def test_variation_and_metric_derivative():
    circle = metpath.make_fixture("circle").path
    est = metpath.variation(circle)
    assert est["status"] == "Converged"
    assert abs(est["value"] - 2 * math.pi) < 1e-6
    value, status = metpath.metric_derivative(circle, 1.0)
    assert status == "Converged" and abs(value - 1.0) < 1e-6
    assert metpath.variation(metpath.make_fixture("osc_bv_fail").path)["status"] == "Diverging"


def test_csv_path():
    path = metpath.parse_csv("t,x,y\n0,0,0\n1,3,4\n").path
    assert metpath.variation(path)["value"] == 5.0
    with pytest.raises(metpath.InputError, match="row 3"):
        metpath.parse_csv("t,x\n0,0\n0,1\n")


def test_measures():
    seg = metpath.make_fixture("segment").path
    length, status = metpath.hausdorff_length(seg, [(0.0, 2.0)])
    assert status == "Converged" and abs(length - 2.0) < 1e-6
    value, flag = metpath.integrate_grid([(i / 64, 1.0) for i in range(129)])
    assert value == 2.0 and flag == "integrable"


def test_run_checks():
    reports = metpath.run_checks(metpath.make_fixture("cantor"), "variation_identity,banach_zarecki")
    assert [r["theorem_id"] for r in reports] == ["variation_identity", "banach_zarecki"]
    assert all(r["verdict"] == "holds" for r in reports)
    assert reports[0]["lhs"] <= 0.05
    assert "not (N) leg identified" in reports[1]["notes"]
    with pytest.raises(ValueError):
        metpath.run_checks(metpath.make_fixture("segment"), "nonsense")


def test_reports_json_is_deterministic():
    fx = metpath.make_fixture("vp_pair")
    first = metpath.reports_json(fx, "composition")
    assert first == metpath.reports_json(fx, "composition")
    doc = json.loads(first)
    assert doc[0]["verdict"] == "holds" and doc[0]["lhs"] == "inf"
