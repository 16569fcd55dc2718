import csv
import json

import pytest
from fastapi.testclient import TestClient

from glideplan.cli import main
from glideplan.service import create_app


def scenario_doc(altitude=600.0, hills=True):
    return {
        "aircraft": "cessna172",
        "wind": {"w_north_mps": 3.0, "w_east_mps": -2.0},
        "cutoff": {"x_m": 200.0, "y_m": 200.0, "altitude_m": altitude},
        "sites": [{"id": "alpha", "x_m": 3000.0, "y_m": 3000.0,
                   "weight": 2.0},
                  {"id": "beta", "x_m": 500.0, "y_m": 2800.0,
                   "weight": 1.0}],
        "dtm": {"format": "synthetic-spec", "recipe": {
            "nx": 64, "ny": 64, "dx": 50.0, "dy": 50.0, "base": 0.0,
            "hills": ([{"cx": 1600.0, "cy": 1600.0, "height": 300.0,
                        "sigma": 300.0}] if hills else [])}},
    }


@pytest.fixture
def scenario_file(tmp_path):
    p = tmp_path / "scn.json"
    p.write_text(json.dumps(scenario_doc()))
    return p


def test_cli_plan_writes_outputs(scenario_file, tmp_path, capsys):
    out = tmp_path / "traj.json"
    wps = tmp_path / "wp.csv"
    rc = main(["plan", str(scenario_file), "--out", str(out),
               "--csv", str(wps), "--turns"])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["site_id"] == "alpha"
    assert doc["total_loss_m"] > 0
    assert doc["segments"]
    printed = json.loads(capsys.readouterr().out)
    assert printed == doc
    rows = list(csv.DictReader(wps.open()))
    assert rows[0]["x_m"] == "200.000"
    assert float(rows[-1]["altitude_m"]) == pytest.approx(
        doc["end_altitude_m"], abs=1e-3)


def test_cli_plan_unreachable_exit_code(tmp_path, capsys):
    p = tmp_path / "scn.json"
    p.write_text(json.dumps(scenario_doc(altitude=60.0)))
    rc = main(["plan", str(p)])
    assert rc == 2
    doc = json.loads(capsys.readouterr().out)
    assert doc["failure"] == "unreachable"
    assert {s["site_id"] for s in doc["sites"]} == {"alpha", "beta"}


def test_cli_falls_back_to_reachable_site(tmp_path, capsys):
    # the preferred (heavier) site is out of glide range; the planner has to
    # settle for the nearer strip
    doc = scenario_doc(altitude=200.0, hills=False)
    doc["sites"] = [{"id": "far", "x_m": 3000.0, "y_m": 3000.0,
                     "weight": 5.0},
                    {"id": "near", "x_m": 900.0, "y_m": 900.0,
                     "weight": 1.0}]
    p = tmp_path / "scn.json"
    p.write_text(json.dumps(doc))
    assert main(["plan", str(p)]) == 0
    assert json.loads(capsys.readouterr().out)["site_id"] == "near"


def test_cli_display_unit_flags(scenario_file, capsys):
    assert main(["plan", str(scenario_file), "--feet", "--knots"]) == 0
    captured = capsys.readouterr()
    doc = json.loads(captured.out)            # stdout is still pure SI JSON
    assert "total_loss_m" in doc
    assert " ft" in captured.err and " kt" in captured.err


def test_cli_input_error_exit_code(tmp_path, capsys):
    p = tmp_path / "scn.json"
    p.write_text("{broken")
    rc = main(["plan", str(p)])
    assert rc == 1
    assert json.loads(capsys.readouterr().out)["failure"] == "input-error"


def test_cli_reach_and_manifold(scenario_file, tmp_path, capsys):
    assert main(["reach", str(scenario_file)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert all(s["reachable"] for s in report["sites"])

    contour_csv = tmp_path / "iso.csv"
    assert main(["manifold", str(scenario_file), "--levels", "100,200",
                 "--csv", str(contour_csv)]) == 0
    fc = json.loads(capsys.readouterr().out)
    assert fc["type"] == "FeatureCollection"
    levels = {f["properties"]["loss_m"] for f in fc["features"]}
    assert levels == {100.0, 200.0}
    assert contour_csv.exists()


def test_cli_oracle_compare(scenario_file, capsys):
    assert main(["oracle-compare", str(scenario_file)]) == 0
    lines = [json.loads(ln) for ln in
             capsys.readouterr().out.strip().splitlines()]
    for rec in lines:
        if rec["planner_loss_m"] is not None and \
                rec["oracle_loss_m"] is not None:
            assert "bound_violated" not in rec


@pytest.fixture
def client():
    return TestClient(create_app())


def test_service_plan_matches_cli_shape(client):
    r = client.post("/plan", json=scenario_doc())
    assert r.status_code == 200
    doc = r.json()
    assert doc["site_id"] == "alpha"
    assert doc["cutoff"]["altitude_m"] == 600.0
    assert doc["profile"][0]["altitude_m"] == 600.0


def test_service_input_and_unreachable_errors(client):
    bad = scenario_doc()
    del bad["wind"]
    assert client.post("/plan", json=bad).status_code == 400
    r = client.post("/plan", json=scenario_doc(altitude=60.0))
    assert r.status_code == 422
    assert r.json()["detail"]["failure"] == "unreachable"


def test_service_reach_obstacles_terrain(client):
    doc = scenario_doc(altitude=450.0)
    r = client.post("/reach", json=doc)
    assert r.status_code == 200
    r = client.post("/obstacles", json=doc)
    assert r.status_code == 200
    body = r.json()
    assert body["polygons"]           # the hill shows up at 450 m
    assert body["ftps"]
    r = client.post("/terrain", json=doc)
    assert r.status_code == 200
    t = r.json()
    assert t["rows"] == 64 and t["cols"] == 64
    assert t["clearance_m"] == 50.0


def test_service_manifold_contours(client):
    r = client.get("/manifold", params={"wx": 5, "wy": 0,
                                        "levels": "150,300"})
    assert r.status_code == 200
    assert len(r.json()["features"]) >= 2
    assert client.get("/manifold", params={"levels": "abc"}).status_code == 400


def test_service_session_lifecycle(client):
    r = client.post("/session", json=scenario_doc())
    assert r.status_code == 200
    sid = r.json()["session_id"]
    assert r.json()["state"]["plan"]["total_loss_m"] > 0

    r = client.post(f"/session/{sid}/advance",
                    json={"altitude_drop_m": 100.0})
    assert r.status_code == 200
    assert r.json()["altitude_m"] == pytest.approx(500.0)

    r = client.post(f"/session/{sid}/wind",
                    json={"w_north_mps": -5.0, "w_east_mps": 0.0})
    assert r.status_code == 200
    assert r.json()["wind"]["w_north_mps"] == -5.0

    r = client.get(f"/session/{sid}/state")
    assert r.status_code == 200
    assert not r.json()["done"]

    assert client.get("/session/missing/state").status_code == 404
    assert client.post(f"/session/{sid}/wind",
                       json={"w_north_mps": "x"}).status_code == 400
    assert client.post(f"/session/{sid}/advance",
                       json={"altitude_drop_m": -5}).status_code == 400


def test_service_session_unreachable_is_422(client):
    r = client.post("/session", json=scenario_doc(altitude=60.0))
    assert r.status_code == 422
