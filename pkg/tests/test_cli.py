import json
import subprocess
import sys

import numpy as np
import pytest

from balance_kit.cli import main
from balance_kit.polytope import Polygon2
from conftest import single_rect_doc, two_feet_doc, wall_impact_doc


def write_stance(tmp_path, doc, name="stance.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_region_command(tmp_path, capsys):
    inp = write_stance(tmp_path, two_feet_doc())
    out = tmp_path / "region.json"
    assert main(["region", "--in", str(inp), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["version"]
    assert doc["meta"]["command"] == "region"
    assert len(doc["data"]["inner_vertices"]) >= 3
    assert doc["data"]["flags"]["torque_limits"] == "omitted"
    # vertices reload as a valid polygon
    Polygon2(doc["data"]["inner_vertices"])
    assert "computed in" in capsys.readouterr().err


def test_output_is_byte_deterministic(tmp_path):
    inp = write_stance(tmp_path, two_feet_doc())
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["region", "--in", str(inp), "--out", str(out1)]) == 0
    assert main(["region", "--in", str(inp), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_zmp_area_command(tmp_path):
    inp = write_stance(tmp_path, single_rect_doc())
    out = tmp_path / "zmp.json"
    assert main(["zmp-area", "--in", str(inp), "--out", str(out)]) == 0
    data = json.loads(out.read_text())["data"]
    xs = [v[0] for v in data["inner_vertices"]]
    assert max(xs) == pytest.approx(0.1, abs=1e-3)


def test_maxvel_command(tmp_path):
    doc = two_feet_doc()
    doc["impact"] = wall_impact_doc()
    inp = write_stance(tmp_path, doc)
    out = tmp_path / "maxvel.json"
    assert main(["maxvel", "--in", str(inp), "--out", str(out)]) == 0
    data = json.loads(out.read_text())["data"]
    assert 0 < data["speed"] < 3.0
    assert len(data["sigma"]) == 32
    assert data["active_vertices"]
    assert data["flags"]["joint_velocity_rows"].startswith("skipped")


def test_impulse_command_with_nmu_override(tmp_path):
    doc = two_feet_doc()
    doc["impact"] = wall_impact_doc(v_ref=(0.5, 0.0, 0.0))
    inp = write_stance(tmp_path, doc)
    out = tmp_path / "impulse.json"
    assert main(["impulse", "--in", str(inp), "--out", str(out), "--nmu", "8"]) == 0
    data = json.loads(out.read_text())["data"]
    assert len(data["vertices"]) == 16
    assert data["v_n_pre"] == pytest.approx(0.5)
    for v in data["vertices"]:
        assert abs(v["restitution_residual"]) <= 1e-9


def test_phase_command_with_csv(tmp_path):
    inp = write_stance(tmp_path, two_feet_doc())
    out = tmp_path / "phase.json"
    csv = tmp_path / "phase.csv"
    code = main(["phase", "--in", str(inp), "--out", str(out), "--csv", str(csv),
                 "--x0", "0.0", "0.40", "--horizon", "4.0"])
    assert code == 0
    data = json.loads(out.read_text())["data"]
    assert data["classification"] == "converges"
    assert data["ssr"]["hi"] == pytest.approx(0.4610, abs=5e-4)
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "t,c_x,cd_x,z_x"
    assert len(lines) == len(data["trajectory"]) + 1


def test_validation_error_names_field(tmp_path, capsys):
    doc = two_feet_doc()
    doc["contacts"][0]["half_x"] = -0.5
    inp = write_stance(tmp_path, doc)
    assert main(["region", "--in", str(inp)]) == 2
    err = capsys.readouterr().err
    assert "contacts[0].half_x" in err


def test_malformed_json_is_validation_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["region", "--in", str(bad)]) == 2


def test_missing_file_is_validation_error(tmp_path):
    assert main(["region", "--in", str(tmp_path / "nope.json")]) == 2


def test_infeasible_stance_exit_code(tmp_path, capsys):
    doc = single_rect_doc()
    doc["contacts"][0]["rotation"] = [[1, 0, 0], [0, -1, 0], [0, 0, -1]]
    inp = write_stance(tmp_path, doc)
    assert main(["region", "--in", str(inp)]) == 3
    assert "infeasible" in capsys.readouterr().err


def test_impulse_without_impact_section(tmp_path):
    inp = write_stance(tmp_path, two_feet_doc())
    assert main(["impulse", "--in", str(inp)]) == 2


def test_module_entry_point(tmp_path):
    inp = write_stance(tmp_path, two_feet_doc())
    proc = subprocess.run(
        [sys.executable, "-m", "balance_kit.cli", "region", "--in", str(inp)],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["meta"]["command"] == "region"


def test_region_csv(tmp_path):
    inp = write_stance(tmp_path, two_feet_doc())
    csv = tmp_path / "region.csv"
    assert main(["region", "--in", str(inp), "--csv", str(csv)]) == 0
    assert csv.read_text().startswith("x,y\n")


def test_float_formatting_12_digits(tmp_path):
    from balance_kit.documents import canonical_dumps, format_float

    assert format_float(0.1) == "0.1"
    assert format_float(-0.0) == "0"
    assert format_float(1.0 / 3.0) == "0.333333333333"
    assert canonical_dumps({"a": [1.5, 2], "b": True, "c": None}) == '{"a":[1.5,2],"b":true,"c":null}'
    assert canonical_dumps(np.array([0.25, 0.5])) == "[0.25,0.5]"
