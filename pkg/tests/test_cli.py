import csv
import json

import numpy as np
import pytest

from platemwr.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, main
from platemwr.config import load_config, load_problem
from platemwr.solver import solve


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_solve_bookcase_passes(capsys):
    assert main(["solve", "bookcase"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "verdict          PASS" in out


def test_solve_thin_bookcase_fails(tmp_path):
    doc = load_config("bookcase")
    doc["plate"]["t_mm"] = 3
    assert main(["solve", write(tmp_path, "thin.json", doc)]) == EXIT_FAIL


def test_unconstrained_plate_is_an_error(tmp_path, capsys):
    doc = load_config("table1")
    for e in doc["edges"]:
        e["bc"] = "free"
    assert main(["solve", write(tmp_path, "loose.json", doc)]) == EXIT_ERROR
    assert "unconstrained plate" in capsys.readouterr().err


def test_bad_json_and_schema(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", str(bad)]) == EXIT_ERROR
    doc = load_config("table1")
    del doc["plate"]
    assert main(["solve", write(tmp_path, "noplate.json", doc)]) == EXIT_ERROR
    assert "plate" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "missing.json")]) == EXIT_ERROR


def test_solve_json_schema(capsys):
    assert main(["solve", "glass_table", "--json"]) == EXIT_FAIL
    d = json.loads(capsys.readouterr().out)
    assert set(d) == {"omega_max_mm", "location_mm", "sigma1_max_mpa", "criteria", "n_used", "r", "k", "timings_s"}
    c, = d["criteria"]
    assert set(c) == {"kind", "measured", "limit", "pass"}
    assert c["kind"] == "max_stress" and c["limit"] == 40.0 and c["pass"] is False
    assert d["sigma1_max_mpa"] == pytest.approx(c["measured"])


def test_json_byte_identical(capsys):
    main(["solve", "table1", "--json", "--no-timings"])
    a = capsys.readouterr().out
    main(["solve", "table1", "--json", "--no-timings"])
    assert capsys.readouterr().out == a
    assert json.loads(a)["timings_s"] is None


def test_field_zero_load(tmp_path):
    doc = load_config("table1")
    doc["loads"] = [{"kind": "uniform", "P_Pa": 0.0}]
    out = tmp_path / "w.csv"
    assert main(["field", write(tmp_path, "zero.json", doc), "--grid", "3", "--out", str(out)]) == EXIT_PASS
    header, rows = read_csv(out)
    assert header == ["x_mm", "y_mm", "value"]
    assert rows.shape == (9, 3)
    assert not np.any(rows[:, 2])
    # raster order: y outer, x inner
    np.testing.assert_array_equal(rows[:3, 1], [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(rows[:3, 0], [0.0, 125.0, 250.0])


def test_field_table1_matches_solution(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["field", "table1", "--grid", "5", "--out", str(out)]) == EXIT_PASS
    _, rows = read_csv(out)
    centre = rows[(rows[:, 0] == 125.0) & (rows[:, 1] == 250.0), 2]
    assert centre[0] == pytest.approx(0.4116, abs=5e-4)
    sol = solve(load_problem("table1"))
    direct = sol(rows[:, 0] * 1e-3, rows[:, 1] * 1e-3) * 1e3
    np.testing.assert_allclose(rows[:, 2], direct, rtol=1e-8, atol=1e-12)


def test_field_csv_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["field", "bookcase", "--field", "stress", "--grid", "7", "--out", str(a)])
    main(["field", "bookcase", "--field", "stress", "--grid", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" not in a.read_bytes()


def test_field_moment_is_stress_times_section_modulus(tmp_path):
    s, m = tmp_path / "s.csv", tmp_path / "m.csv"
    main(["field", "table1", "--field", "stress", "--grid", "4", "--out", str(s)])
    main(["field", "table1", "--field", "moment", "--grid", "4", "--out", str(m)])
    t = 0.1e-3
    np.testing.assert_allclose(read_csv(m)[1][:, 2], read_csv(s)[1][:, 2] * 1e6 * t**2 / 6, rtol=1e-7)


def test_field_png(tmp_path):
    pytest.importorskip("matplotlib")
    png = tmp_path / "w.png"
    assert main(["field", "table1", "--grid", "6", "--out", str(tmp_path / "w.csv"), "--png", str(png)]) == EXIT_PASS
    assert png.read_bytes()[:4] == b"\x89PNG"


def test_sweep_thickness(capsys):
    assert main(["sweep", "bookcase", "--param", "t_mm", "--values", "3,6", "--json", "--no-timings"]) == EXIT_PASS
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert [(r["value"], r["verdict"]) for r in rows] == [(3.0, "FAIL"), (6.0, "PASS")]


def test_sweep_all_fail(capsys):
    assert main(["sweep", "bookcase", "--param", "t_mm", "--values", "2,3"]) == EXIT_FAIL


def test_sweep_glass_mass(capsys):
    assert main(["sweep", "glass_table", "--param", "load_kg", "--values", "0.73,6.77,7.15"]) == EXIT_PASS
    lines = capsys.readouterr().out.strip().splitlines()[1:]
    assert [ln.split()[-1] for ln in lines] == ["PASS", "PASS", "FAIL"]


def test_sweep_bad_requests(capsys):
    assert main(["sweep", "bookcase", "--param", "t_mm", "--values", ""]) == EXIT_ERROR
    assert main(["sweep", "bookcase", "--param", "colour", "--values", "1"]) == EXIT_ERROR
    assert main(["sweep", "table1", "--param", "load_kg", "--values", "1"]) == EXIT_ERROR
    assert main(["sweep", "bookcase", "--param", "t_mm", "--values", "a,b"]) == EXIT_ERROR


def test_sweep_error_rows(capsys):
    assert main(["sweep", "bookcase", "--param", "t_mm", "--values=-1,6", "--json"]) == EXIT_PASS
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert rows[0]["verdict"] == "ERROR" and rows[1]["verdict"] == "PASS"


def test_convergence(capsys):
    assert main(["convergence", "table1"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert out.strip().splitlines()[-1].startswith("converged")
    assert main(["convergence", "table1", "--json", "--no-timings"]) == EXIT_PASS
    d = json.loads(capsys.readouterr().out)
    assert [r["n"] for r in d["rows"]] == [6, 8, 10, 12]


def test_oracle(capsys):
    assert main(["oracle", "table1", "--grid", "61", "--json"]) == EXIT_PASS
    d = json.loads(capsys.readouterr().out)
    assert d["disagreement_pct"] < 2.0


def test_oracle_capability_error(capsys):
    assert main(["oracle", "gripper_finger"]) == EXIT_ERROR
    assert "oracle cannot handle" in capsys.readouterr().err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == EXIT_ERROR
