import json

import pytest

from platemwr.config import ConfigError, load_config, load_problem, problem_from_config, problem_to_config, shipped_configs
from platemwr.model import validate_problem


def test_shipped_configs():
    assert set(shipped_configs()) >= {"table1", "bookcase", "glass_table", "gripper_finger"}


@pytest.mark.parametrize("name", ["table1", "bookcase", "glass_table", "gripper_finger"])
def test_shipped_configs_are_valid(name):
    assert validate_problem(load_problem(name)) == []


@pytest.mark.parametrize("name", ["table1", "bookcase", "glass_table", "gripper_finger"])
def test_roundtrip(name):
    p = load_problem(name)
    q = problem_from_config(json.loads(json.dumps(problem_to_config(p))))
    assert (q.geometry.Lx, q.geometry.Ly) == pytest.approx((p.geometry.Lx, p.geometry.Ly))
    assert q.material.t == pytest.approx(p.material.t)
    assert [(b.edge, b.kind) for b in q.bcs] == [(b.edge, b.kind) for b in p.bcs]
    assert [b.s0 for b in q.bcs] == pytest.approx([b.s0 for b in p.bcs])
    assert sum(ld.total_force(q.geometry) for ld in q.loads) == pytest.approx(
        sum(ld.total_force(p.geometry) for ld in p.loads), rel=1e-12)
    assert len(q.criteria) == len(p.criteria)
    assert q.settings == p.settings


def test_units_are_converted():
    p = load_problem("glass_table")
    assert p.geometry.Lx == pytest.approx(0.9)
    assert p.material.t == pytest.approx(2.3e-3)
    assert p.material.Ex == pytest.approx(70e9)
    assert p.criteria[0].limit == pytest.approx(40e6)
    assert p.loads[0].region.x0 == pytest.approx(0.37)


def test_errors_carry_paths():
    doc = load_config("bookcase")
    doc["plate"]["t_mm"] = "thin"
    doc["material"]["Ex_GPa"] = -1
    doc["edges"][0]["bc"] = "glued"
    with pytest.raises(ConfigError) as exc:
        problem_from_config(doc)
    text = "\n".join(exc.value.errors)
    assert "plate.t_mm" in text
    assert "edges[0].bc" in text
    assert "material.Ex_GPa" in text


def test_missing_sections():
    with pytest.raises(ConfigError) as exc:
        problem_from_config({})
    assert len(exc.value.errors) >= 3


def test_unknown_config_name():
    with pytest.raises(FileNotFoundError):
        load_config("no_such_plate")


def test_polynomial_load_scaled_from_mm():
    doc = load_config("table1")
    doc["loads"] = [{"kind": "polynomial", "coeffs_Pa": [[1, 0, 2.0], [0, 0, 1.0]]}]
    p = problem_from_config(doc)
    # 2 Pa/mm in x becomes 2000 Pa/m
    assert p.loads[0].coeffs[(1, 0)] == pytest.approx(2000.0)
