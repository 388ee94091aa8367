import json
import math

import numpy as np
import pytest

import steerlab


def test_coupling_and_unitary():
    g = steerlab.coupling(2.0, 1)
    assert g == pytest.approx(math.acos(math.exp(-2.0)))
    w = steerlab.collision_unitary(g)
    assert w.shape == (4, 4)
    assert np.allclose(w.conj().T @ w, np.eye(4), atol=1e-12)


def test_trajectory_endpoint_is_independent_of_n():
    for n in range(1, 5):
        traj = steerlab.trajectory(2.0, n)
        assert len(traj) == n + 1
        assert traj[0] == pytest.approx([0.0, 0.0, 1.0])
        assert traj[-1][2] == pytest.approx(math.exp(-2.0), abs=1e-12)


def test_config_defaults():
    cfg = steerlab.config({"experiment": {"N": 2}})
    assert cfg["experiment"]["N"] == 2
    assert cfg["lb"]["mode"] == "projective3"


def test_bad_config_raises_value_error():
    with pytest.raises(ValueError, match="/experiment/N"):
        steerlab.config({"experiment": {"N": 0}})
    with pytest.raises(steerlab.InputError):
        steerlab.config({"lb": {"mode": "full3"}})


def test_two_setting_assemblage_is_maximally_steerable():
    doc = steerlab.ideal_assemblage({"experiment": {"N": 1}})
    doc["settings"] = ["x1", "x2"]
    doc["members"] = [m for m in doc["members"] if m["x"] != "x3"]
    sol = steerlab.steering_weight(doc)
    assert sol["steering_weight"] == pytest.approx(1.0, abs=1e-6)
    assert sol["certificate_passed"]


def test_exact_lower_bound_is_at_most_one():
    res = steerlab.lower_bound({"experiment": {"N": 1}})
    assert 0.0 < res["lb"] <= 1.0 + 1e-9
    assert res["mode"] == "projective3"


def test_third_strategy_for_one_collision():
    res = steerlab.find_third_strategy({"experiment": {"N": 1}, "search": {"restarts": 2}})
    assert res["theta"] == pytest.approx(1.570, abs=0.02)
    assert res["steering_weight"] > res["baseline_weight"]


def test_run_stages(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"version": 1, "shots": 20000, "noise": {"two_qubit_depolarizing": 0.02}}))
    out = tmp_path / "out"
    for stage in ("simulate", "sample", "tomo"):
        code, log = steerlab.run(stage, out, cfg)
        assert code == 0, log
    assert (out / "counts.json").exists()
    assert (out / "tomo.json").exists()
    code, _ = steerlab.run("frobnicate", out, cfg)
    assert code == 2
