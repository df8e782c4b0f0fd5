import json
import math

import pytest

import gpcover

H = gpcover.Hyperparameters(8.33, 12.87, 0.0361)


def test_radii():
    h = gpcover.Hyperparameters(1.0, 1.0, 0.1)
    assert gpcover.compute_r_max(h, 0.5) == pytest.approx(0.8325546111576977, rel=1e-12)
    assert gpcover.sufficient_radius(h, 0.5, 1) == pytest.approx(0.7731991986258265, rel=1e-12)
    assert gpcover.compute_n_alpha(gpcover.Hyperparameters(1, 1, 10), 0.5, 2.0) == 15


def test_variance_single_site():
    v = gpcover.posterior_variance((0.0, 0.0), [(1.0, 0.0, 1)], gpcover.Hyperparameters(1, 1, 0.1))
    assert v == pytest.approx(1 - math.exp(-1) / 1.1, rel=1e-12)
    assert gpcover.repeated_measurement_variance(1.0, 1, gpcover.Hyperparameters(1, 1, 0.1)) == pytest.approx(v)


def test_plan_and_tour():
    env = gpcover.Environment.rectangle((0, 0), (30, 24))
    plan = gpcover.disk_cover_placement(env, H, 4.0)
    assert plan.location_count() > 0
    assert all(e.count == plan.n_alpha for e in plan.entries)
    assert gpcover.verify_plan(plan, env, H, 4.0).passed
    dct = gpcover.disk_cover_tour(env, H, 4.0, eta=1.0)
    assert dct.tour.total_dwell() == plan.measurement_count()
    assert dct.center_route_length >= dct.center_route_lower_bound
    subtours, cert = gpcover.split_tour(dct.tour, 2, dct.plan.n_alpha, 1.0)
    assert len(subtours) == 2
    assert cert.satisfied
    assert json.loads(dct.tour.to_json(1.0))["total_measurements"] == plan.measurement_count()


def test_errors():
    with pytest.raises(gpcover.GpcoverError, match="delta-out-of-range"):
        gpcover.compute_r_max(H, 20.0)
    with pytest.raises(gpcover.GpcoverError):
        gpcover.Environment.from_json('{"type":')


def test_cli(tmp_path):
    env = tmp_path / "env.json"
    env.write_text('{"type":"rectangle","min":[0,0],"max":[20,16]}')
    code = gpcover.run_cli(["plan", "--env", str(env), "--hyper", "8.33,12.87,0.0361", "--delta", "4",
                            "--out", str(tmp_path / "out")])
    assert code == 0
    assert json.loads((tmp_path / "out" / "verification.json").read_text())["pass"] is True
    assert gpcover.run_cli(["bogus"]) == 2
