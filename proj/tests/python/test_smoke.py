import itertools
import json
import math

import numpy as np
import pytest

import homtype


def test_delta_table_matches_brute_force():
    rng = np.random.default_rng(3)
    coords = rng.random((8, 2))
    weights = list(0.1 + rng.random(8))
    space = homtype.Space.from_coordinates("random", coords, weights)
    table = homtype.delta_table(space)
    n = len(space)
    for x, y in itertools.product(range(n), repeat=2):
        if x == y:
            assert table[x, y] == 0.0
            continue
        best = math.inf
        for z in range(n):
            order = sorted(range(n), key=lambda w: (space.distance(z, w), w))
            for r in (space.distance(z, w) for w in range(n)):
                ball = [w for w in order if space.distance(z, w) <= r]
                if x in ball and y in ball:
                    best = min(best, sum(space.weight(w) for w in ball))
        assert table[x, y] == pytest.approx(best, rel=1e-12)


def test_delta_ball_contains_center_and_is_small():
    space, F, _ = homtype.generate("grid1d", n=10)
    members, mass = homtype.delta_ball(space, 4, 0.35)
    assert 4 in members
    assert mass == pytest.approx(sum(space.weight(p) for p in members))


def test_generate_and_cantor_dimension():
    space, F, measures = homtype.generate("cantor", level=6)
    assert len(F) == 64
    assert "natural" in measures
    est = homtype.dimension(space, F, flavor="metric")
    assert abs(est["s_star"] - math.log(2) / math.log(3)) < 0.05


def test_regularity_of_counting_measure_on_grid():
    space, F, _ = homtype.generate("grid1d", n=32)
    nu = space.weights()
    rep = homtype.regularity(space, F, nu, 1.0, flavor="measure")
    assert rep["c"] == pytest.approx(1.0)


def test_small_measure_cover_certificate():
    space, F, _ = homtype.generate("cantor", level=4)
    out = homtype.small_measure_cover(space, F, 0.3)
    cert = out["certificate"]
    assert cert["covers"] and cert["masses_below_rho"] and cert["centers_in_target"]


def test_errors_map_to_categories(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"points": [{"id": 0, "coords": [0], "weight": 1}], "metric": {"kind": "euclidean"}, "x": 1}))
    with pytest.raises(homtype.SchemaError):
        homtype.Space.load(str(bad))
    space, F, _ = homtype.generate("grid1d", n=5)
    with pytest.raises(homtype.Refusal):
        homtype.regularity(space, F, space.weights(), -1.0)


def test_cli_round_trip(tmp_path):
    out = tmp_path / "s.json"
    assert homtype.run_cli(["generate", "--family", "cantor", "--level", "3", "--out", str(out),
                            "--report", str(tmp_path / "g.json")]) == 0
    assert homtype.run_cli(["delta", "--space", str(out), "--out", str(tmp_path / "d.json"), "--no-timings"]) == 0
    report = json.loads((tmp_path / "d.json").read_text())
    assert report["command"] == "delta"
    assert homtype.run_cli(["delta", "--space", str(tmp_path / "missing.json")]) == 4
