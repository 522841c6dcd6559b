import json
import math
import os
from pathlib import Path

import pytest

import groundnav as gn

DATA = Path(os.environ.get("GROUNDNAV_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="module")
def office():
    return gn.load_map_file(str(DATA / "office_map.json"))


@pytest.fixture(scope="module")
def model():
    return gn.Model.load(str(DATA / "office_model.json"))


def toy_map():
    doc = {
        "boundary": [[0, 0], [4, 0], [4, 2], [0, 2]],
        "resolution": 0.5,
        "areas": [
            {"id": "1", "category": "room", "subcategory": "meeting",
             "polygon": [[0, 0], [2, 0], [2, 2], [0, 2]]},
            {"id": "2", "category": "area", "polygon": [[2, 0], [4, 0], [4, 2], [2, 2]]},
        ],
    }
    return gn.load_map(json.dumps(doc))


def test_map_shape(office):
    assert office.size == 80
    assert office.grid_shape == (60, 100)
    assert "124" in office.ids()


def test_ground_meeting_room(office, model):
    trace = gn.ground(office, model, "go to the meeting room near the north exit")
    assert len(trace["steps"]) == 3
    assert trace["ranked"][0]["id"] == "124"
    assert [s["type"] for s in trace["steps"]] == ["precise", "proximity", "precise"]


def test_errors(office, model):
    with pytest.raises(gn.ParseError):
        gn.ground(office, model, "go to the area between yosemite and hardware")
    with pytest.raises(gn.DegenerateUpdate):
        gn.ground(office, model, "go to the kitchen to the south of exit 225")
    with pytest.raises(gn.UnknownArea):
        gn.uniform_over_area(office, "nowhere")
    assert issubclass(gn.Unreachable, gn.GroundnavError)


def test_beliefs(office):
    prior = gn.dummy_prior(office)
    assert len(prior) == 6000
    assert math.isclose(sum(prior), 1.0)
    weights = gn.gather_area_weights(office, gn.uniform_over_area(office, "124"))
    assert max(weights) == pytest.approx(1.0)


def test_model_heads(model):
    assert model.classify("near") == "proximity"
    assert model.classify("of") == "dummy"
    assert abs(model.direction("the north") - math.pi / 2) <= math.pi / 8
    kappa, beta = model.kappa_beta("the meeting room")
    assert 0.0 <= kappa <= 1.0 and beta > 0.0


def test_parse(model):
    assert gn.extract_destination("go to room 124") == "room 124"
    assert gn.parse_chain(model, "the meeting room near the north exit") == [
        "the north exit", "near", "the meeting room"]


def test_train_small():
    m = toy_map()
    init = gn.Model.create(m, seed=3)
    data = gn.generate_dataset(m, init, k=2, seed=3)
    assert len(data) == 16
    back = gn.read_dataset(data.to_jsonl(), m, init)
    assert len(back) == 16
    trained, report = gn.train(data, m, init, {"epochs": 2, "learning_rate": 0.01, "holdout": 0.25})
    assert len(report["history"]) == 2
    assert report["holdout"]["samples"] == 4
    assert gn.evaluate(trained, data, m)["samples"] == 16


def test_composite_and_plan(office, model):
    queries = gn.gen_composite(office, 2, 5, 3)
    assert len(queries) == 5
    report = gn.benchmark(queries, office, model)
    assert report["any"]["queries"] == 5
    path = gn.plan(office, "225", "124")
    assert path[0] == "225" and path[-1] == "124"
    edges = set(gn.adjacency(office))
    for a, b in zip(path, path[1:]):
        assert (a, b) in edges or (b, a) in edges
