"""Destination grounding on segmented indoor maps."""

import json as _json

from ._groundnav import (
    AreaMap,
    Dataset,
    DegenerateUpdate,
    GroundnavError,
    Model,
    ParseError,
    UnknownArea,
    Unreachable,
    adjacency,
    dummy_prior,
    extract_destination,
    gamma_factor,
    gather_area_weights,
    generate_dataset,
    load_map,
    load_map_file,
    parse_chain,
    plan,
    read_dataset,
    uniform_over_area,
)
from . import _groundnav


def ground(map, model, instruction, ranked=10):
    """Belief trace of an instruction as a dict."""
    return _json.loads(_groundnav.ground_json(map, model, instruction, ranked))


def train(dataset, map, model, config=None):
    """Returns (trained model, {"holdout": report, "history": [...]})."""
    params, report = _groundnav.train_json(dataset, map, model, _json.dumps(config or {}))
    return params, _json.loads(report)


def evaluate(model, dataset, map, holdout_only=False, seed=1):
    return _json.loads(_groundnav.evaluate_json(model, dataset, map, holdout_only, seed))


def gen_composite(map, seed, n, steps):
    return _json.loads(_groundnav.gen_composite_json(map, seed, n, steps))


def benchmark(queries, map, model):
    return _json.loads(_groundnav.benchmark_json(_json.dumps(queries), map, model))


__all__ = [
    "AreaMap", "Dataset", "DegenerateUpdate", "GroundnavError", "Model", "ParseError",
    "UnknownArea", "Unreachable", "adjacency", "benchmark", "dummy_prior", "evaluate",
    "extract_destination", "gamma_factor", "gather_area_weights", "gen_composite",
    "generate_dataset", "ground", "load_map", "load_map_file", "parse_chain", "plan",
    "read_dataset", "train", "uniform_over_area",
]
