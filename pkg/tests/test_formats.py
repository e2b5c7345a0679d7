import json

import numpy as np
import pytest

from shallowcirc import formats
from shallowcirc.classical import AffineStrategy, pairwise_and_strategy
from shallowcirc.f2lin import F2Vector
from shallowcirc.graphs import grid_spanning_tree
from shallowcirc.problems import (
    PbpInstance,
    PhpInstance,
    RphpInstance,
    TritVector,
    gen_even_parity_input,
    parallel_mod3,
    parallel_rphp,
    random_hlf_instance,
)
from shallowcirc.reductions import rphp_to_hlf


def round_trip(inst):
    doc = json.loads(json.dumps(formats.instance_to_json(inst)))
    return formats.instance_from_json(doc)


def test_instances_round_trip():
    rng = np.random.default_rng(0)
    t = grid_spanning_tree(3, 2)
    cases = [
        PhpInstance(gen_even_parity_input(9, rng), 4),
        RphpInstance(t, gen_even_parity_input(6, rng)),
        random_hlf_instance(8, rng),
        PbpInstance(F2Vector.from_str("1101")),
        PbpInstance(TritVector.from_str("2101")),
        TritVector.from_str("0120"),
        parallel_mod3([TritVector.from_str("12"), TritVector.from_str("0")]),
        parallel_rphp([RphpInstance(t, F2Vector.zeros(6))]),
    ]
    for inst in cases:
        assert round_trip(inst) == inst


def test_solutions_round_trip():
    y, d = F2Vector.from_str("1011"), F2Vector.from_str("011")
    for kind, sol in [("php", y), ("pbp", y), ("hlf", y), ("rphp", (y, d)), ("mod3", 2)]:
        assert formats.solution_from_json(formats.solution_to_json(kind, sol)) == sol


def test_strategies_and_embedding_round_trip():
    for s in [AffineStrategy(1, F2Vector.from_str("0110")), pairwise_and_strategy(4)]:
        assert formats.strategy_from_json(formats.strategy_to_json(s)) == s
    _, emb = rphp_to_hlf(RphpInstance(grid_spanning_tree(2, 2), F2Vector.zeros(4)), grid_width=2)
    assert formats.embedding_from_json(json.loads(json.dumps(formats.embedding_to_json(emb)))) == emb


def test_graph_schema():
    doc = formats.instance_to_json(RphpInstance(grid_spanning_tree(2, 2), F2Vector.zeros(4)))
    assert doc["graph"] == {"vertices": 4, "edges": [[0, 1], [0, 2], [1, 3]]}


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"type": "nope"},
        {"type": "php", "x": {"n": 3}},
        {"type": "php", "m": 2, "x": {"n": 2, "hex": "zz"}},
        {"type": "hlf", "n": 2, "edges": [[1, 0]], "b": [0, 0]},
        {"type": "hlf", "n": 2, "edges": [], "b": [0]},
    ],
)
def test_malformed_rejected(doc):
    with pytest.raises(formats.FormatError):
        formats.instance_from_json(doc)
