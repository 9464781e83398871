import json

import pytest

from egalmatch.algorithms import ALGORITHMS, Options, get, solve
from egalmatch.core import InvalidInstanceError, SolveResult
from egalmatch.formats import dumps, instance_from_json, instance_to_json, result_to_json, sequence_from_json

from conftest import COUNTEREXAMPLE, inst


def test_instance_roundtrip():
    i = inst([["1/2", 3], [0, "0.75"]], 4)
    assert instance_from_json(json.loads(dumps(instance_to_json(i)))) == i


@pytest.mark.parametrize("key,value", [("agents", 0), ("rounds", True), ("goods", "2")])
def test_instance_rejects_bad_sizes(key, value):
    doc = instance_to_json(inst([[1, 2]], 1))
    doc[key] = value
    with pytest.raises(InvalidInstanceError):
        instance_from_json(doc)


def test_result_document_revalidates():
    i = inst(COUNTEREXAMPLE, 2)
    with pytest.raises(InvalidInstanceError):
        result_to_json(i, SolveResult("x", ((0, 0, 1),), "exact-final"))


def test_sequence_roundtrip():
    i = inst([[3, 1], [2, 2], [1, 3]], 3)
    res = solve(i, "fpt")
    doc = result_to_json(i, res)
    back = sequence_from_json(i, doc)
    assert result_to_json(i, SolveResult("fpt", tuple(back), res.guarantee))["perRound"] == doc["perRound"]


def test_registry_names():
    assert set(ALGORITHMS) == {"approx", "anytime-approx", "fpt", "binary", "two-goods", "identical-exact",
                               "identical-greedy", "two-agent-anytime", "oracle"}
    with pytest.raises(ValueError):
        get("simplex")


def test_guarantee_slacks():
    i = inst(COUNTEREXAMPLE, 2)
    assert solve(i, "approx").slack == 15 and solve(i, "anytime-approx").slack == 75
    assert solve(inst([[6, 2, 1]] * 2, 3), "identical-greedy").slack == 4
    assert get("two-agent-anytime").anytime and not get("fpt").anytime


def test_options_reach_solvers():
    from egalmatch.core import LimitExceededError
    with pytest.raises(LimitExceededError):
        solve(inst(COUNTEREXAMPLE, 2), "fpt", Options(fpt_limit=1))


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, None]}) == '{\n  "b": 1,\n  "a": [\n    1,\n    null\n  ]\n}\n'
