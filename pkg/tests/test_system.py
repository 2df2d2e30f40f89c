from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from galecert import corpus, system
from galecert.system import InputError, evaluate, parse, parse_sweep

F = Fraction
SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


def test_expressions_evaluate_exactly():
    env = {"c": F(1, 2)}
    assert evaluate("-(3*c + 8)", env) == F(-19, 2)
    assert evaluate("c**2 - 1/4", env) == 0
    assert evaluate(" 7/3 ") == F(7, 3)
    assert evaluate(5) == 5


@pytest.mark.parametrize("bad", ["0.5", 0.5, "1e3", "c + 0.1"])
def test_floats_are_rejected_by_default(bad):
    with pytest.raises(InputError):
        evaluate(bad, {"c": F(1)})
    assert evaluate(bad, {"c": F(1)}, allow_float=True) is not None


@pytest.mark.parametrize("bad", ["__import__('os')", "c(1)", "1/0", "2**c", "[1]", True])
def test_unsafe_or_invalid_expressions_are_rejected(bad):
    with pytest.raises(InputError):
        evaluate(bad, {"c": F(1, 3)})


def test_three_roots_file_matches_generator():
    desc = system.load(str(SYSTEMS / "three_roots.json"))
    inst = corpus.three_roots(F(1, 2))
    assert desc.C == inst.C
    assert desc.points == inst.points
    B, D = desc.gale()
    assert B == inst.B and D == inst.D
    other = desc.with_parameters(c=F(8, 7))
    assert other.C == corpus.three_roots(F(8, 7)).C
    assert desc.parameters["c"] == F(1, 2)  # the original is untouched


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(
    st.just(d),
    st.lists(st.lists(st.integers(0, 6), min_size=d, max_size=d), min_size=d + 1, max_size=d + 3),
)).flatmap(lambda t: st.tuples(
    st.just(t[1]),
    st.lists(st.lists(rationals(), min_size=len(t[1]), max_size=len(t[1])), min_size=t[0], max_size=t[0]),
)))
def test_json_round_trip(data):
    exps, C = data
    doc = {"exponents": exps, "coefficients": [[str(x) for x in r] for r in C]}
    desc = parse(json.dumps(doc))
    again = parse(desc.to_json())
    assert again.C == desc.C == [[F(x) for x in r] for r in C]
    assert again.points == desc.points


def test_expression_coefficients_survive_round_trip():
    desc = system.load(str(SYSTEMS / "three_roots.json"))
    doc = desc.to_dict()
    assert doc["coefficients"][1][0] == "-(3*c + 8)"
    assert parse(doc).C == desc.C


@pytest.mark.parametrize("doc, msg", [
    ({"coefficients": [[1]]}, "exponents"),
    ({"exponents": [[0], [1]], "coefficients": [[1, 2, 3]]}, "entries"),
    ({"exponents": [[0], [1]], "coefficients": [[1, "z"]]}, "unknown parameter"),
    ({"d": 2, "exponents": [[0], [1]], "coefficients": [[1, 2]]}, "entries"),
    ({"exponents": [[0], [1]], "coefficients": [[1, 2]], "gale": {"B": [[1]]}}, "B and D"),
    ({"exponents": [[0], [1, 2]], "coefficients": [[1, 2]]}, "ragged"),
])
def test_malformed_documents(doc, msg):
    with pytest.raises(InputError, match=msg):
        parse(doc)


def test_invalid_json_text():
    with pytest.raises(InputError):
        parse("{not json")
    with pytest.raises(InputError):
        system.load("/nonexistent/system.json")


def test_sweep_values_are_exact_and_equally_spaced():
    name, vals = parse_sweep("c=0:1:5")
    assert name == "c"
    assert vals == [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
    assert parse_sweep("c=8/7") == ("c", [F(8, 7)])
    assert parse_sweep("c=1:2:1") == ("c", [F(1)])
    for bad in ("c", "c=1:2", "c=1:2:0", "c=1:2:1/2", "1c=1"):
        with pytest.raises(InputError):
            parse_sweep(bad)
