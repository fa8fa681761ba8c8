import json

import pytest

from hocat.oracle import SetOracle, chain_dimensions, compare_set, enumerate_strings
from hocat.presentation import Presentation, PresentationError, build, parse_word
from hocat.presets import arrow, chain_interval, free_generator, homotopy_cell, one_loop, random_presentations


def test_one_loop_counts_words():
    assert build(one_loop(), 4).category.dims()[(0, 0)] == {0: 5}
    assert build(one_loop(), 6).category.dims()[(0, 0)] == {0: 7}


def test_free_arrow():
    dims = build(arrow(), 3).category.dims()
    assert dims[(0, 1)] == {0: 1}
    assert dims[(1, 0)] == {}


def test_chain_interval_dimensions_grow_with_the_stage():
    small = build(chain_interval(), 2).category.dims()
    large = build(chain_interval(), 3).category.dims()
    for slot, dims in small.items():
        for degree, count in dims.items():
            assert large[slot].get(degree, 0) >= count


def test_presentation_json_round_trip():
    pres = Presentation.from_json(chain_interval())
    again = Presentation.from_json(json.loads(json.dumps(pres.to_json())))
    assert build(again, 2).category.dims() == build(pres, 2).category.dims()


def test_parse_word():
    assert parse_word(" g  f ") == ["g", "f"]


def test_unknown_generator_rejected():
    data = {"base": "finset", "attachments": [free_generator("finset", (0, 1), "f")]}
    data["attachments"].append({"slot": [0, 1], "X": {"elements": ["x"]}, "Y": {"elements": ["y", "z"]}, "u": {"x": "y"}, "attach": {"map": {"x": "k"}}})
    with pytest.raises(PresentationError):
        build(data, 3)


def test_wrong_slot_rejected():
    data = {"base": "chainQ", "attachments": [free_generator("chainQ", (0, 1), "f"), homotopy_cell((1, 1), "h", {"f": "1"})]}
    with pytest.raises(PresentationError):
        build(data, 3)


def test_unknown_base_rejected():
    with pytest.raises(PresentationError):
        Presentation.from_json({"base": "spectra", "attachments": []})


def test_random_families_are_seeded():
    assert random_presentations("finset", 3, seed=5) == random_presentations("finset", 3, seed=5)
    assert random_presentations("chainQ", 3, seed=5) != random_presentations("chainQ", 3, seed=6)


def test_oracles_agree_on_small_cases():
    data = one_loop()
    assert compare_set(build(data, 4).category, SetOracle(data, 4, seed=0))[0]
    data = random_presentations("chainQ", 1, seed=2)[0]
    assert build(data, 2).category.dims() == chain_dimensions(data, 2)


def test_enumerate_strings_by_hom():
    # f: 0 -> 1 and g: 1 -> 0, both of weight 1
    letters = {"f": (0, 1, 1, 0), "g": (1, 0, 1, 0)}
    strings = enumerate_strings(letters, 3)
    assert len(strings[(0, 0)]) == 2
    assert len(strings[(0, 1)]) == 2
    assert ("g", "f") in strings[(0, 0)]
