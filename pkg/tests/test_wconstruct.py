import pytest

from hocat.wconstruct import (
    WBoundError,
    cube_basis,
    cube_boundary,
    face_value,
    letter_name,
    parse_letter,
    string_of,
    unit_check,
    w_construction,
)


def test_strings_alternate():
    assert string_of(0, 2) == (0, 1, 0)
    assert string_of(1, 3) == (1, 0, 1, 0)


def test_letter_names_round_trip():
    name = letter_name(0, 3, ("e", "v1"))
    assert name == "w0.3.e1"
    assert parse_letter(name) == (0, 3, ("e", "v1"))
    assert parse_letter("w1.1") == (1, 1, ())


def test_cube_complex():
    assert {n: len(b) for n, b in cube_basis(2).items()} == {0: 4, 1: 4, 2: 1}
    assert cube_boundary(("e", "e")) == {("v1", "e"): 1, ("v0", "e"): -1, ("e", "v1"): -1, ("e", "v0"): 1}


def test_faces_split_and_merge():
    assert face_value(0, 2, ("v1",)) == {("w1.1", "w0.1"): 1}
    assert face_value(0, 2, ("v0",)) == {(): 1}
    assert face_value(0, 3, ("v1", "e")) == {("w1.2.e", "w0.1"): 1}
    # the end absorbs an edge time through the augmentation, which vanishes on e
    assert face_value(0, 3, ("e", "v0")) == {}


def test_w1_dimensions():
    assert w_construction(1).category.dims() == {
        (0, 0): {0: 2, 1: 1},
        (0, 1): {0: 1},
        (1, 0): {0: 1},
        (1, 1): {0: 2, 1: 1},
    }


def test_w0_unit():
    assert unit_check(w_construction(0))


def test_bound_enforced():
    with pytest.raises(WBoundError):
        w_construction(9)
