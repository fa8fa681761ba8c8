import pytest

from hocat.finset import SET_BASE, FinSetMap, FinSetObj, cartesian, coequalizer, identity_map, pushout, set_model_predicates, solve_strict_lift


def test_duplicate_elements_rejected():
    with pytest.raises(ValueError):
        FinSetObj(["a", "a"])


def test_map_must_be_total_and_land_in_target():
    a, b = FinSetObj(["x", "y"]), FinSetObj(["u"])
    with pytest.raises(ValueError):
        FinSetMap(a, b, {"x": "u"})
    with pytest.raises(ValueError):
        FinSetMap(a, b, {"x": "u", "y": "v"})


def test_model_predicates():
    a, b = FinSetObj([1, 2]), FinSetObj([1, 2, 3])
    inclusion = FinSetMap(a, b, {1: 1, 2: 2})
    assert set_model_predicates(inclusion) == (True, False, False)
    assert set_model_predicates(identity_map(a)) == (True, True, True)


def test_pushout_keeps_least_representatives():
    point, two = FinSetObj(["*"]), FinSetObj(["a", "b"])
    f = FinSetMap(point, two, {"*": "a"})
    g = FinSetMap(point, two, {"*": "b"})
    quotient, left, right = pushout(f, g)
    assert len(quotient) == 3
    assert left("a") == right("b") == (0, "a")


def test_coequalizer_collapses_orbits():
    s = FinSetObj([0, 1, 2, 3])
    shift = FinSetMap(s, s, {0: 1, 1: 2, 2: 0, 3: 3})
    quotient, proj = coequalizer(identity_map(s), shift)
    assert quotient.elements == [0, 3]
    assert proj(2) == 0


def test_strict_lift():
    empty, point, two = FinSetObj([]), FinSetObj(["*"]), FinSetObj(["a", "b"])
    i = FinSetMap(empty, point, {})
    p = FinSetMap(two, point, {"a": "*", "b": "*"})
    lift = solve_strict_lift(i, p, FinSetMap(empty, two, {}), identity_map(point))
    assert lift("*") == "a"
    empty_fibre = FinSetMap(empty, point, {})
    assert solve_strict_lift(identity_map(empty), empty_fibre, FinSetMap(empty, empty, {}), FinSetMap(empty, point, {})) is not None


def test_base_tensor_is_cartesian():
    a, b = FinSetObj([0, 1]), FinSetObj(["x", "y", "z"])
    assert len(SET_BASE.tensor(a, b)) == 6
    assert SET_BASE.tensor(a, b) == cartesian(a, b)
    assert len(SET_BASE.unit()) == 1 and len(SET_BASE.initial()) == 0
