import pytest

from hocat.base import BudgetExceeded, budget
from hocat.spaces import CHAIN, SET, Linear, free_space, present, tensor


def _segment(stage=3):
    return free_space(CHAIN, stage, [("x", 0, 0, {}), ("y", 1, 1, {"x": 1}), ("z", 4, 0, {})])


def test_free_space_drops_terms_beyond_the_stage():
    space = _segment()
    assert space.terms == ("x", "y")
    assert space.weights == (0, 1)
    assert space.prefix(0) == 1
    assert space.apply_d(space.vec("y")) == space.vec("x")


def test_tensor_is_a_complex():
    space = _segment()
    square = tensor([space, space], 3)
    assert square.dims_by_degree() == {0: 1, 1: 2, 2: 1}
    assert all(not square.apply_d(square.apply_d({i: 1})) for i in range(square.dim))


def test_linear_relations_identify_terms():
    space = present(CHAIN, 3, [("x", 0, 0), ("x2", 0, 0)], [({"x": 1}, {"x2": 1})], lambda term: {})
    assert space.dim == 1 and space.vec("x") == space.vec("x2")


def test_set_relations_glue_elements():
    space = present(SET, 3, [("p", 0, 0), ("q", 0, 0), ("r", 1, 0)], [({"p": 1}, {"q": 1})])
    assert space.dim == 2
    assert space.vec("p") == space.vec("q") != space.vec("r")


def test_conflicting_gradings_rejected():
    with pytest.raises(ValueError):
        present(SET, 3, [("p", 0, 0), ("p", 1, 0)])


def test_budget_bounds_spanning_terms():
    with budget(2), pytest.raises(BudgetExceeded):
        present(CHAIN, 3, [("x", 0, 0), ("y", 0, 0), ("z", 0, 0)], [], lambda term: {})


def test_identity_map_is_an_isomorphism():
    space = _segment()
    ident = Linear.identity(space)
    assert ident.is_identity() and ident.is_chain_map() and ident.is_iso()
