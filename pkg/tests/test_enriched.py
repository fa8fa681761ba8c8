import pytest

from hocat.certificates import axiom_certificates
from hocat.enriched import arrow_category, check_compatibility, initial_category, opposite, swap_objects, unit_interval
from hocat.spaces import CHAIN, SET
from hocat.wconstruct import w_construction


@pytest.mark.parametrize("base", [CHAIN, SET])
def test_small_categories(base):
    assert unit_interval(base, 3).dims() == {slot: {0: 1} for slot in [(0, 0), (0, 1), (1, 0), (1, 1)]}
    assert initial_category(base, 3).dims() == {(0, 0): {0: 1}, (0, 1): {}, (1, 0): {}, (1, 1): {0: 1}}
    assert arrow_category(base, 3).dims()[(1, 0)] == {}


def test_w2_satisfies_the_axioms():
    cat = w_construction(2).category
    assert check_compatibility(cat) == []
    assert all(cert.holds for cert in axiom_certificates(cat))


def test_opposite_and_swap_exchange_homs():
    cat = arrow_category(CHAIN, 3)
    assert opposite(cat).dims()[(1, 0)] == {0: 1}
    assert swap_objects(cat).dims()[(1, 0)] == {0: 1}
    assert opposite(opposite(cat)).dims() == cat.dims()
