import pytest

from hocat.chain import disk, sphere
from hocat.coherence import (
    INSTANCES,
    NotAnEquivalence,
    coherent_extension,
    contractible_instance,
    dg_category,
    interval_instance,
    zero_arrow_instance,
)


def test_dg_category_of_complexes():
    cat = dg_category([disk(1), sphere(0)])
    assert cat.objects == (0, 1)
    assert cat.dims()[(0, 0)] == {-1: 1, 0: 2, 1: 1}
    assert cat.dims()[(1, 1)] == {0: 1}


@pytest.mark.parametrize("k", [1, 2])
def test_interval_extension(k):
    cat, x, y, alpha = interval_instance()
    ext = coherent_extension(cat, x, y, alpha, k=k)
    assert ext.exact
    # every cube of W_k plus the next alpha cube
    assert (0, k + 2) in ext.cubes and (1, k + 1) in ext.cubes
    assert ext.values(0, 1) == {(): {0: 1}}


def test_contractible_extension():
    cat, x, y, alpha = contractible_instance()
    ext = coherent_extension(cat, x, y, alpha, k=2)
    assert ext.exact
    assert ext.detail["homotopy_equivalent"] == "YES"
    assert ext.as_dict()["cubes"]["beta1"]["letter"] == "w1.2"


def test_zero_arrow_refused():
    cat, x, y, alpha = zero_arrow_instance()
    with pytest.raises(NotAnEquivalence):
        coherent_extension(cat, x, y, alpha, k=1)


def test_instance_registry():
    assert set(INSTANCES) == {"interval", "contractible", "zero-arrow"}
