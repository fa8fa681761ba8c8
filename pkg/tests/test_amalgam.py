import pytest

from hocat.amalgam import AmalgamError, amalgamate, formula_checks, isomorphic_to_interval
from hocat.enriched import unit_interval
from hocat.spaces import CHAIN, SET
from hocat.wconstruct import w_construction


@pytest.mark.parametrize("base", [CHAIN, SET])
def test_interval_amalgam_is_interval(base):
    res = amalgamate(unit_interval(base, 3), unit_interval(base, 3), 3)
    assert res.category.objects == (0, 1)
    assert res.amalgam.L.objects == (0, 1, 2)
    assert isomorphic_to_interval(res.category)
    assert all(c.holds for c in res.certificates)


def test_w_amalgam_formulas():
    res = amalgamate(w_construction(1).category, w_construction(1).category, 2)
    checks = formula_checks(res.amalgam)
    assert checks and all(check.certificate.holds for check in checks)


def test_mixed_bases_rejected():
    with pytest.raises(AmalgamError):
        amalgamate(w_construction(1).category, unit_interval(SET, 3), 3)


def test_w_amalgam_is_not_the_interval():
    res = amalgamate(w_construction(1).category, w_construction(1).category, 2)
    assert not isomorphic_to_interval(res.category)


def test_stage_beyond_factors_rejected():
    with pytest.raises(AmalgamError):
        amalgamate(w_construction(1).category, w_construction(1).category, 5)
