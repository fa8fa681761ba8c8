from hocat.enriched import arrow_category, unit_interval
from hocat.homotopy import (
    CERTIFIED,
    FAILED,
    NO,
    UNKNOWN,
    YES,
    certify_category,
    check_interval,
    functor_to_terminal,
    homology_table,
    homotopy_equivalent,
    identity_functor,
    is_dwyer_kan,
    local_predicates,
    pi0,
)
from hocat.presets import arrow, chain_interval, set_interval_attempt
from hocat.spaces import CHAIN, SET
from hocat.wconstruct import w_construction


def test_unit_interval_is_certified():
    for base in (CHAIN, SET):
        assert certify_category(unit_interval(base, 3), 3, 3).verdict == CERTIFIED


def test_arrow_is_not_an_interval():
    cert = check_interval(arrow("chainQ"), 3, 2)
    assert cert.verdict == FAILED and not cert.pi0_ok


def test_set_interval_attempt_fails():
    assert check_interval(set_interval_attempt(), 3, 2).verdict == FAILED


def test_truncated_chain_interval_is_undecided():
    assert check_interval(chain_interval(), 3, 2).verdict == UNKNOWN


def test_pi0_of_interval():
    P = pi0(unit_interval(CHAIN, 3))
    assert P.homs == {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): 1}
    assert P.check()


def test_homotopy_equivalence_of_objects():
    assert homotopy_equivalent(unit_interval(CHAIN, 3), 0, 1).verdict == YES
    assert homotopy_equivalent(arrow_category(CHAIN, 3), 0, 1).verdict == NO
    assert homotopy_equivalent(arrow_category(CHAIN, 3), 1, 1).verdict == YES


def test_local_predicates_of_terminal_functors():
    interval = [v.holds for v in local_predicates(functor_to_terminal(unit_interval(CHAIN, 3)))]
    assert interval == [True, True, True]
    arrow_verdicts = [v.holds for v in local_predicates(functor_to_terminal(arrow_category(CHAIN, 3)))]
    assert arrow_verdicts == [False, False, False]


def test_identity_is_a_trivial_fibration():
    cat = w_construction(1).category
    assert all(v.holds for v in local_predicates(identity_functor(cat)))


def test_dwyer_kan():
    assert is_dwyer_kan(functor_to_terminal(w_construction(2).category)).holds
    assert not is_dwyer_kan(functor_to_terminal(arrow_category(CHAIN, 3))).holds


def test_homology_table_of_w2():
    cat = w_construction(2).category
    for space in cat.homs.values():
        table = homology_table(space, cat.stage, 3)
        assert table.get(0) == 1 and not table.get(1)
