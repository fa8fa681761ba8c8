import random

import pytest

from hocat.chain import (
    CHAIN_BASE,
    ChainComplex,
    ChainMap,
    SegmentH,
    cokernel,
    direct_sum,
    disk,
    homology,
    identity_map,
    pushout,
    random_chain_map,
    solve_strict_lift,
    sphere,
    sphere_to_disk,
    tensor,
    zero_complex,
    zero_map,
)


def test_disks_and_spheres():
    assert homology(disk(2)) == {}
    assert homology(sphere(-1)) == {-1: 1}
    assert sphere_to_disk(3).is_chain_map()
    assert sphere_to_disk(3).is_injective()


def test_validate_rejects_bad_differentials():
    with pytest.raises(ValueError):
        ChainComplex({0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[1]]})
    with pytest.raises(ValueError):
        ChainComplex({0: 1, 1: 2}, {1: [[1]]})


def test_json_round_trip():
    c = SegmentH.complex()
    assert ChainComplex.from_json(c.to_json()) == c


def test_segment_homology_and_axioms():
    assert homology(SegmentH.complex()) == {0: 1}
    assert SegmentH.check()
    assert SegmentH.mul("v0", "e") == {"e": 1}
    assert SegmentH.mul("v1", "e") == {}


def test_tensor_koszul_sign_squares_to_zero():
    square, _ = tensor(SegmentH.complex(), SegmentH.complex())
    square.validate()
    assert homology(square) == {0: 1}
    assert square.dims == {0: 4, 1: 4, 2: 1}


def test_direct_sum_and_pushout():
    total, left, right = direct_sum(disk(1), sphere(0))
    assert homology(total) == {0: 1}
    assert left.is_chain_map() and right.is_chain_map()
    # collapsing the boundary of D^1 leaves S^1
    p, _, _ = pushout(sphere_to_disk(1), zero_map(sphere(0), zero_complex()))
    assert homology(p) == {1: 1}


def test_cokernel_of_identity_is_zero():
    c = SegmentH.complex()
    quotient, proj = cokernel(identity_map(c))
    assert quotient.total_dim == 0
    assert proj.is_chain_map()


def test_strict_lift_against_trivial_fibration():
    # 0 -> D^1 lifts against D^1 -> 0
    target = disk(1)
    i = ChainMap(zero_complex(), target)
    p = ChainMap(target, zero_complex())
    lift = solve_strict_lift(i, p, ChainMap(zero_complex(), target), ChainMap(target, zero_complex()))
    assert lift is not None and lift.is_chain_map()
    # S^0 -> D^1 does not lift against S^0 -> 0 with the identity on top
    i = sphere_to_disk(1)
    p = ChainMap(sphere(0), zero_complex())
    assert solve_strict_lift(i, p, identity_map(sphere(0)), ChainMap(disk(1), zero_complex())) is None


def test_random_maps_are_chain_maps():
    rng = random.Random(0)
    a, b = SegmentH.complex(), tensor(SegmentH.complex(), disk(1))[0]
    for _ in range(10):
        f = random_chain_map(a, b, rng)
        assert f.is_chain_map()


def test_model_predicates():
    base = CHAIN_BASE
    assert base.is_cofibration(sphere_to_disk(2))
    assert base.is_weak_equivalence(ChainMap(zero_complex(), disk(4)))
    assert not base.is_weak_equivalence(sphere_to_disk(2))
    assert base.is_fibration(ChainMap(disk(1), zero_complex()))
