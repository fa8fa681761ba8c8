import pytest

from hocat.chain import ChainMap, SegmentH, disk, homology, identity_map, sphere, sphere_to_disk, unit_complex, zero_complex, zero_map
from hocat.lifting import (
    LiftingError,
    cone,
    parallel_lift,
    random_parallel_lift_instance,
    random_weak_lift_instance,
    weak_lift,
    weak_lift_residuals,
)


def test_strict_square_gives_zero_homotopy():
    H, point = SegmentH.complex(), unit_complex()
    augmentation = ChainMap(H, point, {0: [[1, 1]]})
    inclusion = ChainMap(zero_complex(), disk(1))
    res = weak_lift(inclusion, augmentation, zero_map(zero_complex(), H), zero_map(disk(1), point))
    assert res.exact and res.homotopy.is_zero()
    assert all(not any(x for row in m for x in row) for m in res.phi.maps.values())


def test_identity_weak_equivalence_copies_the_bottom():
    H = SegmentH.complex()
    swap = ChainMap(H, H, {0: [[0, 1], [1, 0]], 1: [[-1]]})
    res = weak_lift(ChainMap(zero_complex(), H), identity_map(H), ChainMap(zero_complex(), H), swap)
    assert res.phi == swap and res.homotopy.is_zero()


def test_lift_through_a_non_fibration_needs_a_homotopy():
    H, point = SegmentH.complex(), unit_complex()
    start = ChainMap(point, H, {0: [[1], [0]]})
    end = ChainMap(sphere(0), H, {0: [[0], [1]]})
    res = weak_lift(ChainMap(zero_complex(), sphere(0)), start, ChainMap(zero_complex(), point), end)
    assert res.exact
    assert res.phi.maps == {0: [[1]]}
    # v0 - v1 = d(-e)
    assert res.homotopy.maps == {0: [[-1]]}


def test_non_weak_equivalence_rejected():
    with pytest.raises(LiftingError):
        weak_lift(
            sphere_to_disk(1),
            ChainMap(sphere(0), zero_complex()),
            identity_map(sphere(0)),
            zero_map(disk(1), zero_complex()),
        )


def test_residuals_detect_a_wrong_answer():
    H, point = SegmentH.complex(), unit_complex()
    start = ChainMap(point, H, {0: [[1], [0]]})
    end = ChainMap(sphere(0), H, {0: [[0], [1]]})
    gamma, top = ChainMap(zero_complex(), sphere(0)), ChainMap(zero_complex(), point)
    res = weak_lift(gamma, start, top, end)
    residuals = weak_lift_residuals(gamma, start, top, end, zero_map(sphere(0), point), res.homotopy)
    assert residuals["w phi - bottom = dh + hd"] != 0
    assert residuals["phi is a chain map"] == 0


@pytest.mark.parametrize("seed", range(5))
def test_random_instances(seed):
    inst = random_weak_lift_instance(seed)
    assert weak_lift(inst.gamma, inst.w, inst.top, inst.bottom).exact
    par = random_parallel_lift_instance(seed).solve()
    assert par.exact
    assert set(par.steps) >= {"weak_lift"}


def test_parallel_lift_checks_its_hypotheses():
    inst = random_parallel_lift_instance(0)
    with pytest.raises(LiftingError):
        parallel_lift(inst.a, inst.gamma, inst.gamma, inst.delta, inst.w, inst.j, inst.l)


def test_cone_is_acyclic():
    assert homology(cone(SegmentH.complex())) == {}
