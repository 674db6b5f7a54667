import json

import pytest
from hypothesis import given, settings

from arroids.arrangement import arroid_of
from arroids.arroid import Arroid, Point
from arroids.errors import DimensionMismatch, NotTransversal, TorsionQuotient
from arroids.fan import (
    WeightedFan,
    build_arroid_fan,
    check_balanced,
    facet_graph_connected,
    isomorphic,
    reduced_star,
    support_contains,
    support_equal,
    unique_balance_at_ray,
    verify_modification,
)

from cases import base_arroids
from strategies import line_arrangements


def fourlines_fan():
    return build_arroid_fan(base_arroids()["fourlines"])


def test_fourlines_fan_shape():
    f = fourlines_fan()
    assert f.lattice.rank == 3
    vec = {r.label: r.vector for r in f.rays}
    assert vec["r:L1"] == (-1, -1, -1)
    assert vec["r:L2"] == (1, 0, 0)
    assert vec["r:p3"] == (1, 1, 0)
    assert len(f.cones) == 12 and all(c.weight == 1 for c in f.cones)
    assert check_balanced(f).ok
    assert facet_graph_connected(f)


def test_perturbed_weight_unbalanced_at_both_rays():
    f = fourlines_fan().with_weights({"c:L2|p3": 2})
    rep = check_balanced(f)
    assert not rep.ok
    assert set(rep.failures) == {"r:L2", "r:p3"}


def test_rank1_fan():
    a = Arroid(1, (("a", 1), ("b", 1)), (Point(("a",)), Point(("b",))))
    f = build_arroid_fan(a)
    assert sorted(r.vector for r in f.rays) == [(-1,), (1,)]
    assert check_balanced(f).ok
    with pytest.raises(DimensionMismatch):
        unique_balance_at_ray(f, "r:p0")


def test_rank1_saturated_lattice():
    a = base_arroids()["generic_lines_conic"].contract("C")
    f = build_arroid_fan(a)
    assert f.lattice.rank == 2
    assert check_balanced(f).ok
    # each line meets the conic twice, merged into one ray of weight 2
    assert len(f.rays) == 3 and all(c.weight == 2 for c in f.cones)


def test_torsion_and_non_transversal_rejected():
    a = Arroid(2, (("C", 2), ("D", 2)), (Point(("C", "D")),) * 4)
    with pytest.raises(TorsionQuotient):
        build_arroid_fan(a)
    t = Arroid(2, (("L", 1), ("C", 2)), (Point(("L", "C"), {frozenset({"L", "C"}): 2}),))
    with pytest.raises(NotTransversal):
        build_arroid_fan(t)


def test_star_at_point_ray():
    f = fourlines_fan()
    s = reduced_star(f, "r:p3")
    assert s.dim == 1 and len(s.rays) == 2
    assert check_balanced(s).ok


def test_star_at_element_ray_is_contraction():
    a = base_arroids()["fourlines"]
    f = build_arroid_fan(a)
    assert isomorphic(reduced_star(f, "r:L1"), build_arroid_fan(a.contract("L1")))


def test_concurrent_chords_balancing_space():
    f = build_arroid_fan(base_arroids()["concurrent_chords"])
    assert check_balanced(f).ok
    assert unique_balance_at_ray(f, "r:C").dim == 2
    assert unique_balance_at_ray(f, "r:1").dim == 1


def test_index_weights_after_deleting_a_line():
    a = base_arroids()["generic_lines_conic"].delete("L1")
    f = build_arroid_fan(a)
    assert {c.weight for c in f.cones} == {2}
    assert check_balanced(f).ok


def test_degenerate_cone_omitted():
    a = base_arroids()["concurrent_chords"].delete("3")
    f = build_arroid_fan(a)
    assert len(f.cones) == 6
    assert check_balanced(f).ok
    for v in [(1, 0), (0, 1), (-1, 0), (0, -1), (3, -7)]:
        assert support_contains(f, v)


def test_support_equal():
    f = fourlines_fan()
    assert support_equal(f, f)
    smaller = WeightedFan(f.lattice, f.rays, f.cones[1:], 2)
    assert not support_equal(f, smaller)
    assert not support_contains(f, (1, 1, 1))
    assert support_contains(f, (2, 1, 0))


def test_fan_json_round_trip():
    for a in base_arroids().values():
        f = build_arroid_fan(a)
        g = WeightedFan.from_dict(json.loads(json.dumps(f.to_dict())))
        assert g == f


def test_modification_fourlines():
    rep = verify_modification(base_arroids()["fourlines"], "L4")
    assert rep.ok
    assert rep.cone_forms["c:L4|p2"] == "vertical"
    assert rep.cone_forms["c:L1|p2"] == "vanishing"


@settings(max_examples=60, deadline=None)
@given(line_arrangements(max_lines=6))
def test_random_line_fans_balanced(arr):
    a = arroid_of(arr)
    f = build_arroid_fan(a)
    assert check_balanced(f).ok
    for r in f.rays:
        assert unique_balance_at_ray(f, r.label).dim == 1
