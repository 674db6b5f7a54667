import pytest
from hypothesis import given, settings

from arroids.arrangement import arroid_of
from arroids.errors import InconsistentVerdict, NotACycle
from arroids.fan import build_arroid_fan
from arroids.tropohom import (
    bm_complex,
    bm_homology,
    cells,
    check_boundary_squares_zero,
    check_thm,
    check_tpd,
    cohomology_dims,
    fundamental_class,
    fundamental_is_cycle,
    multi_tangent,
    ses_dim_check,
)

from cases import base_arroids
from strategies import line_arrangements


def fourlines_fan():
    return build_arroid_fan(base_arroids()["fourlines"])


def complement_betti(a):
    """Betti numbers of the complement of a line arrangement in the plane.

    b1 = n - 1, and b2 follows from the Euler characteristic
    3 - 2n + sum over points of (m_p - 1).
    """
    n = len(a.ids)
    excess = sum(len(u.members) - 1 for u in a.unique_points())
    return (1, n - 1, 1 - n + excess)


def test_fourlines_cohomology():
    f = fourlines_fan()
    assert cohomology_dims(f) == (1, 3, 3)
    h = bm_homology(f, integral=True)
    assert h.vanishes_off_top() and h.torsion_free()
    assert h.dims[(2, 2)] == 1 and h.dims[(1, 2)] == 3


def test_cells_and_tangent_spaces():
    f = fourlines_fan()
    assert cells(f, 0) == ["0"]
    assert len(cells(f, 1)) == 10 and len(cells(f, 2)) == 12
    assert multi_tangent(f, "r:L1", 1).dim == 3
    assert multi_tangent(f, "c:L1|p0", 2).dim == 1
    assert multi_tangent(f, "c:L1|p0", 1).dim == 2


def test_boundary_squares_zero():
    for a in base_arroids().values():
        f = build_arroid_fan(a)
        assert check_boundary_squares_zero(f)
        assert check_boundary_squares_zero(f, integral=True)


def test_integral_boundary_is_integral():
    cx = bm_complex(fourlines_fan(), 1, integral=True)
    assert all(isinstance(x, int) for M in cx.boundary.values() for row in M for x in row)


def test_fundamental_class():
    f = fourlines_fan()
    fc = fundamental_class(f)
    assert set(fc.components) == {c.label for c in f.cones}
    bad = f.with_weights({"c:L2|p3": 2})
    with pytest.raises(NotACycle):
        fundamental_class(bad)
    assert not fundamental_is_cycle(bad)


def test_tpd_fourlines():
    rep = check_tpd(fourlines_fan())
    assert rep.holds
    assert rep.to_dict()["per_p"]["1"]["image_rank"] == 3


def test_thm_routes():
    rep = check_thm(fourlines_fan())
    assert rep.thm and rep.route_b and not rep.failing_rays
    chords = check_thm(build_arroid_fan(base_arroids()["concurrent_chords"]))
    assert not chords.thm and not chords.route_b
    assert chords.failing_rays == ("r:C",)
    assert chords.balancing_dims["r:C"] == 2
    assert not chords.star_tpd["r:C"]


def test_inconsistent_verdict_is_an_error():
    assert issubclass(InconsistentVerdict, RuntimeError)


def test_ses_fourlines():
    rep = ses_dim_check(base_arroids()["fourlines"], "L4")
    assert rep.ok
    assert (rep.whole, rep.deleted, rep.contracted) == ((1, 3, 3), (1, 2, 1), (1, 2))


def test_lines_and_conic_cohomology():
    f = build_arroid_fan(base_arroids()["generic_lines_conic"])
    h = bm_homology(f)
    assert h.vanishes_off_top()
    assert h.cohomology_dims[0] == 1 and h.cohomology_dims[1] == 3


@settings(max_examples=40, deadline=None)
@given(line_arrangements(max_lines=6))
def test_line_fan_cohomology_matches_complement(arr):
    a = arroid_of(arr)
    f = build_arroid_fan(a)
    assert cohomology_dims(f) == complement_betti(a)
    assert check_boundary_squares_zero(f)
    h = bm_homology(f)
    assert h.vanishes_off_top()


def test_triple_point_cohomology_matches_complement():
    from arroids.arroid import from_rank3_matroid

    a = from_rank3_matroid("1234", [("1", "2", "3")])
    assert cohomology_dims(build_arroid_fan(a)) == complement_betti(a) == (1, 3, 2)


def test_thm_on_one_dimensional_fans():
    a = base_arroids()["concurrent_chords"]
    assert check_thm(build_arroid_fan(a.contract("1"))).thm
    rep = check_thm(build_arroid_fan(a.contract("C")))
    assert not rep.thm and not rep.route_b
    assert rep.balancing_dims == {"0": 2}
