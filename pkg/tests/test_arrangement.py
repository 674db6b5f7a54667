import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from arroids.arrangement import (
    CurveArrangement,
    arroid_of,
    checks,
    cluster_analysis,
    conic_conic,
    inf_family,
    inf_family_explicit,
    intersect,
    line_conic,
    maximality_report,
    picard_fan,
    picard_rays,
    real_b0,
    sufficient_unique_balance,
    unimodular_witness,
)
from arroids.errors import IrrationalIntersection, PreconditionFailed, SingularConic
from arroids.fan import build_arroid_fan, support_equal, unique_balance_at_ray

from cases import (
    LINES_AND_CONIC_MINIMAL,
    LINES_AND_CONIC_RAYS,
    cluster_balancing,
    cluster_figure,
    conic,
    fourlines,
    generic_lines_and_conic,
    line,
    lines_and_conic,
    three_generic_lines,
)
from oracles import real_region_count
from strategies import line_arrangements

x, y, z = sympy.symbols("x y z")


def sympy_poly(curve):
    c = [sympy.Rational(str(v)) for v in curve.coeffs]
    if curve.kind == "line":
        return c[0] * x + c[1] * y + c[2] * z
    return c[0] * x**2 + c[1] * y**2 + c[2] * z**2 + c[3] * x * y + c[4] * x * z + c[5] * y * z


# ------------------------------------------------------------- intersections


def test_line_conic_tangency_multiplicity():
    C = conic("C", 1, 1, -1, 0, 0, 0)
    pts = line_conic((1, 0, -1), C.matrix())
    assert pts == [((Fraction(1), Fraction(0), Fraction(1)), 2)]


def test_conic_conic_points_satisfy_both():
    C = conic("C", 1, 1, -1, 0, 0, 0)
    with pytest.raises(IrrationalIntersection):
        # y^2 = 2 z^2 on both
        conic_conic(C.matrix(), conic("D2", 1, 3, -5, 0, 0, 0).matrix())
    # through (+-3, +-4, 5), which lie on C
    E = conic("E", 175, -25, -47, 0, 0, 0)
    pts = conic_conic(C.matrix(), E.matrix())
    assert len(pts) == 4 and all(m == 1 for _, m in pts)
    for p, _ in pts:
        subs = dict(zip((x, y, z), (sympy.Rational(str(v)) for v in p)))
        assert sympy_poly(C).subs(subs) == 0 and sympy_poly(E).subs(subs) == 0


def test_singular_conic_rejected():
    with pytest.raises(SingularConic):
        conic("S", 1, -1, 0, 0, 0, 0)


def test_generic_lines_conic_records_agree_with_sympy():
    arr = generic_lines_and_conic()
    recs = intersect(arr)
    curves = {c.id: c for c in arr.curves}
    for r in recs:
        subs = dict(zip((x, y, z), (sympy.Rational(str(v)) for v in r.point)))
        for m in r.members:
            assert sympy_poly(curves[m]).subs(subs) == 0
    assert len(recs) == 9
    a = arroid_of(arr)
    assert a.validate().ok and a.is_transversal()


def test_arrangement_json_round_trip():
    for arr in (fourlines(), generic_lines_and_conic(), cluster_figure(), inf_family(2)):
        back = CurveArrangement.from_dict(json.loads(json.dumps(arr.to_dict())))
        assert arroid_of(back) == arroid_of(arr)


def test_checks():
    f = checks(fourlines())
    assert f.very_affine and f.transverse and f.simple
    assert f.generic_lines == ("L1", "L2", "L3")
    assert checks(lines_and_conic()).generic_lines == ("L1", "L2", "L3")
    concurrent = CurveArrangement.from_curves(
        [line("a", 1, 0, 0), line("b", 0, 1, 0), line("c", 1, -1, 0)]
    )
    assert checks(concurrent).generic_lines is None
    assert not checks(concurrent).very_affine


# ----------------------------------------------------------- tropicalization


def test_picard_rays_lines_and_conic():
    pic = picard_rays(lines_and_conic())
    assert pic.divisors == ("L1", "L2", "L3", "C", "E1", "E2", "E3")
    assert unimodular_witness(pic.ray_matrix, LINES_AND_CONIC_RAYS) is not None
    assert len(pic.minimal_labels) == 4
    assert unimodular_witness(pic.minimal_rays, LINES_AND_CONIC_MINIMAL) is not None


def test_unimodular_witness():
    A = [[1, 0, -1], [0, 1, -1]]
    U = unimodular_witness(A, [[0, 1, -1], [1, 0, -1]])
    assert U is not None
    assert unimodular_witness(A, [[2, 0, -2], [0, 1, -1]]) is None


def test_picard_support_matches_arroid_fan():
    for arr in (fourlines(), generic_lines_and_conic(), lines_and_conic()):
        fan = build_arroid_fan(arroid_of(arr))
        assert support_equal(picard_fan(arr, fan.lattice), fan)


# ------------------------------------------------------------------ clusters


def test_clusters_on_a_line():
    ca = cluster_analysis(cluster_figure(), "f")
    groups = sorted(tuple(sorted(c.curves)) for c in ca.clusters)
    assert groups == [("c", "d", "e"), ("g",), ("h", "i", "k")]
    by = {tuple(sorted(c.curves)): c for c in ca.clusters}
    assert not by[("c", "d", "e")].contains_line
    assert by[("h", "i", "k")].contains_line
    assert sufficient_unique_balance(cluster_figure(), "f") == "unknown"


def test_balancing_supply_system():
    arr = cluster_balancing()
    (cl,) = cluster_analysis(arr, "C").clusters
    assert cl.sources == ("Cp",)
    assert cl.reservoirs == ("Cp", "Cpp")
    assert cl.aqueducts == (("L", "Cp", "Cpp"),)
    assert cl.is_balancing_supply_system
    assert sufficient_unique_balance(arr, "C") == "guaranteed"


def test_cluster_verdict_is_sound():
    arr = cluster_balancing()
    fan = build_arroid_fan(arroid_of(arr))
    verdicts = {c: sufficient_unique_balance(arr, c) for c in arr.ids}
    assert verdicts["C"] == verdicts["L"] == "guaranteed"
    for c, v in verdicts.items():
        if v == "guaranteed":
            assert unique_balance_at_ray(fan, f"r:{c}").dim == 1
    # an "unknown" verdict is allowed to hide a non-unique balancing
    assert unique_balance_at_ray(fan, "r:Cpp").dim == 2


# --------------------------------------------------------- real components


@pytest.mark.parametrize(
    "arr, expected",
    [
        (three_generic_lines(), 4),
        (fourlines(), 7),
        (inf_family_explicit(0), 12),
        (inf_family_explicit(1), 16),
        (inf_family_explicit(2), 20),
        (lines_and_conic(), 7),
    ],
    ids=["three_lines", "fourlines", "inf0", "inf1", "inf2", "lines_conic"],
)
def test_real_b0_against_grid(arr, expected):
    assert real_b0(arr) == expected
    assert real_region_count(arr) == expected


def test_real_b0_preconditions():
    curves = [line("L1", 1, 0, 0), line("L2", 0, 1, 0), line("L3", 0, 0, 1)]
    with pytest.raises(PreconditionFailed):
        real_b0(CurveArrangement.from_curves(curves, real=False))
    concurrent = CurveArrangement.from_curves(
        [line("a", 1, 0, 0), line("b", 0, 1, 0), line("c", 1, 1, 0), line("d", 1, -1, 0)]
    )
    with pytest.raises(PreconditionFailed):
        real_b0(concurrent)
    # each line meets the conic twice, so the member set {L, C} repeats
    assert not checks(generic_lines_and_conic()).simple
    with pytest.raises(PreconditionFailed):
        real_b0(generic_lines_and_conic())


@settings(max_examples=40, deadline=None)
@given(line_arrangements())
def test_generic_lines_region_count(arr):
    # n generic lines cut the real projective plane into 1 + n(n-1)/2 regions
    n = len(arr.ids)
    assert real_b0(arr) == 1 + n * (n - 1) // 2


def test_maximality():
    rep = maximality_report(fourlines())
    assert rep.conclusion == "maximal"
    assert rep.real_b0 == 7 and rep.tropical_betti == (1, 3, 3) and rep.smith_thom_equal
    curves = [line("L1", 1, 0, 0), line("L2", 0, 1, 0), line("L3", 0, 0, 1)]
    rep = maximality_report(CurveArrangement.from_curves(curves, real=False))
    assert rep.conclusion == "no claim"
    assert "real_curves" in rep.failing


def test_inf_family():
    for k in range(4):
        arr = inf_family(k)
        assert len(intersect(arr)) == 7
        assert arroid_of(arr).validate().ok
    with pytest.raises(ValueError):
        inf_family(-1)
    for k in range(3):
        a, b = arroid_of(inf_family_explicit(k)), arroid_of(inf_family(k))
        assert a.elements == b.elements
        assert sorted(p.members for p in a.points) == sorted(p.members for p in b.points)


def concurrent_chords_arrangement():
    from arroids.arrangement import IntersectionRecord as R

    elements = [("1", 1), ("2", 1), ("3", 1), ("C", 2)]
    members = [("1", "2", "C"), ("1", "C"), ("2", "C"), ("3", "C"), ("3", "C"), ("1", "3"), ("2", "3")]
    return CurveArrangement.abstract(elements, [R(m, {}) for m in members])


def test_concurrent_chords_conic_unknown_and_no_claim():
    arr = concurrent_chords_arrangement()
    assert sufficient_unique_balance(arr, "C") == "unknown"
    fan = build_arroid_fan(arroid_of(arr))
    assert unique_balance_at_ray(fan, "r:C").dim == 2
    rep = maximality_report(arr)
    assert rep.thm is False
    assert rep.conclusion == "no claim"
    assert "thm" in rep.failing
