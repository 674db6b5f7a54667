"""Named arrangements and arroids shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from arroids.arrangement import (
    CurveArrangement,
    IntersectionRecord,
    PlaneCurve,
    arroid_of,
    complete_generic,
    inf_family,
)
from arroids.arroid import Arroid, from_incidence


def line(name, a, b, c):
    return PlaneCurve(name, "line", (a, b, c))


def conic(name, *coeffs):
    return PlaneCurve(name, "conic", tuple(Fraction(c) for c in coeffs))


def fourlines() -> CurveArrangement:
    return CurveArrangement.from_curves(
        [line("L1", 1, 0, 0), line("L2", 0, 1, 0), line("L3", 0, 0, 1), line("L4", 1, -1, 1)]
    )


def three_generic_lines() -> CurveArrangement:
    return CurveArrangement.from_curves([line("L1", 1, 0, 0), line("L2", 0, 1, 0), line("L3", 0, 0, 1)])


def lines_and_conic() -> CurveArrangement:
    """Coordinate axes plus a conic through their three intersection points."""
    axes = [line("L1", 1, 0, 0), line("L2", 0, 1, 0), line("L3", 0, 0, 1)]
    return CurveArrangement.from_curves(axes + [conic("C", 0, 0, 0, 1, 1, 1)])


def generic_lines_and_conic() -> CurveArrangement:
    """Coordinate axes plus a conic meeting each axis in two further points."""
    axes = [line("L1", 1, 0, 0), line("L2", 0, 1, 0), line("L3", 0, 0, 1)]
    h = Fraction(-5, 2)
    return CurveArrangement.from_curves(axes + [conic("C", 1, 1, 1, h, h, h)])


# Published incidence data for the lines+conic arroid.
LINES_AND_CONIC_RAYS = ((-1, 1, 0, 0, 1, -1, 0), (-1, 0, 1, 0, 1, 0, -1), (-2, 0, 0, 1, 1, -1, -1))
LINES_AND_CONIC_MINIMAL = ((-1, 0, 0, 1), (0, -1, 0, 1), (-1, -1, 1, 1))


def concurrent_chords() -> Arroid:
    """Three lines and a conic: chords 1 and 2 meet on the conic, line 3 crosses it twice."""
    elements = [("1", 1), ("2", 1), ("3", 1), ("C", 2)]
    incid = [
        ("a", ("1", "2", "C"), {}),
        ("b", ("1", "C"), {}),
        ("c", ("2", "C"), {}),
        ("d1", ("3", "C"), {}),
        ("d2", ("3", "C"), {}),
        ("e", ("1", "3"), {}),
        ("f", ("2", "3"), {}),
    ]
    return from_incidence(elements, incid)


def cluster_balancing() -> CurveArrangement:
    """Abstract configuration around a conic C with a source C', a reservoir C'' and an aqueduct L."""
    lines = ["s1", "s2", "s3", "s4", "s5", "s6", "v-7", "v-3", "v7", "v3", "L"]
    elements = [(x, 1) for x in lines] + [("C", 2), ("Cp", 2), ("Cpp", 2)]
    R = IntersectionRecord
    records = [
        R(("C", "Cp", "s1", "s3", "v-7"), {}),
        R(("C", "Cp", "s2", "s4", "v-7"), {}),
        R(("C", "Cp", "s1", "s4", "v-3", "L"), {}),
        R(("C", "Cp", "s2", "s3", "v-3"), {}),
        R(("C", "Cpp", "s6", "v7"), {}),
        R(("C", "Cpp", "s5", "v7"), {}),
        R(("C", "Cpp", "s6", "v3"), {}),
        R(("C", "Cpp", "s5", "v3", "L"), {}),
    ]
    return CurveArrangement.abstract(elements, complete_generic(elements, records))


def cluster_figure() -> CurveArrangement:
    """Conics c, d, e, k and lines f, g, h, i with the incidences on f used for clusters."""
    elements = [("f", 1), ("g", 1), ("h", 1), ("i", 1), ("c", 2), ("d", 2), ("e", 2), ("k", 2)]
    R = IntersectionRecord
    records = [
        R(("f", "c", "e"), {}),
        R(("f", "c", "d"), {}),
        R(("f", "d", "e"), {}),
        R(("f", "h", "k"), {}),
        R(("f", "i", "k"), {}),
        R(("f", "g"), {}),
    ]
    return CurveArrangement.abstract(elements, complete_generic(elements, records))


def base_arroids() -> dict[str, Arroid]:
    return {
        "fourlines": arroid_of(fourlines()),
        "generic_lines_conic": arroid_of(generic_lines_and_conic()),
        "concurrent_chords": concurrent_chords(),
        "inf0": arroid_of(inf_family(0)),
        "inf1": arroid_of(inf_family(1)),
        "inf2": arroid_of(inf_family(2)),
    }


def suite() -> dict[str, Arroid]:
    """Base arroids with every contraction and every deletion."""
    out = {}
    for name, a in base_arroids().items():
        out[name] = a
        for i in a.ids:
            out[f"{name}/{i}"] = a.contract(i)
            out[f"{name}\\{i}"] = a.delete(i)
    return out


def rank2_suite() -> dict[str, Arroid]:
    return {k: v for k, v in suite().items() if v.rank == 2}
