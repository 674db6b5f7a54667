"""Arroids: degrees on a ground set plus a multiset of points with multiplicities.

An arroid of rank 2 abstracts an arrangement of plane curves: elements are
curves with their degrees, points are intersection points recorded by the
set of curves through them, and ``m_p(i, j)`` is the local intersection
multiplicity.  Rank 1 arroids arise by contraction and abstract the
intersection points lying on a single curve.

Element ids are opaque strings.  Every canonical ordering uses the order in
which elements were listed, never lexicographic order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegeneratePoint,
    RankError,
    UnknownElement,
    ValidationFailed,
)


def _key(ids: Iterable[str]) -> frozenset:
    return frozenset(ids)


@dataclass(frozen=True)
class Point:
    """One entry of the multiset of points.

    ``mult`` stores only the entries that differ from ``default``; keys are
    frozensets of ``rank`` distinct member ids.
    """

    members: tuple[str, ...]
    mult: Mapping[frozenset, int] = field(default_factory=dict)
    default: int = 1

    def m(self, *ids: str) -> int:
        for i in ids:
            if i not in self.members:
                raise UnknownElement(i)
        return self.mult.get(_key(ids), self.default)

    def table(self, rank: int) -> dict[tuple[str, ...], int]:
        """Full multiplicity table on tuples of distinct members (in member order)."""
        return {t: self.m(*t) for t in combinations(self.members, rank)}

    def is_transversal(self, rank: int) -> bool:
        return all(v == 1 for v in self.table(rank).values())

    def with_members(self, members: Sequence[str], mult: Mapping[frozenset, int]) -> "Point":
        return Point(tuple(members), dict(mult), self.default)


@dataclass(frozen=True)
class UniquePoint:
    members: tuple[str, ...]
    weight: int
    label: str


@dataclass(frozen=True)
class Violation:
    elements: tuple[str, ...]
    achieved: int
    expected: int


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def summary(self) -> str:
        if self.ok:
            return "bezout: ok"
        parts = [
            f"({','.join(v.elements)}) sums to {v.achieved}, expected {v.expected}"
            for v in self.violations
        ]
        return "bezout violated: " + "; ".join(parts)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"elements": list(v.elements), "achieved": v.achieved, "expected": v.expected}
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class Arroid:
    rank: int
    elements: tuple[tuple[str, int], ...]
    points: tuple[Point, ...]

    def __post_init__(self):
        if self.rank not in (1, 2):
            raise RankError(f"rank must be 1 or 2, got {self.rank}")
        elements = tuple((str(i), int(d)) for i, d in self.elements)
        ids = [i for i, _ in elements]
        if len(set(ids)) != len(ids):
            raise ValueError("element ids must be unique")
        for i, d in elements:
            if d < 1:
                raise ValueError(f"degree of {i} must be positive")
        order = {i: k for k, i in enumerate(ids)}
        deg = dict(elements)
        points = []
        for p in self.points:
            for i in p.members:
                if i not in order:
                    raise UnknownElement(i)
            if len(set(p.members)) != len(p.members):
                raise ValueError(f"point {p.members} repeats a member")
            if len(p.members) < self.rank:
                raise DegeneratePoint(f"point {p.members} has fewer than {self.rank} members")
            members = tuple(sorted(p.members, key=order.__getitem__))
            mult = {}
            for key, v in p.mult.items():
                key = _key(key)
                if len(key) != self.rank or not key <= set(members):
                    raise ValueError(f"multiplicity key {sorted(key)} does not fit point {members}")
                if v != p.default:
                    mult[key] = int(v)
            pt = Point(members, mult, int(p.default))
            for t, v in pt.table(self.rank).items():
                bound = max(deg[i] for i in t)
                if not 1 <= v <= bound:
                    raise ValueError(f"multiplicity {v} at {t} outside [1, {bound}]")
            points.append(pt)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "points", tuple(points))

    # ------------------------------------------------------------ access

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(i for i, _ in self.elements)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.elements)

    def degree(self, i: str) -> int:
        for j, d in self.elements:
            if j == i:
                return d
        raise UnknownElement(i)

    def index(self, i: str) -> int:
        try:
            return self.ids.index(i)
        except ValueError:
            raise UnknownElement(i) from None

    # -------------------------------------------------------- validation

    def validate(self) -> ValidationReport:
        """Check the Bézout property on tuples of distinct elements."""
        sums: Counter = Counter()
        for p in self.points:
            for t, v in p.table(self.rank).items():
                sums[_key(t)] += v
        deg = dict(self.elements)
        violations = []
        for t in combinations(self.ids, self.rank):
            expected = 1
            for i in t:
                expected *= deg[i]
            got = sums[_key(t)]
            if got != expected:
                violations.append(Violation(t, got, expected))
        return ValidationReport(not violations, tuple(violations))

    def is_transversal(self) -> bool:
        return all(p.is_transversal(self.rank) for p in self.points)

    def unique_points(self) -> list[UniquePoint]:
        """Merge transversal points with identical member sets, counting repeats.

        Labels are ``p0, p1, ...`` in order of first occurrence.
        """
        out: list[list] = []
        seen: dict[tuple[str, ...], int] = {}
        for p in self.points:
            if p.is_transversal(self.rank) and p.members in seen:
                out[seen[p.members]][1] += 1
                continue
            if p.is_transversal(self.rank):
                seen[p.members] = len(out)
            out.append([p.members, 1])
        return [UniquePoint(m, w, f"p{k}") for k, (m, w) in enumerate(out)]

    # --------------------------------------------- contraction, deletion

    def contract(self, i: str) -> "Arroid":
        """The rank 1 arroid of points on element ``i``."""
        if self.rank != 2:
            raise RankError("contraction needs a rank 2 arroid")
        di = self.degree(i)
        elements = tuple((j, di * d) for j, d in self.elements if j != i)
        points = []
        for p in self.points:
            if i not in p.members:
                continue
            rest = [j for j in p.members if j != i]
            mult = {_key([j]): p.m(i, j) for j in rest}
            points.append(Point(tuple(rest), mult, 1))
        return Arroid(1, elements, tuple(points))

    def delete(self, i: str) -> "Arroid":
        """Remove element ``i``; points that were only ``{i, j}`` disappear."""
        if self.rank != 2:
            raise RankError("deletion needs a rank 2 arroid")
        self.degree(i)
        elements = tuple((j, d) for j, d in self.elements if j != i)
        points = []
        for p in self.points:
            if i not in p.members:
                points.append(p)
                continue
            rest = tuple(j for j in p.members if j != i)
            if len(rest) == 1:
                continue
            if len(rest) < 2:
                raise DegeneratePoint(f"point {p.members} degenerates after deleting {i}")
            mult = {k: v for k, v in p.mult.items() if i not in k}
            points.append(Point(rest, mult, p.default))
        return Arroid(2, elements, tuple(points))

    # ------------------------------------------------------------ JSON

    def to_dict(self) -> dict:
        pts = []
        order = {i: k for k, i in enumerate(self.ids)}
        for p in self.points:
            mult: dict = {"default": p.default}
            for key, v in p.mult.items():
                mult[",".join(sorted(key, key=order.__getitem__))] = v
            pts.append({"members": list(p.members), "mult": mult})
        return {
            "rank": self.rank,
            "elements": [{"id": i, "degree": d} for i, d in self.elements],
            "points": pts,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Arroid":
        rank = int(data.get("rank", 2))
        elements = tuple((str(e["id"]), int(e["degree"])) for e in data["elements"])
        points = tuple(_point_from_json(p["members"], p.get("mult", {})) for p in data["points"])
        return cls(rank, elements, points)


def _point_from_json(members: Sequence[str], mult: Mapping) -> Point:
    mult = dict(mult)
    default = int(mult.pop("default", 1))
    table = {}
    for key, v in mult.items():
        ids = [s.strip() for s in key.split(",")] if isinstance(key, str) else list(key)
        table[_key(ids)] = int(v)
    return Point(tuple(str(m) for m in members), table, default)


def from_incidence(
    elements: Sequence[tuple[str, int]],
    incidences: Sequence[tuple[str, Sequence[str], Mapping]],
    rank: int = 2,
) -> Arroid:
    """Build and validate an arroid from labelled incidence records.

    Each incidence is ``(label, member ids, mult table)``; the table uses the
    JSON convention (``{"default": 1, "L1,C": 2}``).  Distinct records with
    the same members become repeated multiset entries.
    """
    points = tuple(_point_from_json(members, mult or {}) for _, members, mult in incidences)
    a = Arroid(rank, tuple(elements), points)
    report = a.validate()
    if not report.ok:
        raise ValidationFailed(report)
    return a


def from_rank3_matroid(ground: Sequence[str], flats: Iterable[Iterable[str]]) -> Arroid:
    """Arroid of a loop-free rank 3 matroid from its rank 2 flats.

    Flats with two elements may be omitted; every pair not covered by a
    listed flat becomes its own point.
    """
    ground = [str(g) for g in ground]
    flats = [tuple(str(x) for x in f) for f in flats]
    covered = {_key(t) for f in flats for t in combinations(f, 2)}
    for t in combinations(ground, 2):
        if _key(t) not in covered:
            flats.append(t)
    incid = [(f"f{k}", f, {}) for k, f in enumerate(flats)]
    return from_incidence([(g, 1) for g in ground], incid)
