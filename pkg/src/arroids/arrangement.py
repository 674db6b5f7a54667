"""Arrangements of lines and conics in the projective plane.

An arrangement is either *explicit*, a list of curves with rational
homogeneous coefficients whose intersections are computed exactly, or
*abstract*, a list of elements with degrees plus intersection records.
Both feed the same downstream analysis: the arroid, the tropicalization
rays from the Picard sequence, clusters on a curve, real region counts and
the maximality report.

Conic coefficients are ordered ``xx, yy, zz, xy, xz, yz``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import isqrt, lcm
from typing import Mapping, Sequence

from . import exactlin as el
from .arroid import Arroid, from_incidence
from .errors import (
    IrrationalIntersection,
    PreconditionFailed,
    SingularConic,
    TorsionCokernel,
    UnknownCurve,
)
from .fan import Cone, QuotientLattice, Ray, WeightedFan, build_arroid_fan


# ------------------------------------------------------------------ curves


def _frac(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x.strip())


@dataclass(frozen=True)
class PlaneCurve:
    id: str
    kind: str
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(_frac(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if self.kind not in ("line", "conic"):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        want = 3 if self.kind == "line" else 6
        if len(coeffs) != want:
            raise ValueError(f"{self.kind} {self.id} needs {want} coefficients")
        if not any(coeffs):
            raise ValueError(f"curve {self.id} has all coefficients zero")
        if self.kind == "conic" and el.det(self.matrix()) == 0:
            raise SingularConic(f"conic {self.id} is singular")

    @property
    def degree(self) -> int:
        return 1 if self.kind == "line" else 2

    def matrix(self) -> list[list[Fraction]]:
        a, b, c, d, e, f = self.coeffs
        h = Fraction(1, 2)
        return [[a, h * d, h * e], [h * d, b, h * f], [h * e, h * f, c]]

    def __call__(self, p: Sequence) -> Fraction:
        if self.kind == "line":
            return sum(c * x for c, x in zip(self.coeffs, p))
        M = self.matrix()
        return sum(p[i] * M[i][j] * p[j] for i in range(3) for j in range(3))

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "coeffs": [str(c) for c in self.coeffs]}


def normalize_point(p: Sequence) -> tuple[Fraction, ...]:
    p = [Fraction(x) for x in p]
    k = next(i for i, x in enumerate(p) if x)
    return tuple(x / p[k] for x in p)


def _cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _binary_quadratic_roots(A, B, C):
    """Roots ``(s:t)`` of ``A s^2 + 2B st + C t^2`` with multiplicities."""
    if A == 0 and B == 0 and C == 0:
        raise ValueError("binary form vanishes identically")
    if A == 0:
        if B == 0:
            return [((Fraction(1), Fraction(0)), 2)]
        return [((Fraction(1), Fraction(0)), 1), ((-C, 2 * B), 1)]
    disc = B * B - A * C
    if disc == 0:
        return [((-B, A), 2)]
    r = _rational_sqrt(disc)
    if r is None:
        raise IrrationalIntersection(
            "intersection points are not rational; supply abstract incidence data instead"
        )
    return [((-B + r, A), 1), ((-B - r, A), 1)]


def _line_points(coeffs) -> tuple[list, list]:
    basis = el.kernel_basis([list(coeffs)])
    return basis[0], basis[1]


def line_conic(line: Sequence, M) -> list[tuple[tuple, int]]:
    P, Q = _line_points(line)
    MP = el.matvec(M, P)
    MQ = el.matvec(M, Q)
    A = sum(x * y for x, y in zip(P, MP))
    B = sum(x * y for x, y in zip(P, MQ))
    C = sum(x * y for x, y in zip(Q, MQ))
    out = []
    for (s, t), m in _binary_quadratic_roots(A, B, C):
        out.append((normalize_point([s * p + t * q for p, q in zip(P, Q)]), m))
    return out


def _rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Rational roots of a polynomial given from the leading coefficient down."""
    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    while ints and ints[0] == 0:
        ints.pop(0)
    roots = set()
    while len(ints) > 1 and ints[-1] == 0:
        ints.pop()
        roots.add(Fraction(0))
    if len(ints) <= 1:
        return sorted(roots)
    lead, const = ints[0], ints[-1]

    def divisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0]

    for p in divisors(const):
        for q in divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                val = Fraction(0)
                for c in ints:
                    val = val * cand + c
                if val == 0:
                    roots.add(cand)
    return sorted(roots)


def _pencil_det_coeffs(M1, M2) -> list[Fraction]:
    """Coefficients of ``det(M1 + λ M2)`` in λ, leading first."""
    samples = [Fraction(k) for k in range(4)]
    values = [el.det([[a + s * b for a, b in zip(r1, r2)] for r1, r2 in zip(M1, M2)]) for s in samples]
    V = [[s ** 3, s ** 2, s, 1] for s in samples]
    return el.solve(V, values)


def _split_degenerate(D) -> list[list[Fraction]] | None:
    """Lines whose product is the degenerate conic ``D``; ``None`` if not rational."""
    r = el.rank_q(D)
    if r == 1:
        row = next(row for row in D if any(row))
        return [row, row]
    k = el.kernel_basis(D)[0]
    for idx in range(3):
        if k[idx] == 0:
            continue
        # restrict to the coordinate line x_idx = 0, which misses the vertex
        others = [j for j in range(3) if j != idx]
        P = [Fraction(int(j == others[0])) for j in range(3)]
        Q = [Fraction(int(j == others[1])) for j in range(3)]
        MP, MQ = el.matvec(D, P), el.matvec(D, Q)
        A = sum(x * y for x, y in zip(P, MP))
        B = sum(x * y for x, y in zip(P, MQ))
        C = sum(x * y for x, y in zip(Q, MQ))
        try:
            roots = _binary_quadratic_roots(A, B, C)
        except IrrationalIntersection:
            return None
        lines = []
        for (s, t), m in roots:
            R = [s * p + t * q for p, q in zip(P, Q)]
            line = _cross(k, R)
            lines += [line] * m
        return lines
    return None


def conic_conic(M1, M2) -> list[tuple[tuple, int]]:
    coeffs = _pencil_det_coeffs(M1, M2)
    for lam in _rational_roots(coeffs):
        if lam == 0:
            continue
        D = [[a + lam * b for a, b in zip(r1, r2)] for r1, r2 in zip(M1, M2)]
        lines = _split_degenerate(D)
        if lines is None:
            continue
        mult: dict[tuple, int] = defaultdict(int)
        for line in lines:
            for p, m in line_conic(line, M1):
                mult[p] += m
        return sorted(mult.items())
    raise IrrationalIntersection(
        "conic intersection points are not rational; supply abstract incidence data instead"
    )


# ------------------------------------------------------------ arrangements


@dataclass(frozen=True)
class IntersectionRecord:
    members: tuple[str, ...]
    mults: Mapping[frozenset, int]
    point: tuple[Fraction, ...] | None = None
    label: str = ""

    def mult(self, i: str, j: str) -> int:
        return self.mults.get(frozenset((i, j)), 1)

    def to_dict(self) -> dict:
        order = {m: k for k, m in enumerate(self.members)}
        d = {
            "members": list(self.members),
            "mults": {
                ",".join(sorted(k, key=order.__getitem__)): v for k, v in sorted(
                    self.mults.items(), key=lambda kv: sorted(order[x] for x in kv[0])
                ) if v != 1
            },
        }
        if self.point is not None:
            d["point"] = [str(x) for x in self.point]
        if self.label:
            d["label"] = self.label
        return d


@dataclass(frozen=True)
class CurveArrangement:
    elements: tuple[tuple[str, int], ...]
    curves: tuple[PlaneCurve, ...] = ()
    abstract_records: tuple[IntersectionRecord, ...] = ()
    real_curves: bool = True
    all_real_points: bool = True

    @property
    def explicit(self) -> bool:
        return bool(self.curves)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(i for i, _ in self.elements)

    def degree(self, i: str) -> int:
        for j, d in self.elements:
            if j == i:
                return d
        raise UnknownCurve(i)

    @classmethod
    def from_curves(cls, curves: Sequence[PlaneCurve], real: bool = True) -> "CurveArrangement":
        curves = tuple(curves)
        ids = [c.id for c in curves]
        if len(set(ids)) != len(ids):
            raise ValueError("curve ids must be unique")
        for a, b in combinations(curves, 2):
            if a.kind == b.kind and el.rank_q([list(a.coeffs), list(b.coeffs)]) == 1:
                raise ValueError(f"curves {a.id} and {b.id} coincide")
        return cls(tuple((c.id, c.degree) for c in curves), curves, (), real, real)

    @classmethod
    def abstract(
        cls,
        elements: Sequence[tuple[str, int]],
        records: Sequence[IntersectionRecord],
        real_curves: bool = True,
        all_real_points: bool = True,
    ) -> "CurveArrangement":
        return cls(tuple(elements), (), tuple(records), real_curves, all_real_points)

    # ---------------------------------------------------------------- JSON

    def to_dict(self) -> dict:
        if self.explicit:
            return {"curves": [c.to_dict() for c in self.curves], "real": self.real_curves}
        return {
            "elements": [{"id": i, "degree": d} for i, d in self.elements],
            "records": [r.to_dict() for r in self.abstract_records],
            "flags": {"real_curves": self.real_curves, "all_real_points": self.all_real_points},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CurveArrangement":
        if "curves" in data:
            curves = [PlaneCurve(str(c["id"]), c["kind"], tuple(c["coeffs"])) for c in data["curves"]]
            return cls.from_curves(curves, bool(data.get("real", True)))
        elements = [(str(e["id"]), int(e["degree"])) for e in data["elements"]]
        records = []
        for k, r in enumerate(data["records"]):
            mults = {}
            for key, v in (r.get("mults") or {}).items():
                if key == "default":
                    continue
                mults[frozenset(s.strip() for s in key.split(","))] = int(v)
            records.append(IntersectionRecord(tuple(str(m) for m in r["members"]), mults, None, r.get("label", "")))
        flags = data.get("flags", {})
        return cls.abstract(
            elements,
            records,
            bool(flags.get("real_curves", True)),
            bool(flags.get("all_real_points", True)),
        )


def complete_generic(
    elements: Sequence[tuple[str, int]], records: Sequence[IntersectionRecord]
) -> list[IntersectionRecord]:
    """Add two-member records until every pair meets in ``d_i d_j`` points."""
    records = list(records)
    have: dict[frozenset, int] = defaultdict(int)
    for r in records:
        for a, b in combinations(r.members, 2):
            have[frozenset((a, b))] += r.mult(a, b)
    deg = dict(elements)
    for (a, _), (b, _) in combinations(elements, 2):
        missing = deg[a] * deg[b] - have[frozenset((a, b))]
        if missing < 0:
            raise ValueError(f"curves {a} and {b} already meet too often")
        for _ in range(missing):
            records.append(IntersectionRecord((a, b), {}))
    return records


def intersect(arr: CurveArrangement) -> list[IntersectionRecord]:
    """Intersection records of an explicit arrangement, merged by exact coordinates."""
    if not arr.explicit:
        return list(arr.abstract_records)
    members: dict[tuple, list[str]] = {}
    mults: dict[tuple, dict] = {}
    order: list[tuple] = []
    for a, b in combinations(arr.curves, 2):
        if a.kind == "line" and b.kind == "line":
            pts = [(normalize_point(_cross(a.coeffs, b.coeffs)), 1)]
        elif a.kind == "line":
            pts = line_conic(a.coeffs, b.matrix())
        elif b.kind == "line":
            pts = line_conic(b.coeffs, a.matrix())
        else:
            pts = conic_conic(a.matrix(), b.matrix())
        for p, m in pts:
            if p not in members:
                members[p] = []
                mults[p] = {}
                order.append(p)
            for c in (a.id, b.id):
                if c not in members[p]:
                    members[p].append(c)
            mults[p][frozenset((a.id, b.id))] = m
    rank = {c.id: k for k, c in enumerate(arr.curves)}
    out = []
    for k, p in enumerate(order):
        mem = tuple(sorted(members[p], key=rank.__getitem__))
        out.append(IntersectionRecord(mem, {key: v for key, v in mults[p].items() if v != 1}, p, f"x{k}"))
    return out


def arroid_of(arr: CurveArrangement) -> Arroid:
    records = intersect(arr)
    incid = []
    for k, r in enumerate(records):
        table = {",".join(sorted(key)): v for key, v in r.mults.items()}
        incid.append((r.label or f"x{k}", list(r.members), table))
    return from_incidence(list(arr.elements), incid)


# ------------------------------------------------------------------ checks


@dataclass(frozen=True)
class ArrangementFlags:
    very_affine: bool
    transverse: bool
    simple: bool
    generic_lines: tuple[str, ...] | None

    def to_dict(self) -> dict:
        return {
            "very_affine": self.very_affine,
            "transverse": self.transverse,
            "simple": self.simple,
            "generic_lines": list(self.generic_lines) if self.generic_lines else None,
            "simple_reading": "distinct intersection points have distinct member sets",
        }


def generic_line_triple(arr: CurveArrangement, records=None) -> tuple[str, ...] | None:
    """First triple of lines (in curve order) meeting in three distinct points."""
    records = intersect(arr) if records is None else records
    lines = [i for i, d in arr.elements if d == 1]
    for t in combinations(lines, 3):
        if not any(set(t) <= set(r.members) for r in records):
            return t
    return None


def checks(arr: CurveArrangement) -> ArrangementFlags:
    records = intersect(arr)
    a = arroid_of(arr)
    triple = generic_line_triple(arr, records)
    transverse = a.is_transversal()
    sets = [frozenset(r.members) for r in records]
    injective = len(set(sets)) == len(sets)
    low_degree = all(d <= 2 for _, d in arr.elements)
    return ArrangementFlags(triple is not None, transverse, transverse and low_degree and injective, triple)


# ---------------------------------------------------------- tropicalization


@dataclass(frozen=True)
class PicardResult:
    divisors: tuple[str, ...]
    exceptional: Mapping[str, tuple[str, ...]]
    phi: tuple[tuple[int, ...], ...]
    lattice: QuotientLattice
    ray_matrix: tuple[tuple[int, ...], ...]
    cones: tuple[tuple[str, str], ...]
    minimal_labels: tuple[str, ...]
    minimal_rays: tuple[tuple[int, ...], ...]

    def ray(self, label: str) -> tuple[int, ...]:
        k = self.divisors.index(label)
        return tuple(row[k] for row in self.ray_matrix)

    def to_dict(self) -> dict:
        return {
            "divisors": list(self.divisors),
            "exceptional": {k: list(v) for k, v in self.exceptional.items()},
            "phi": [list(r) for r in self.phi],
            "coordinates": [l for l in self.lattice.labels if l not in self.lattice.eliminated],
            "ray_matrix": [list(r) for r in self.ray_matrix],
            "cones": [list(c) for c in self.cones],
            "minimal_labels": list(self.minimal_labels),
            "minimal_rays": [list(r) for r in self.minimal_rays],
        }


def _columns(M):
    return [tuple(row[k] for row in M) for k in range(len(M[0]))] if M else []


def _coarsen(rays: dict[str, tuple], cones: list[tuple[str, str]]) -> list[str]:
    """Drop rays lying in the relative interior of the union of their two cones."""
    cones = [tuple(c) for c in cones]
    alive = list(rays)
    changed = True
    while changed:
        changed = False
        for r in list(alive):
            nbrs = [c[0] if c[1] == r else c[1] for c in cones if r in c]
            if len(nbrs) != 2 or nbrs[0] == nbrs[1]:
                continue
            a, b = rays[nbrs[0]], rays[nbrs[1]]
            coeffs = el.solve(el.transpose([list(a), list(b)]), list(rays[r]))
            if coeffs is None or not all(x > 0 for x in coeffs):
                continue
            cones = [c for c in cones if r not in c] + [(nbrs[0], nbrs[1])]
            alive.remove(r)
            changed = True
    return alive


def picard_rays(arr: CurveArrangement) -> PicardResult:
    """Rays of the tropicalization from the Picard short exact sequence.

    Every record with at least three members is blown up once.  The lattice
    map ``φ`` has one row per boundary divisor (strict transforms, then
    exceptional divisors ``E1, E2, ...``) and one column per Picard
    generator (``H``, then the exceptional classes).  Coordinates on the
    cokernel eliminate the exceptional divisors first and then the first
    curve with a unit entry in ``H``.
    """
    records = intersect(arr)
    curves = list(arr.ids)
    blown = [r for r in records if len(r.members) >= 3]
    exc = {f"E{k + 1}": r.members for k, r in enumerate(blown)}
    divisors = curves + list(exc)
    k = len(blown)
    phi = []
    for c in curves:
        row = [arr.degree(c)] + [-1 if c in r.members else 0 for r in blown]
        phi.append(row)
    for j in range(k):
        phi.append([0] + [int(i == j) for i in range(k)])
    snf = el.smith_normal_form(phi)
    if any(d != 1 for d in snf.elementary_divisors):
        raise TorsionCokernel(f"cokernel of φ has torsion: {snf.elementary_divisors}")
    # coordinate order puts exceptional divisors first so they are eliminated first
    coord = list(exc) + curves
    perm = [divisors.index(c) for c in coord]
    gens_cols = [[row[j] for row in phi] for j in range(k + 1)]
    gens = [[col[p] for p in perm] for col in gens_cols[1:] + gens_cols[:1]]
    lattice = QuotientLattice.build(coord, gens)
    rays = {}
    for d in divisors:
        rays[d] = lattice.unit(d)
    ray_matrix = el.transpose([list(rays[d]) for d in divisors])
    cones = []
    for a, b in combinations(curves, 2):
        if any(set(r.members) == {a, b} for r in records):
            cones.append((a, b))
    for e, members in exc.items():
        for c in members:
            cones.append((c, e))
    minimal = _coarsen(rays, cones)
    minimal = [d for d in divisors if d in minimal]
    return PicardResult(
        tuple(divisors),
        exc,
        tuple(tuple(r) for r in phi),
        lattice,
        tuple(tuple(r) for r in ray_matrix),
        tuple(cones),
        tuple(minimal),
        tuple(tuple(r) for r in el.transpose([list(rays[d]) for d in minimal])),
    )


def picard_fan(arr: CurveArrangement, target: QuotientLattice | None = None) -> WeightedFan:
    """Cone complex over the Picard rays, written in the lattice of the arroid fan.

    Each exceptional divisor ``E_p`` maps to ``Σ_{j∈p} e_j``, which is the
    relation its column of ``φ`` imposes.
    """
    pic = picard_rays(arr)
    if target is None:
        target = build_arroid_fan(arroid_of(arr)).lattice
    curves = list(arr.ids)
    rays = []
    vec = {}
    for d in pic.divisors:
        amb_pic = pic.lattice.lift(pic.ray(d))
        amb = [0] * len(curves)
        for lab, x in zip(pic.lattice.labels, amb_pic):
            if lab in pic.exceptional:
                for j in pic.exceptional[lab]:
                    amb[curves.index(j)] += x
            else:
                amb[curves.index(lab)] += x
        v = el.primitive(target.cls(amb))
        vec[d] = v
        rays.append(Ray(f"r:{d}", v))
    cones = tuple(Cone(f"c:{a}|{b}", (f"r:{a}", f"r:{b}"), 1) for a, b in pic.cones)
    return WeightedFan(target, tuple(rays), cones, 2)


def unimodular_witness(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]] | None:
    """Integer ``U`` with ``det U = ±1`` mapping the columns of ``A`` onto those of ``B``.

    Columns are compared as multisets.  Returns ``None`` if no such ``U``.
    """
    cols_a, cols_b = _columns(A), _columns(B)
    if len(cols_a) != len(cols_b) or not cols_a:
        return None
    r = len(A)
    if len(B) != r:
        return None
    idx = []
    for k, c in enumerate(cols_a):
        if el.rank_q([list(cols_a[j]) for j in idx] + [list(c)]) > len(idx):
            idx.append(k)
        if len(idx) == r:
            break
    if len(idx) < r:
        return None
    As = el.transpose([list(cols_a[j]) for j in idx])
    As_inv = el.inverse(As)
    target = sorted(cols_b)
    for choice in permutations(range(len(cols_b)), r):
        Bs = el.transpose([list(cols_b[j]) for j in choice])
        U = el.matmul(Bs, As_inv)
        if any(x.denominator != 1 for row in U for x in row):
            continue
        U = [[int(x) for x in row] for row in U]
        if abs(el.det(U)) != 1:
            continue
        image = sorted(tuple(el.matvec(U, c)) for c in cols_a)
        if image == target:
            return U
    return None


# ----------------------------------------------------------------- clusters


@dataclass(frozen=True)
class ClusterInfo:
    curves: tuple[str, ...]
    contains_line: bool
    conics: tuple[str, ...]
    sources: tuple[str, ...]
    reservoirs: tuple[str, ...]
    aqueducts: tuple[tuple[str, str, str], ...]
    is_balancing_supply_system: bool

    def to_dict(self) -> dict:
        return {
            "curves": list(self.curves),
            "contains_line": self.contains_line,
            "conics": list(self.conics),
            "sources": list(self.sources),
            "reservoirs": list(self.reservoirs),
            "aqueducts": [list(a) for a in self.aqueducts],
            "balancing_supply_system": self.is_balancing_supply_system,
        }


@dataclass(frozen=True)
class ClusterAnalysis:
    curve: str
    clusters: tuple[ClusterInfo, ...]

    def to_dict(self) -> dict:
        return {"curve": self.curve, "clusters": [c.to_dict() for c in self.clusters]}


def _joining_lines(arr, records, pts) -> set[str]:
    """Lines of the arrangement through at least two of the given records."""
    lines = [i for i, d in arr.elements if d == 1]
    out = set()
    for L in lines:
        if sum(1 for r in pts if L in r.members) >= 2:
            out.add(L)
    return out


def cluster_analysis(arr: CurveArrangement, curve: str) -> ClusterAnalysis:
    """Maximal clusters of curves on ``curve`` and their supply structure."""
    arr.degree(curve)
    records = [r for r in intersect(arr) if curve in r.members]
    order = {i: k for k, i in enumerate(arr.ids)}
    others = [i for i in arr.ids if i != curve and any(i in r.members for r in records)]
    parent = {i: i for i in others}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in records:
        mem = [m for m in r.members if m != curve]
        for m in mem[1:]:
            parent[find(m)] = find(mem[0])
    groups: dict[str, list[str]] = defaultdict(list)
    for i in others:
        groups[find(i)].append(i)
    comps = sorted(groups.values(), key=lambda g: min(order[x] for x in g))

    on_curve = {i: [r for r in records if i in r.members] for i in others}
    clusters = []
    for comp in comps:
        comp = sorted(comp, key=order.__getitem__)
        conics = [c for c in comp if arr.degree(c) == 2]
        lines = [c for c in comp if arr.degree(c) == 1]
        joined = {c: _joining_lines(arr, records, on_curve[c]) for c in conics}
        sources = [c for c in conics if len(on_curve[c]) == 4 and len(joined[c]) >= 5]
        reservoirs = [c for c in conics if len(on_curve[c]) == 4 and len(joined[c]) >= 4]
        aqueducts = []
        for c1, c2 in combinations(conics, 2):
            for L in lines:
                if any(L in r.members for r in on_curve[c1]) and any(L in r.members for r in on_curve[c2]):
                    aqueducts.append((L, c1, c2))
        bss = False
        if sources and all(c in reservoirs for c in conics):
            reach = set(sources)
            changed = True
            while changed:
                changed = False
                for _, c1, c2 in aqueducts:
                    if (c1 in reach) != (c2 in reach):
                        reach |= {c1, c2}
                        changed = True
            bss = set(conics) <= reach
        clusters.append(
            ClusterInfo(
                tuple(comp),
                bool(lines),
                tuple(conics),
                tuple(sources),
                tuple(reservoirs),
                tuple(aqueducts),
                bss,
            )
        )
    return ClusterAnalysis(curve, tuple(clusters))


def sufficient_unique_balance(arr: CurveArrangement, curve: str) -> str:
    """``"guaranteed"`` when the cluster criteria apply to ``curve``, else ``"unknown"``."""
    ca = cluster_analysis(arr, curve)
    if arr.degree(curve) == 1:
        ok = all(c.contains_line for c in ca.clusters)
    elif arr.degree(curve) == 2:
        ok = all(c.conics and c.is_balancing_supply_system for c in ca.clusters)
    else:
        ok = False
    return "guaranteed" if ok and ca.clusters else "unknown"


# --------------------------------------------------------------- real count


def real_b0(arr: CurveArrangement) -> int:
    """Connected components of the real complement, by adding curves one at a time.

    Starts from three generic lines (4 regions) and adds the remaining
    curves in order; each contributes the number of distinct points it
    shares with the curves already present.
    """
    flags = checks(arr)
    if not flags.simple:
        raise PreconditionFailed("the arrangement is not simple")
    if not (arr.real_curves and arr.all_real_points):
        raise PreconditionFailed("curves and intersection points must all be real")
    if flags.generic_lines is None:
        raise PreconditionFailed("no three lines meet generically")
    records = intersect(arr)
    present = set(flags.generic_lines)
    count = 4
    for c in arr.ids:
        if c in present:
            continue
        pts = [r for r in records if c in r.members and present & set(r.members)]
        count += len(pts)
        present.add(c)
    return count


# ------------------------------------------------------------- maximality


@dataclass(frozen=True)
class MaximalityReport:
    simple: bool
    real_curves: bool
    real_points: bool
    thm: bool | None
    conclusion: str
    real_b0: int | None = None
    tropical_betti: tuple[int, ...] | None = None
    smith_thom_equal: bool | None = None
    failing: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "simple": self.simple,
            "real_curves": self.real_curves,
            "real_points": self.real_points,
            "thm": self.thm,
            "conclusion": self.conclusion,
            "real_b0": self.real_b0,
            "tropical_betti": list(self.tropical_betti) if self.tropical_betti else None,
            "smith_thom_equal": self.smith_thom_equal,
            "failing": list(self.failing),
            "simple_reading": "distinct intersection points have distinct member sets",
        }


def maximality_report(arr: CurveArrangement) -> MaximalityReport:
    from .tropohom import check_thm, cohomology_dims

    flags = checks(arr)
    real_curves, real_points = arr.real_curves, arr.all_real_points
    thm = None
    betti = None
    if flags.transverse and flags.very_affine:
        fan = build_arroid_fan(arroid_of(arr))
        thm = check_thm(fan).thm
        betti = cohomology_dims(fan)
    failing = [
        name
        for name, ok in (
            ("simple", flags.simple),
            ("real_curves", real_curves),
            ("real_points", real_points),
            ("thm", bool(thm)),
        )
        if not ok
    ]
    if failing:
        return MaximalityReport(
            flags.simple, real_curves, real_points, thm, "no claim", None, betti, None, tuple(failing)
        )
    b0 = real_b0(arr)
    return MaximalityReport(
        True,
        True,
        True,
        True,
        "maximal",
        b0,
        betti,
        b0 == sum(betti),
        (),
    )


# ---------------------------------------------------------------- families


INF_LINES = (("L12", (1, 2)), ("L13", (1, 3)), ("L14", (1, 4)), ("L23", (2, 3)), ("L24", (2, 4)), ("L34", (3, 4)))


def inf_family(k: int) -> CurveArrangement:
    """Six lines through four base points plus ``k`` conics through the same points."""
    if k < 0:
        raise ValueError("k must be non-negative")
    conics = [f"C{j + 1}" for j in range(k)]
    elements = [(name, 1) for name, _ in INF_LINES] + [(c, 2) for c in conics]
    records = []
    for b in range(1, 5):
        members = tuple(name for name, pair in INF_LINES if b in pair) + tuple(conics)
        records.append(IntersectionRecord(members, {}, None, f"a{b}"))
    for (n1, p1), (n2, p2) in combinations(INF_LINES, 2):
        if not set(p1) & set(p2):
            records.append(IntersectionRecord((n1, n2), {}, None, f"d{len(records) - 3}"))
    return CurveArrangement.abstract(elements, records)


def inf_family_explicit(k: int) -> CurveArrangement:
    """A rational realization: base points (0,0), (2,0), (0,2), (2,2)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    lines = {
        "L12": (0, 1, 0),  # y = 0 through (0,0), (2,0)
        "L13": (1, 0, 0),  # x = 0 through (0,0), (0,2)
        "L14": (1, -1, 0),  # y = x through (0,0), (2,2)
        "L23": (1, 1, -2),  # x + y = 2 through (2,0), (0,2)
        "L24": (1, 0, -2),  # x = 2 through (2,0), (2,2)
        "L34": (0, 1, -2),  # y = 2 through (0,2), (2,2)
    }
    curves = [PlaneCurve(n, "line", c) for n, c in lines.items()]
    for t in range(1, k + 1):
        # x^2 - 2xz + t (y^2 - 2yz)
        curves.append(PlaneCurve(f"C{t}", "conic", (1, t, 0, 0, -2, -2 * t)))
    return CurveArrangement.from_curves(curves)
