"""Weighted rational fans of dimension 1 and 2 in quotient lattices.

Every fan here lives in ``Z^labels / K`` for a saturated sublattice ``K``;
for the fan of an arroid ``K`` is spanned by the degree vector.  Vectors are
always given in the coordinates of a :class:`QuotientLattice`, which fixes a
projection ``Z^labels -> Z^r`` and a section back.

Ray labels are ``r:<element id>`` for element rays and ``r:p<k>`` for point
rays (``k`` indexes unique points in order of first occurrence).  Two
dimensional cones are ``c:<element id>|p<k>`` with generators ordered
(element ray, point ray); one dimensional cones are ``c:p<k>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import exactlin as el
from .arroid import Arroid
from .errors import (
    DimensionMismatch,
    NotTransversal,
    TorsionQuotient,
    UnknownCone,
    UnknownRay,
)


# ------------------------------------------------------------------ lattice


@dataclass(frozen=True)
class QuotientLattice:
    labels: tuple[str, ...]
    kernel: tuple[tuple[int, ...], ...]
    projection: tuple[tuple[int, ...], ...]
    section: tuple[tuple[int, ...], ...]
    eliminated: tuple[str, ...]

    @classmethod
    def build(cls, labels: Sequence[str], gens: Sequence[Sequence[int]], saturate: bool = False):
        labels = tuple(labels)
        n = len(labels)
        gens = [list(g) for g in gens if any(g)]
        if len(gens) > 1:
            basis = el.saturation_basis(gens, n) if saturate else None
            if basis is not None and len(basis) == 1:
                gens = basis
        proj, sec, elim = el.quotient_data(n, gens, saturate=saturate)
        kernel = el.saturation_basis(gens, n) if gens else []
        if len(kernel) == 1:
            kernel = [list(el.primitive(gens[0]))]
        return cls(
            labels,
            tuple(tuple(k) for k in kernel),
            tuple(tuple(r) for r in proj),
            tuple(tuple(r) for r in sec),
            tuple(labels[k] for k in elim),
        )

    @property
    def rank(self) -> int:
        return len(self.projection)

    @property
    def ambient_dim(self) -> int:
        return len(self.labels)

    def cls(self, v: Sequence) -> tuple:
        """Class of an ambient vector, in quotient coordinates."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"expected {self.ambient_dim} ambient coordinates")
        return tuple(el.matvec(self.projection, v))

    def unit(self, label: str) -> tuple[int, ...]:
        v = [0] * self.ambient_dim
        v[self.labels.index(label)] = 1
        return self.cls(v)

    def lift(self, x: Sequence) -> list:
        if len(x) != self.rank:
            raise DimensionMismatch(f"expected {self.rank} quotient coordinates")
        return el.matvec(self.section, x) if self.section and self.section[0] else [0] * self.ambient_dim

    def same_as(self, other: "QuotientLattice") -> bool:
        if self.labels != other.labels or len(self.kernel) != len(other.kernel):
            return False
        return all(el.in_span(self.kernel, k) for k in other.kernel) if self.kernel else True

    def transport(self, x: Sequence, source: "QuotientLattice") -> tuple:
        """Rewrite a vector given in ``source`` coordinates in this lattice."""
        if not self.same_as(source):
            raise DimensionMismatch("lattices differ")
        return self.cls(source.lift(x))

    def to_dict(self) -> dict:
        if len(self.eliminated) == 1:
            elim = self.eliminated[0]
        elif not self.eliminated:
            elim = None
        else:
            elim = list(self.eliminated)
        return {
            "labels": list(self.labels),
            "degrees": list(self.kernel[0]) if self.kernel else [],
            "kernel": [list(k) for k in self.kernel],
            "eliminated": elim,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "QuotientLattice":
        kernel = data.get("kernel")
        if kernel is None:
            kernel = [data["degrees"]] if data.get("degrees") else []
        return cls.build(data["labels"], kernel, saturate=True)


# --------------------------------------------------------------------- fans


@dataclass(frozen=True)
class Ray:
    label: str
    vector: tuple[int, ...]


@dataclass(frozen=True)
class Cone:
    label: str
    rays: tuple[str, ...]
    weight: int


@dataclass(frozen=True)
class WeightedFan:
    lattice: QuotientLattice
    rays: tuple[Ray, ...]
    cones: tuple[Cone, ...]
    dim: int

    def __post_init__(self):
        labels = [r.label for r in self.rays]
        if len(set(labels)) != len(labels):
            raise ValueError("ray labels must be unique")
        clabels = [c.label for c in self.cones]
        if len(set(clabels)) != len(clabels):
            raise ValueError("cone labels must be unique")
        for r in self.rays:
            if len(r.vector) != self.lattice.rank:
                raise DimensionMismatch(f"ray {r.label} has wrong length")
            if el.content(r.vector) != 1:
                raise ValueError(f"ray {r.label} is not primitive")
        known = set(labels)
        for c in self.cones:
            if len(c.rays) != self.dim or not set(c.rays) <= known:
                raise UnknownRay(f"cone {c.label} has bad rays {c.rays}")
            if self.dim == 2 and el.rank_q([self.ray(x) for x in c.rays]) != 2:
                raise ValueError(f"cone {c.label} has dependent rays")

    def ray(self, label: str) -> tuple[int, ...]:
        for r in self.rays:
            if r.label == label:
                return r.vector
        raise UnknownRay(label)

    def cone(self, label: str) -> Cone:
        for c in self.cones:
            if c.label == label:
                return c
        raise UnknownCone(label)

    def cones_containing(self, ray: str) -> list[Cone]:
        self.ray(ray)
        return [c for c in self.cones if ray in c.rays]

    def with_weights(self, weights: Mapping[str, int]) -> "WeightedFan":
        cones = tuple(Cone(c.label, c.rays, weights.get(c.label, c.weight)) for c in self.cones)
        return WeightedFan(self.lattice, self.rays, cones, self.dim)

    def to_dict(self) -> dict:
        return {
            "quotient": self.lattice.to_dict(),
            "dim": self.dim,
            "rays": [{"label": r.label, "vector": list(r.vector)} for r in self.rays],
            "cones": [
                {"label": c.label, "rays": list(c.rays), "weight": c.weight} for c in self.cones
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "WeightedFan":
        lattice = QuotientLattice.from_dict(data["quotient"])
        rays = tuple(Ray(r["label"], tuple(int(x) for x in r["vector"])) for r in data["rays"])
        cones = tuple(
            Cone(c["label"], tuple(c["rays"]), int(c["weight"])) for c in data["cones"]
        )
        dim = int(data.get("dim", len(cones[0].rays) if cones else 1))
        return cls(lattice, rays, cones, dim)


def _point_vector(lattice: QuotientLattice, members: Sequence[str]) -> tuple:
    v = [0] * lattice.ambient_dim
    for j in members:
        v[lattice.labels.index(j)] = 1
    return lattice.cls(v)


def build_arroid_fan(a: Arroid) -> WeightedFan:
    """The weighted fan of a transversal arroid of rank 1 or 2.

    Rays are stored primitive.  Where ``v_p = sum of [e_j]`` is not primitive, or
    ``[e_i], v_p`` do not span the lattice of their cone, the cone weight
    ``w(p)`` is multiplied by that lattice index, so balancing with lattice
    normals is the identity ``sum w(p) v_p in span([e_i])``.  A cone whose two
    generators are dependent spans no 2-cone and is left out, as is a rank 1
    point whose vector is zero.
    """
    if not a.is_transversal():
        raise NotTransversal("the arroid fan is defined for transversal arroids only")
    if a.rank == 2:
        if el.content(a.degrees) != 1:
            raise TorsionQuotient(f"degrees {a.degrees} have a common factor")
        lattice = QuotientLattice.build(a.ids, [a.degrees])
    else:
        lattice = QuotientLattice.build(a.ids, [a.degrees], saturate=True)
    ups = a.unique_points()
    rays: list[Ray] = []
    cones: list[Cone] = []
    if a.rank == 1:
        for up in ups:
            v = _point_vector(lattice, up.members)
            k = el.content(v)
            if k == 0:
                # the point maps to the origin and contributes no ray
                continue
            rays.append(Ray(f"r:{up.label}", el.primitive(v)))
            cones.append(Cone(f"c:{up.label}", (f"r:{up.label}",), up.weight * k))
        return WeightedFan(lattice, tuple(rays), tuple(cones), 1)
    vp = {up.label: _point_vector(lattice, up.members) for up in ups}
    for i in a.ids:
        for up in ups:
            if i in up.members:
                # w(p) times the index of Z[e_i] + Z v_p in the lattice of the cone;
                # index 0 means v_p lies on the line of [e_i] and there is no 2-cone
                k = el.content(el.wedge([lattice.unit(i), vp[up.label]]).values())
                if k:
                    cones.append(Cone(f"c:{i}|{up.label}", (f"r:{i}", f"r:{up.label}"), up.weight * k))
    used = {r for c in cones for r in c.rays}
    for i in a.ids:
        if f"r:{i}" in used:
            rays.append(Ray(f"r:{i}", el.primitive(lattice.unit(i))))
    for up in ups:
        if f"r:{up.label}" in used:
            rays.append(Ray(f"r:{up.label}", el.primitive(vp[up.label])))
    return WeightedFan(lattice, tuple(rays), tuple(cones), 2)


# ---------------------------------------------------------------- balancing


def lattice_normal(f: WeightedFan, cone: Cone, ray: str) -> list[Fraction]:
    """Rational representative of the primitive normal of ``cone`` relative to ``ray``.

    For a cone with primitive generators ``u`` (the ray) and ``w`` this is
    ``w / k`` with ``k`` the index of ``Zu + Zw`` in its saturation; it
    differs from the lattice normal by a multiple of ``u``.
    """
    u = f.ray(ray)
    other = [x for x in cone.rays if x != ray][0]
    w = f.ray(other)
    k = el.content(el.wedge([u, w]).values())
    return [Fraction(x, k) for x in w]


@dataclass(frozen=True)
class BalanceReport:
    ok: bool
    failures: tuple[str, ...]
    residuals: Mapping[str, tuple]

    def to_dict(self) -> dict:
        return {
            "balanced": self.ok,
            "failures": list(self.failures),
            "residuals": {k: [str(x) for x in v] for k, v in sorted(self.residuals.items())},
        }


def check_balanced(f: WeightedFan) -> BalanceReport:
    failures = []
    residuals = {}
    if f.dim == 1:
        total = [Fraction(0)] * f.lattice.rank
        for c in f.cones:
            v = f.ray(c.rays[0])
            total = [t + c.weight * x for t, x in zip(total, v)]
        if any(total):
            failures.append("0")
            residuals["0"] = tuple(total)
        return BalanceReport(not failures, tuple(failures), residuals)
    for r in f.rays:
        facets = f.cones_containing(r.label)
        total = [Fraction(0)] * f.lattice.rank
        for c in facets:
            n = lattice_normal(f, c, r.label)
            total = [t + c.weight * x for t, x in zip(total, n)]
        if not el.in_span([r.vector], total):
            failures.append(r.label)
            residuals[r.label] = tuple(total)
    return BalanceReport(not failures, tuple(failures), residuals)


@dataclass(frozen=True)
class BalancingSpace:
    ray: str
    facet_labels: tuple[str, ...]
    solution_basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.solution_basis)


def unique_balance_at_ray(f: WeightedFan, ray: str) -> BalancingSpace:
    """Weights on the facets at ``ray`` that balance it, as a vector space."""
    if f.dim != 2:
        raise DimensionMismatch("balancing spaces are computed for 2-dimensional fans")
    facets = f.cones_containing(ray)
    nu = f.ray(ray)
    cols = [lattice_normal(f, c, ray) for c in facets] + [list(map(Fraction, nu))]
    M = el.transpose(cols)
    ker = el.kernel_basis(M, len(cols))
    k = len(facets)
    proj = [v[:k] for v in ker]
    basis = el.row_space_basis(proj)
    return BalancingSpace(ray, tuple(c.label for c in facets), tuple(tuple(b) for b in basis))


# ------------------------------------------------------------ reduced stars


def star_lattice(f: WeightedFan, ray: str) -> tuple[QuotientLattice, list[int]]:
    """Lattice of ``f.lattice`` modulo the ray, with redundant labels dropped.

    Returns the new lattice and the kept ambient indices.
    """
    lat = f.lattice
    gens = [list(k) for k in lat.kernel] + [list(lat.lift(f.ray(ray)))]
    n = lat.ambient_dim
    keep = []
    for k in range(n):
        unit = [int(j == k) for j in range(n)]
        if not el.in_span(gens, unit):
            keep.append(k)
    restricted = [[g[k] for k in keep] for g in gens]
    restricted = [g for g in restricted if any(g)]
    basis = el.saturation_basis(restricted, len(keep)) if restricted else []
    new = QuotientLattice.build([lat.labels[k] for k in keep], basis, saturate=True)
    return new, keep


def reduced_star(f: WeightedFan, ray: str) -> WeightedFan:
    """One-dimensional fan of the cones around ``ray``, modulo its span.

    Cones whose other generators have the same image are merged into one
    ray whose weight is the sum.
    """
    if f.dim != 2:
        raise DimensionMismatch("reduced stars are taken in 2-dimensional fans")
    facets = f.cones_containing(ray)
    new, keep = star_lattice(f, ray)
    order: list[tuple] = []
    weight: dict[tuple, int] = {}
    label: dict[tuple, str] = {}
    for c in facets:
        other = [x for x in c.rays if x != ray][0]
        amb = f.lattice.lift(f.ray(other))
        v = el.primitive(new.cls([amb[k] for k in keep]))
        if v not in weight:
            order.append(v)
            weight[v] = 0
            label[v] = other
        weight[v] += c.weight
    rays = tuple(Ray(label[v], v) for v in order)
    cones = tuple(Cone("c:" + label[v][2:], (label[v],), weight[v]) for v in order)
    return WeightedFan(new, rays, cones, 1)


def isomorphic(f: WeightedFan, g: WeightedFan) -> bool:
    """Equal as weighted fans once written in a common lattice; labels are ignored."""
    if f.dim != g.dim or not f.lattice.same_as(g.lattice):
        return False
    gvec = {r.label: f.lattice.transport(r.vector, g.lattice) for r in g.rays}
    fvec = {r.label: tuple(r.vector) for r in f.rays}
    if sorted(fvec.values()) != sorted(gvec.values()):
        return False
    fc = sorted((tuple(sorted(fvec[x] for x in c.rays)), c.weight) for c in f.cones)
    gc = sorted((tuple(sorted(gvec[x] for x in c.rays)), c.weight) for c in g.cones)
    return fc == gc


def facet_graph_connected(f: WeightedFan) -> bool:
    """Facets adjacent when they share a ray; True if the graph is connected."""
    if not f.cones:
        return True
    if f.dim == 1:
        return True
    seen = {f.cones[0].label}
    stack = [f.cones[0]]
    while stack:
        c = stack.pop()
        for d in f.cones:
            if d.label not in seen and set(d.rays) & set(c.rays):
                seen.add(d.label)
                stack.append(d)
    return len(seen) == len(f.cones)


# ------------------------------------------------------------------ support


def _cone_coefficients(gens: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    A = el.transpose([list(map(Fraction, g)) for g in gens])
    return el.solve(A, list(map(Fraction, v)))


def support_contains(f: WeightedFan, v: Sequence) -> bool:
    if len(v) != f.lattice.rank:
        raise DimensionMismatch(f"vector of length {len(v)} in a rank {f.lattice.rank} lattice")
    if not any(v):
        return True
    for c in f.cones:
        coeffs = _cone_coefficients([f.ray(x) for x in c.rays], v)
        if coeffs is not None and all(x >= 0 for x in coeffs):
            return True
    return False


def _planar_cone_covered(f: WeightedFan, gens, v) -> bool:
    """``v`` lies in a cone of ``f`` whose span is the plane of ``gens``."""
    for c in f.cones:
        cg = [f.ray(x) for x in c.rays]
        if el.rank_q(cg + [list(g) for g in gens]) != 2:
            continue
        coeffs = _cone_coefficients(cg, v)
        if coeffs is not None and all(x >= 0 for x in coeffs):
            return True
    return False


def _covers(f: WeightedFan, g: WeightedFan) -> bool:
    """Support of ``f`` is contained in the support of ``g``."""
    for r in f.rays:
        if not support_contains(g, r.vector):
            return False
    if f.dim == 1:
        return True
    for c in f.cones:
        a, b = f.ray(c.rays[0]), f.ray(c.rays[1])
        # positions of g's rays inside this cone, as t in a*(1-t) + b*t up to scale
        ts = {Fraction(0), Fraction(1)}
        for r in g.rays:
            coeffs = _cone_coefficients([a, b], r.vector)
            if coeffs is not None and all(x >= 0 for x in coeffs) and sum(coeffs):
                ts.add(coeffs[1] / (coeffs[0] + coeffs[1]))
        ts = sorted(ts)
        for t0, t1 in zip(ts, ts[1:]):
            t = (t0 + t1) / 2
            mid = [(1 - t) * x + t * y for x, y in zip(a, b)]
            if not _planar_cone_covered(g, [a, b], mid):
                return False
    return True


def support_equal(f: WeightedFan, g: WeightedFan) -> bool:
    """Equal supports, checked after moving ``g`` into the lattice of ``f``."""
    if f.lattice.rank != g.lattice.rank:
        raise DimensionMismatch("fans live in lattices of different rank")
    if f.lattice.same_as(g.lattice) and f.lattice != g.lattice:
        g = WeightedFan(
            f.lattice,
            tuple(Ray(r.label, f.lattice.transport(r.vector, g.lattice)) for r in g.rays),
            g.cones,
            g.dim,
        )
    if f.dim != g.dim:
        return False
    return _covers(f, g) and _covers(g, f)


# ---------------------------------------------------------- modification


@dataclass(frozen=True)
class ModificationReport:
    element: str
    star_is_contraction: bool
    projection_onto: bool
    fibers_ok: bool
    cone_forms: Mapping[str, str]
    bad_fibers: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.star_is_contraction and self.projection_onto and self.fibers_ok

    def to_dict(self) -> dict:
        return {
            "element": self.element,
            "ok": self.ok,
            "star_is_contraction": self.star_is_contraction,
            "projection_onto": self.projection_onto,
            "fibers_ok": self.fibers_ok,
            "cone_forms": dict(sorted(self.cone_forms.items())),
            "bad_fibers": list(self.bad_fibers),
        }


def _line_cone_interval(gens, base, direction):
    """Set of ``t`` with ``base + t*direction`` in the cone over ``gens``.

    Returns ``None`` when empty, else ``(lo, hi)`` with ``None`` for an
    infinite end.
    """
    k = len(gens)
    cols = [list(map(Fraction, g)) for g in gens] + [[-Fraction(x) for x in direction]]
    A = el.transpose(cols)
    b = list(map(Fraction, base))
    sol = el.solve(A, b)
    if sol is None:
        return None
    ker = el.kernel_basis(A, k + 1)
    if not ker:
        if all(x >= 0 for x in sol[:k]):
            return (sol[k], sol[k])
        return None
    # one free parameter when direction lies in the span of the generators
    if len(ker) > 1:
        raise ValueError("degenerate cone in fiber computation")
    kv = ker[0]
    lo, hi = None, None
    for j in range(k):
        # sol[j] + lam * kv[j] >= 0
        if kv[j] == 0:
            if sol[j] < 0:
                return None
            continue
        bound = -sol[j] / kv[j]
        if kv[j] > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None and hi is not None and lo > hi:
        return None
    # t = sol[k] + lam * kv[k]
    s, d = sol[k], kv[k]
    if d == 0:
        return (s, s)
    ends = [None if lo is None else s + lo * d, None if hi is None else s + hi * d]
    if d < 0:
        ends = ends[::-1]
    return (ends[0], ends[1])


def _fiber(f: WeightedFan, base, direction):
    pieces = []
    if not any(base):
        pieces.append((Fraction(0), Fraction(0)))
    for r in f.rays:
        iv = _line_cone_interval([r.vector], base, direction)
        if iv is not None:
            pieces.append(iv)
    for c in f.cones:
        iv = _line_cone_interval([f.ray(x) for x in c.rays], base, direction)
        if iv is not None:
            pieces.append(iv)
    if not pieces:
        return None
    inf = float("inf")
    norm = sorted(
        (-inf if lo is None else lo, inf if hi is None else hi) for lo, hi in pieces
    )
    merged = [list(norm[0])]
    for lo, hi in norm[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return merged


def verify_modification(a: Arroid, i: str) -> ModificationReport:
    """Check that the fan of ``a`` modifies the fan of ``a`` with ``i`` deleted.

    The reduced star at the ray of ``i`` is compared with the fan of the
    contraction, and fibers of the projection forgetting ``e_i`` are computed
    exactly over sample points of the deleted fan (origin, rays, midpoints of
    cones, images of all rays and cone midpoints of ``a``).
    """
    fan = build_arroid_fan(a)
    deleted = a.delete(i)
    dfan = build_arroid_fan(deleted)
    contracted = build_arroid_fan(a.contract(i))
    star_ok = isomorphic(reduced_star(fan, f"r:{i}"), contracted)

    lat, dlat = fan.lattice, dfan.lattice
    drop = lat.labels.index(i)

    def project(x):
        amb = lat.lift(x)
        return dlat.cls([amb[k] for k in range(len(amb)) if k != drop])

    def lift_from_deleted(y):
        amb = dlat.lift(y)
        amb = list(amb[:drop]) + [0] + list(amb[drop:])
        return lat.cls(amb)

    forms = {}
    uniq = {up.label: up for up in a.unique_points()}
    for c in fan.cones:
        elem, plabel = c.label[2:].split("|")
        members = uniq[plabel].members
        if elem == i:
            forms[c.label] = "vertical"
        elif i in members and len(members) == 2:
            forms[c.label] = "vanishing"
        elif i in members:
            forms[c.label] = "through"
        else:
            forms[c.label] = "untouched"

    # each cone maps onto a cone of the deleted fan, or onto a ray when vertical
    dvec = {r.vector: r.label for r in dfan.rays}
    dcones = {frozenset(c.rays) for c in dfan.cones}
    for c in fan.cones:
        images = [el.primitive(project(fan.ray(x))) for x in c.rays]
        nonzero = sorted({v for v in images if any(v)})
        if forms[c.label] in ("vertical", "vanishing"):
            good = len(nonzero) == 1 and nonzero[0] in dvec
        else:
            good = (
                len(nonzero) == 2
                and all(v in dvec for v in nonzero)
                and frozenset(dvec[v] for v in nonzero) in dcones
            )
        if not good:
            forms[c.label] += ":bad"

    onto = True
    samples = [tuple(project(r.vector)) for r in fan.rays]
    for c in fan.cones:
        mid = [x + y for x, y in zip(fan.ray(c.rays[0]), fan.ray(c.rays[1]))]
        samples.append(tuple(project(mid)))
    for y in samples:
        if not support_contains(dfan, y):
            onto = False
    targets = [tuple([0] * dlat.rank)] + [r.vector for r in dfan.rays]
    for c in dfan.cones:
        targets.append(tuple(x + y for x, y in zip(dfan.ray(c.rays[0]), dfan.ray(c.rays[1]))))
    targets += samples
    direction = lat.unit(i)
    bad = []
    seen = set()
    for y in targets:
        y = tuple(y)
        if y in seen:
            continue
        seen.add(y)
        fib = _fiber(fan, lift_from_deleted(y), direction)
        if fib is None:
            onto = False
            bad.append(str(list(y)))
            continue
        if len(fib) != 1:
            bad.append(str(list(y)))
            continue
        lo, hi = fib[0]
        if lo == float("-inf"):
            bad.append(str(list(y)))
        elif hi != float("inf") and hi != lo:
            bad.append(str(list(y)))
    bad += [label for label, form in forms.items() if form.endswith(":bad")]
    return ModificationReport(i, star_ok, onto, not bad, forms, tuple(bad))
