"""Tropical homology of weighted fans of dimension 1 and 2.

Cells of a fan are the origin ``"0"``, its rays and its top cones.  For a
cell ``s`` the multi-tangent space ``F_p(s)`` is the span of ``∧^p L(g)``
over all cones ``g`` containing ``s``, where ``L(g)`` is the lattice of the
linear span of ``g``.  Elements of ``∧^p`` of the quotient lattice are dense
coordinate vectors in the basis ``e_I`` (``exactlin.wedge_basis`` order).

The Borel–Moore complex in degree ``p`` has ``C_{p,q} = ⊕ F_p(s)`` over
cells of dimension ``q``; the boundary is the signed inclusion into faces.
A 2-cone with ordered generators ``(a, b)`` has face ``b`` with sign ``+1``
and face ``a`` with sign ``-1``; a ray has the origin as face with sign ``+1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from . import exactlin as el
from .arroid import Arroid
from .errors import InconsistentVerdict, NotACycle, UnknownCone
from .fan import (
    WeightedFan,
    build_arroid_fan,
    check_balanced,
    reduced_star,
    unique_balance_at_ray,
)


ORIGIN = "0"


def cells(f: WeightedFan, q: int) -> list[str]:
    if q == 0:
        return [ORIGIN]
    if q == f.dim:
        return [c.label for c in f.cones]
    if q == 1 and f.dim == 2:
        return [r.label for r in f.rays]
    return []


def _generators(f: WeightedFan, cell: str) -> list[tuple[int, ...]]:
    if cell == ORIGIN:
        return []
    for c in f.cones:
        if c.label == cell:
            return [f.ray(x) for x in c.rays]
    return [f.ray(cell)]


def _containing_cones(f: WeightedFan, cell: str) -> list[list[tuple[int, ...]]]:
    """Generator lists of all cones (any dimension) containing ``cell``."""
    out = []
    if cell == ORIGIN:
        out.append([])
        out += [[r.vector] for r in f.rays]
        out += [[f.ray(x) for x in c.rays] for c in f.cones]
        return out
    gens = _generators(f, cell)
    out.append(gens)
    if len(gens) == 1 and f.dim == 2:
        out += [[f.ray(x) for x in c.rays] for c in f.cones if cell in c.rays]
    return out


def _spanning_set(f: WeightedFan, cell: str, p: int) -> list[list[Fraction]]:
    m = f.lattice.rank
    vecs = []
    for gens in _containing_cones(f, cell):
        if len(gens) < p:
            continue
        # ∧^p of the span is spanned by wedges of p-subsets of generators
        for sub in combinations(gens, p):
            w = el.wedge(list(sub), m) if p else {(): Fraction(1)}
            if w:
                vecs.append(el.to_dense(w, m, p))
    return vecs


@dataclass(frozen=True)
class MultiTangent:
    cone: str
    p: int
    basis: tuple[tuple, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def multi_tangent(f: WeightedFan, cone: str, p: int, integral: bool = False) -> MultiTangent:
    """Basis of ``F_p`` at a cell; with ``integral`` a basis of its saturated lattice."""
    if cone != ORIGIN:
        known = {r.label for r in f.rays} | {c.label for c in f.cones}
        if cone not in known:
            raise UnknownCone(cone)
    if not 0 <= p <= f.lattice.rank:
        return MultiTangent(cone, p, ())
    vecs = _spanning_set(f, cone, p)
    if not vecs:
        return MultiTangent(cone, p, ())
    if integral:
        ints = [list(el.integer_scaled(v)) for v in vecs]
        basis = el.saturation_basis(ints, len(ints[0]))
        return MultiTangent(cone, p, tuple(tuple(b) for b in basis))
    basis = el.row_space_basis(vecs)
    return MultiTangent(cone, p, tuple(tuple(b) for b in basis))


# ------------------------------------------------------------------ complex


def _faces(f: WeightedFan, cell: str) -> list[tuple[str, int]]:
    if cell == ORIGIN:
        return []
    for c in f.cones:
        if c.label == cell:
            if f.dim == 1:
                return [(ORIGIN, 1)]
            a, b = c.rays
            return [(b, 1), (a, -1)]
    return [(ORIGIN, 1)]


@dataclass
class BMComplex:
    """Borel–Moore complex in a fixed degree ``p``.

    ``bases[q]`` lists ``(cell, MultiTangent)`` in order; ``boundary[q]`` is
    the matrix of ``C_q -> C_{q-1}`` in those bases (rows index ``C_{q-1}``).
    """

    p: int
    integral: bool
    bases: dict[int, list[tuple[str, MultiTangent]]] = field(default_factory=dict)
    boundary: dict[int, list[list]] = field(default_factory=dict)

    def size(self, q: int) -> int:
        return sum(t.dim for _, t in self.bases.get(q, []))


def bm_complex(f: WeightedFan, p: int, integral: bool = False) -> BMComplex:
    cx = BMComplex(p, integral)
    for q in range(f.dim + 1):
        cx.bases[q] = [(s, multi_tangent(f, s, p, integral)) for s in cells(f, q)]
    for q in range(1, f.dim + 1):
        rows = cx.size(q - 1)
        offset = {}
        k = 0
        for s, t in cx.bases[q - 1]:
            offset[s] = (k, t)
            k += t.dim
        columns = []
        for s, t in cx.bases[q]:
            for b in t.basis:
                col = [Fraction(0)] * rows
                for face, sign in _faces(f, s):
                    start, ft = offset[face]
                    coords = el.solve(el.transpose([list(x) for x in ft.basis]), list(b))
                    if coords is None:
                        raise ValueError(f"F_{p}({s}) is not inside F_{p}({face})")
                    for j, x in enumerate(coords):
                        col[start + j] += sign * x
                columns.append(col)
        if integral:
            for col in columns:
                if any(x.denominator != 1 for x in col):
                    raise ValueError("integral boundary has fractional entries")
            columns = [[int(x) for x in col] for col in columns]
        cx.boundary[q] = el.transpose(columns, rows) if columns else [[] for _ in range(rows)]
    return cx


def _matrix_rank(M) -> int:
    if not M or not M[0]:
        return 0
    return el.rank_q(M)


@dataclass(frozen=True)
class HomologySummary:
    dims: Mapping[tuple[int, int], int]
    torsion: Mapping[tuple[int, int], tuple[int, ...]]
    cohomology_dims: tuple[int, ...]
    dim: int

    def vanishes_off_top(self) -> bool:
        return all(v == 0 for (p, q), v in self.dims.items() if q != self.dim)

    def torsion_free(self) -> bool:
        return all(not t for t in self.torsion.values())

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "bm_dims": {f"{p},{q}": v for (p, q), v in sorted(self.dims.items())},
            "torsion": {f"{p},{q}": list(v) for (p, q), v in sorted(self.torsion.items())},
            "cohomology_dims": list(self.cohomology_dims),
        }


def bm_homology(f: WeightedFan, integral: bool = False) -> HomologySummary:
    """Ranks of ``H^BM_{p,q}`` and, with ``integral``, torsion divisors."""
    dims = {}
    torsion = {}
    for p in range(f.dim + 1):
        cx = bm_complex(f, p, integral)
        ranks = {q: _matrix_rank(cx.boundary[q]) for q in cx.boundary}
        for q in range(f.dim + 1):
            n = cx.size(q)
            dims[(p, q)] = n - ranks.get(q, 0) - ranks.get(q + 1, 0)
            if integral:
                nxt = cx.boundary.get(q + 1)
                divs = ()
                if nxt and nxt[0]:
                    snf = el.smith_normal_form(nxt)
                    divs = tuple(d for d in snf.elementary_divisors if d > 1)
                torsion[(p, q)] = divs
    return HomologySummary(dims, torsion, cohomology_dims(f), f.dim)


def cohomology_dims(f: WeightedFan) -> tuple[int, ...]:
    """``dim H^{p,0} = dim F_p(0)`` for ``p = 0 .. dim``."""
    return tuple(multi_tangent(f, ORIGIN, p).dim for p in range(f.dim + 1))


def check_boundary_squares_zero(f: WeightedFan, integral: bool = False) -> bool:
    for p in range(f.dim + 1):
        cx = bm_complex(f, p, integral)
        for q in range(2, f.dim + 1):
            A, B = cx.boundary[q - 1], cx.boundary[q]
            if not A or not B or not A[0] or not B[0]:
                continue
            if any(x for row in el.matmul(A, B) for x in row):
                return False
    return True


# -------------------------------------------------------- fundamental class


@dataclass(frozen=True)
class FundamentalClass:
    components: Mapping[str, tuple[Fraction, ...]]

    def chain(self, f: WeightedFan) -> list[Fraction]:
        return [x for c in f.cones for x in self.components[c.label]]


def _orientation(f: WeightedFan, cone_label: str) -> dict:
    gens = _generators(f, cone_label)
    w = el.wedge(gens, f.lattice.rank)
    k = el.content(w.values())
    return {I: Fraction(v, k) for I, v in w.items()}


def fundamental_chain(f: WeightedFan) -> dict[str, dict]:
    """Per facet, ``weight * primitive oriented generator`` as a multivector."""
    return {
        c.label: {I: c.weight * v for I, v in _orientation(f, c.label).items()} for c in f.cones
    }


def _chain_coordinates(f: WeightedFan, cx: BMComplex, chain: Mapping[str, Mapping]) -> list[Fraction]:
    q = f.dim
    coords = []
    m = f.lattice.rank
    for s, t in cx.bases[q]:
        vec = el.to_dense(chain.get(s, {}), m, cx.p)
        sol = el.solve(el.transpose([list(b) for b in t.basis]), vec) if t.basis else []
        if sol is None:
            raise ValueError(f"chain component on {s} is outside F_{cx.p}({s})")
        coords += sol
    return coords


def fundamental_class(f: WeightedFan) -> FundamentalClass:
    chain = fundamental_chain(f)
    cx = bm_complex(f, f.dim)
    x = _chain_coordinates(f, cx, chain)
    image = el.matvec(cx.boundary[f.dim], x)
    if any(image):
        raise NotACycle("the fundamental chain has nonzero boundary; the fan is not balanced")
    return FundamentalClass({c.label: tuple(el.to_dense(chain[c.label], f.lattice.rank, f.dim)) for c in f.cones})


def fundamental_is_cycle(f: WeightedFan) -> bool:
    try:
        fundamental_class(f)
    except NotACycle:
        return False
    return True


# -------------------------------------------------------- Poincaré duality


@dataclass(frozen=True)
class PDReport:
    holds: bool
    per_p: Mapping[int, dict]
    vanishing_ok: bool

    def to_dict(self) -> dict:
        return {
            "tpd": self.holds,
            "bm_vanishing_off_top": self.vanishing_ok,
            "per_p": {str(p): v for p, v in sorted(self.per_p.items())},
        }


def _dual_basis(B: list[list[Fraction]]) -> list[list[Fraction]]:
    """Covectors ``a_k`` with ``a_k(b_l) = δ_kl`` lying in the span of ``B``."""
    G = el.matmul(B, el.transpose(B))
    Ginv = el.inverse(G)
    return el.matmul(Ginv, B)


def check_tpd(f: WeightedFan) -> PDReport:
    """Cap product with the fundamental class, degree by degree.

    For each ``p`` the dual basis of ``F_p(0)`` is contracted into the
    fundamental chain; the images must be cycles of ``C_{d-p,d}`` and span
    ``H^BM_{d-p,d}`` bijectively.  Duality also needs ``H^BM_{p,q} = 0`` for
    ``q < d`` because fans have no cohomology off ``q = 0``.
    """
    d = f.dim
    m = f.lattice.rank
    homology = bm_homology(f)
    vanishing = homology.vanishes_off_top()
    if not check_balanced(f).ok:
        return PDReport(False, {}, vanishing)
    chain = fundamental_chain(f)
    per_p = {}
    holds = vanishing
    for p in range(d + 1):
        F = multi_tangent(f, ORIGIN, p)
        B = [list(b) for b in F.basis]
        cx = bm_complex(f, d - p)
        top = cx.boundary.get(d)
        images = []
        for alpha_dense in (_dual_basis(B) if B else []):
            alpha = el.from_dense(alpha_dense, m, p)
            capped = {s: el.interior_product(alpha, w, m) for s, w in chain.items()}
            images.append(_chain_coordinates(f, cx, capped))
        cycles = all(not any(el.matvec(top, x)) for x in images) if top and top[0] else True
        target = homology.dims[(d - p, d)]
        rank = el.rank_q(images) if images else 0
        iso = cycles and rank == len(B) == target
        per_p[p] = {"source_dim": len(B), "target_dim": target, "image_rank": rank, "cycles": cycles, "iso": iso}
        holds = holds and iso
    return PDReport(holds, per_p, vanishing)


# --------------------------------------------------------------------- THM


@dataclass(frozen=True)
class THMReport:
    route_a: bool
    route_b: bool
    balancing_dims: Mapping[str, int]
    failing_rays: tuple[str, ...]
    star_tpd: Mapping[str, bool]
    fan_tpd: bool

    @property
    def thm(self) -> bool:
        return self.route_a

    def to_dict(self) -> dict:
        return {
            "thm": self.thm,
            "route_a_unique_balancing": self.route_a,
            "route_b_poincare_duality": self.route_b,
            "balancing_dims": dict(sorted(self.balancing_dims.items())),
            "failing_rays": list(self.failing_rays),
            "fan_tpd": self.fan_tpd,
            "star_tpd": dict(sorted(self.star_tpd.items())),
        }


def check_thm(f: WeightedFan) -> THMReport:
    """Tropical homology manifold verdict by two independent routes.

    Route A asks for a one-dimensional balancing space at every ray; route B
    checks Poincaré duality on the fan and on every reduced star at a ray.
    For a one-dimensional fan the only codimension one cone is the origin,
    route A looks at the weights balancing there and route B at the fan
    itself, since stars at rays are points.
    """
    if f.dim == 1:
        cols = [list(map(Fraction, f.ray(c.rays[0]))) for c in f.cones]
        dims = {ORIGIN: len(el.kernel_basis(el.transpose(cols, f.lattice.rank), len(cols))) if cols else 0}
        failing = tuple(k for k, v in dims.items() if v != 1)
        route_a = not failing
        route_b = fan_tpd = check_tpd(f).holds
        if route_a != route_b:
            raise InconsistentVerdict(
                f"unique balancing says {route_a} but Poincaré duality says {route_b}"
            )
        return THMReport(route_a, route_b, dims, failing, {}, fan_tpd)
    dims = {r.label: unique_balance_at_ray(f, r.label).dim for r in f.rays}
    failing = tuple(k for k, v in dims.items() if v != 1)
    route_a = not failing
    fan_tpd = check_tpd(f).holds
    star_tpd = {r.label: check_tpd(reduced_star(f, r.label)).holds for r in f.rays}
    route_b = fan_tpd and all(star_tpd.values())
    if route_a != route_b:
        raise InconsistentVerdict(
            f"unique balancing says {route_a} but Poincaré duality says {route_b}"
        )
    return THMReport(route_a, route_b, dims, failing, star_tpd, fan_tpd)


@dataclass(frozen=True)
class SESReport:
    element: str
    whole: tuple[int, ...]
    deleted: tuple[int, ...]
    contracted: tuple[int, ...]
    ok: bool

    def to_dict(self) -> dict:
        return {
            "element": self.element,
            "ok": self.ok,
            "whole": list(self.whole),
            "deleted": list(self.deleted),
            "contracted": list(self.contracted),
        }


def ses_dim_check(a: Arroid, i: str) -> SESReport:
    """``dim H^{p,0}(A) = dim H^{p,0}(A - i) + dim H^{p-1,0}(A / i)`` for every ``p``."""
    whole = cohomology_dims(build_arroid_fan(a))
    deleted = cohomology_dims(build_arroid_fan(a.delete(i)))
    contracted = cohomology_dims(build_arroid_fan(a.contract(i)))
    ok = True
    for p in range(len(whole)):
        dp = deleted[p] if p < len(deleted) else 0
        cp = contracted[p - 1] if 0 <= p - 1 < len(contracted) else 0
        ok = ok and whole[p] == dp + cp
    return SESReport(i, whole, deleted, contracted, ok)
