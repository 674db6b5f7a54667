"""Exact linear algebra over Q and Z.

Matrices are dense, row-major sequences of rows.  Rational entries are
``fractions.Fraction``; integer matrices hold plain ``int``.  Nothing here
mutates its inputs.

Multivectors and covectors on an ``m``-dimensional space are dictionaries
mapping strictly increasing index tuples to coefficients, so ``{(0, 1): 1}``
is ``e_0 ^ e_1``.  Basis order for dense coordinates is lexicographic on
those tuples (``itertools.combinations`` order).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch, TorsionQuotient

MatQ = list[list[Fraction]]
MatZ = list[list[int]]
Multivector = dict[tuple[int, ...], Fraction]


# ---------------------------------------------------------------- basics


def as_fraction_matrix(A: Sequence[Sequence]) -> MatQ:
    return [[Fraction(x) for x in row] for row in A]


def zeros(m: int, n: int) -> MatZ:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> MatZ:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    inner = len(A[0])
    if len(B) != inner:
        raise DimensionMismatch(f"cannot multiply {len(A)}x{inner} by {len(B)}x?")
    if not B:
        return [[] for _ in A]
    n = len(B[0])
    out = []
    for row in A:
        acc = [0] * n
        for a, brow in zip(row, B):
            if a:
                for j, b in enumerate(brow):
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def content(v: Iterable[int]) -> int:
    return reduce(gcd, (int(x) for x in v), 0)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = content(v)
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def integer_scaled(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive multiple of a rational vector that is primitive integral."""
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    return primitive([int(Fraction(x) * den) for x in v])


def det(A: Sequence[Sequence]) -> Fraction:
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = as_fraction_matrix(A)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        p = M[c][c]
        result *= p
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / p
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return sign * result


# ------------------------------------------------------------- elimination


def _integer_rows(A: Sequence[Sequence]) -> list[list[int]]:
    rows = []
    for row in A:
        row = [x if isinstance(x, (int, Fraction)) else Fraction(x) for x in row]
        den = reduce(lcm, (x.denominator for x in row), 1)
        rows.append([int(x.numerator) * (den // x.denominator) for x in row])
    return rows


def _echelon(A: Sequence[Sequence], reduced: bool) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Rows are kept integral and divided by their content after every update,
    which keeps entries small on desk-scale input.
    """
    rows = [r for r in _integer_rows(A) if any(r)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        a = prow[c]
        targets = range(len(rows)) if reduced else range(r + 1, len(rows))
        for i in targets:
            if i == r or not rows[i][c]:
                continue
            b = rows[i][c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = [fa * x - fb * y for x, y in zip(rows[i], prow)]
            cont = content(new)
            rows[i] = [x // cont for x in new] if cont > 1 else new
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [row for row in rows[:r]], pivots


def rank_q(A: Sequence[Sequence]) -> int:
    """Rank over the rationals."""
    if not A or not len(A[0]):
        return 0
    return len(_echelon(A, reduced=False)[1])


def rref(A: Sequence[Sequence]) -> tuple[MatQ, list[int]]:
    """Reduced row echelon form over Q, zero rows dropped, with pivot columns."""
    rows, pivots = _echelon(A, reduced=True)
    out = []
    for row, c in zip(rows, pivots):
        p = row[c]
        out.append([Fraction(x, p) for x in row])
    return out, pivots


def kernel_basis(A: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel ``{v : A v = 0}``."""
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, pivots = rref(A)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def row_space_basis(vectors: Sequence[Sequence]) -> MatQ:
    return rref(vectors)[0] if vectors else []


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` or ``None`` when inconsistent."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bb] for row, bb in zip(A, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return x


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return not any(v)
    return rank_q(list(vectors) + [list(v)]) == rank_q(vectors)


class Coordinates:
    """Expresses vectors of a subspace in a fixed basis of that subspace."""

    def __init__(self, basis: Sequence[Sequence]):
        self.basis = [list(b) for b in basis]
        self.dim = len(self.basis)
        if not self.basis:
            self._pivots: list[int] = []
            self._inv: MatQ = []
            return
        # pivot columns of the row space give an invertible square block
        _, cols = rref(self.basis)
        self._pivots = cols
        sub = [[Fraction(b[c]) for c in cols] for b in self.basis]
        self._inv = inverse(sub)

    def __call__(self, v: Sequence) -> list[Fraction]:
        if not self.basis:
            if any(v):
                raise ValueError("vector is not in the span of the basis")
            return []
        x = [Fraction(v[c]) for c in self._pivots]
        coeffs = [sum(x[k] * self._inv[k][j] for k in range(self.dim)) for j in range(self.dim)]
        for c in range(len(v)):
            if sum(coeffs[j] * self.basis[j][c] for j in range(self.dim)) != v[c]:
                raise ValueError("vector is not in the span of the basis")
        return coeffs


def inverse(A: Sequence[Sequence]) -> MatQ:
    n = len(A)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


# ------------------------------------------------------ Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular.

    ``U_inv`` and ``V_inv`` are tracked alongside so callers never need to
    invert a unimodular matrix themselves.
    """

    U: MatZ
    S: MatZ
    V: MatZ
    U_inv: MatZ
    V_inv: MatZ
    elementary_divisors: list[int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.elementary_divisors if d)


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None) -> SNFResult:
    """Smith normal form by elementary row/column operations.

    The pivot is always an entry of minimal nonzero absolute value in the
    remaining block; ties go to the first in row-major order.
    """
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    S = [[int(x) for x in row] for row in A]
    U, Ui = identity(m), identity(m)
    V, Vi = identity(n), identity(n)

    def row_add(i, t, q):  # row_i += q * row_t
        if not q:
            return
        S[i] = [a + q * b for a, b in zip(S[i], S[t])]
        U[i] = [a + q * b for a, b in zip(U[i], U[t])]
        for row in Ui:  # col_t -= q * col_i
            row[t] -= q * row[i]

    def col_add(j, t, q):  # col_j += q * col_t
        if not q:
            return
        for row in S:
            row[j] += q * row[t]
        for row in V:
            row[j] += q * row[t]
        Vi[t] = [a - q * b for a, b in zip(Vi[t], Vi[j])]

    def row_swap(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        if i != j:
            for M in (S, V):
                for row in M:
                    row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_neg(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    row_add(i, t, -(S[i][t] // S[t][t]))
            for j in range(t + 1, n):
                if S[t][j]:
                    col_add(j, t, -(S[t][j] // S[t][t]))
            rest = [(abs(S[i][t]), i, 'r') for i in range(t + 1, m) if S[i][t]]
            rest += [(abs(S[t][j]), j, 'c') for j in range(t + 1, n) if S[t][j]]
            if rest:
                _, k, kind = min(rest)
                if kind == 'r':
                    row_swap(t, k)
                else:
                    col_swap(t, k)
                continue
            p = S[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
            if bad is not None:
                row_add(t, bad[0], 1)
                done = False
            if done:
                break
        if S[t][t] < 0:
            row_neg(t)
    divisors = [S[i][i] for i in range(min(m, n))]
    return SNFResult(U, S, V, Ui, Vi, divisors)


def saturation_basis(vectors: Sequence[Sequence[int]], n: int) -> MatZ:
    """Integer basis of ``span_Q(vectors) ∩ Z^n``."""
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    snf = smith_normal_form(vectors)
    return [list(r) for r in snf.V_inv[: snf.rank]]


# ------------------------------------------------------ lattice quotients


def _canonical_quotient(n: int, gens: Sequence[Sequence[int]]):
    """Eliminate one coordinate per generator using a unit entry.

    Returns ``(projection, section, eliminated)`` or ``None`` when some
    generator has no unit entry left after reduction.
    """
    remaining = list(range(n))
    P = identity(n)
    S = identity(n)
    eliminated = []
    for g in gens:
        gr = matvec(P, g)
        if not any(gr):
            continue
        k = next((idx for idx, x in enumerate(gr) if abs(x) == 1), None)
        if k is None:
            return None
        eps = gr[k]
        size = len(remaining)
        Q = []
        for l in range(size):
            if l == k:
                continue
            row = [int(c == l) for c in range(size)]
            row[k] = -eps * gr[l]
            Q.append(row)
        SQ = [[int(r == (c if c < k else c + 1)) for c in range(size - 1)] for r in range(size)]
        P = matmul(Q, P)
        S = matmul(S, SQ) if S and SQ and SQ[0] else [[] for _ in range(n)]
        eliminated.append(remaining.pop(k))
    return P, S, eliminated


def quotient_basis(
    n: int, gens: Sequence[Sequence[int]], saturate: bool = False
) -> tuple[MatZ, MatZ]:
    """Present ``Z^n / <gens>`` as ``Z^(n-k)``.

    Returns ``(projection, section)`` with ``projection @ section == I`` and
    ``projection @ g == 0`` for every generator.  When a generator has a
    unit entry the lowest such coordinate is eliminated, so for a single
    generator ``(1, 1, 1, 1)`` the first basis vector maps to ``(-1, -1, -1)``.
    Otherwise a Smith normal form change of basis is used.

    With ``saturate=False`` a quotient with torsion raises ``TorsionQuotient``;
    with ``saturate=True`` the saturation of ``<gens>`` is quotiented instead.
    """
    P, S, _ = quotient_data(n, gens, saturate)
    return P, S


def quotient_data(n: int, gens: Sequence[Sequence[int]], saturate: bool = False):
    gens = [[int(x) for x in g] for g in gens]
    for g in gens:
        if len(g) != n:
            raise DimensionMismatch(f"generator of length {len(g)} in Z^{n}")
    gens = [g for g in gens if any(g)]
    if saturate and len(gens) == 1:
        gens = [list(primitive(gens[0]))]
    if not gens:
        return identity(n), identity(n), []
    canon = _canonical_quotient(n, gens)
    if canon is not None:
        return canon
    snf = smith_normal_form(transpose(gens))
    r = snf.rank
    torsion = [d for d in snf.elementary_divisors if d > 1]
    if torsion and not saturate:
        raise TorsionQuotient(f"quotient has torsion, elementary divisors {torsion}")
    proj = [list(row) for row in snf.U[r:]]
    sec = [list(row[r:]) for row in snf.U_inv]
    return proj, sec, []


# ------------------------------------------------------------ multivectors


def wedge_basis(m: int, p: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), p))


def wedge(vectors: Sequence[Sequence], m: int | None = None) -> Multivector:
    """Wedge product of vectors given in coordinates, as a multivector."""
    p = len(vectors)
    if p == 0:
        return {(): Fraction(1)}
    m = len(vectors[0]) if m is None else m
    out: Multivector = {}
    for idx in combinations(range(m), p):
        d = det([[v[i] for i in idx] for v in vectors])
        if d:
            out[idx] = d
    return out


def to_dense(w: Multivector, m: int, p: int) -> list[Fraction]:
    return [Fraction(w.get(I, 0)) for I in wedge_basis(m, p)]


def from_dense(coords: Sequence, m: int, p: int) -> Multivector:
    return {I: Fraction(c) for I, c in zip(wedge_basis(m, p), coords) if c}


def _degree(w: Multivector) -> int | None:
    degs = {len(I) for I, c in w.items() if c}
    if len(degs) > 1:
        raise ValueError("multivector is not homogeneous")
    return degs.pop() if degs else None


def interior_product(alpha: Multivector, w: Multivector, m: int) -> Multivector:
    """Contract a p-covector into the first p slots of a q-multivector.

    ``alpha`` is written in the dual basis ``e_I^*``.  For ``alpha = e_I^*``
    and ``w = e_J`` with ``I ⊆ J`` the result is ``s * e_{J \\ I}`` where
    ``e_J = s * e_I ^ e_{J \\ I}``; otherwise zero.  Hence for a 1-covector
    ``ι_a(u ^ v) = a(u) v - a(v) u``.
    """
    for I in list(alpha) + list(w):
        if any(i < 0 or i >= m for i in I) or list(I) != sorted(set(I)):
            raise DimensionMismatch(f"index tuple {I} invalid for dimension {m}")
    p, q = _degree(alpha), _degree(w)
    if p is None or q is None:
        return {}
    if p > q:
        raise DimensionMismatch(f"cannot contract a {p}-covector into a {q}-vector")
    out: Multivector = {}
    for I, a in alpha.items():
        if not a:
            continue
        Iset = set(I)
        for J, b in w.items():
            if not b or not Iset.issubset(J):
                continue
            rest = tuple(j for j in J if j not in Iset)
            inversions = sum(1 for i in I for j in rest if j < i)
            val = (-1) ** inversions * Fraction(a) * Fraction(b)
            out[rest] = out.get(rest, Fraction(0)) + val
    return {k: v for k, v in out.items() if v}


def pairing(alpha: Multivector, w: Multivector) -> Fraction:
    return sum((Fraction(c) * Fraction(w.get(I, 0)) for I, c in alpha.items()), Fraction(0))
