"""Exact lattice and polyhedral-cone primitives.

All arithmetic is arbitrary precision (int / fractions.Fraction); no floats
appear anywhere.  Cones are finitely generated convex cones in Q^n stored by
primitive integer generators.  Duality is computed by a subset-enumeration
double description which is exact and entirely adequate at the small ranks
(<= 6 or so) this package targets.

Conventions:
  * vectors are tuples; matrices are sequences of row tuples/lists;
  * a "dual vector" u represents the halfspace {x : <u, x> >= 0};
  * `primitive` rescales a rational vector to the unique primitive integer
    vector on the same ray.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from math import gcd

from .errors import (
    NotStronglyConvex,
    RankMismatch,
    UnboundedRegion,
    ZeroVector,
)

# ---------------------------------------------------------------------------
# vectors


def dot(a, b):
    """Exact pairing <a, b> for int/Fraction entries."""
    if len(a) != len(b):
        raise RankMismatch(
            f"pairing of a length-{len(a)} with a length-{len(b)} vector"
        )
    return sum(x * y for x, y in zip(a, b))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vneg(a):
    return tuple(-x for x in a)


def vscale(c, a):
    return tuple(c * x for x in a)


def primitive(v):
    """The unique primitive integer vector on the ray Q>=0 * v.

    Accepts int/Fraction (or string) entries.  Raises ZeroVector on v = 0.

    >>> primitive((Fraction(-3, 2), Fraction(9, 4)))
    (-2, 3)
    """
    fr = [Fraction(x) for x in v]
    if not any(fr):
        raise ZeroVector("the zero vector spans no ray")
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# exact linear algebra over Q


def _rref(rows):
    """Reduced row echelon form over Q: returns (matrix, pivot_columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def mat_rank(rows):
    return len(_rref(rows)[1])


def nullspace(rows, n):
    """Primitive integer basis of {x in Q^n : rows @ x = 0}, deterministic.

    Each basis vector is primitive with its first nonzero entry positive.
    """
    rows = list(rows)
    for r in rows:
        if len(r) != n:
            raise RankMismatch(f"row of length {len(r)} in ambient rank {n}")
    m, pivots = _rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -m[ri][fc]
        p = primitive(v)
        first = next(x for x in p if x)
        if first < 0:
            p = vneg(p)
        basis.append(p)
    return basis


def det(rows):
    """Exact determinant; returns an int for integer input."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise RankMismatch("determinant of a non-square matrix")
    m = [[Fraction(x) for x in r] for r in rows]
    d = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            d = -d
        d *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return int(d) if d.denominator == 1 else d


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    Bt = list(zip(*B))
    return [[dot(row, col) for col in Bt] for row in A]


def mat_vec(A, v):
    """Matrix times column vector, returned as a tuple."""
    return tuple(dot(row, v) for row in A)


def mat_inverse(rows):
    """Exact inverse over Q (list of Fraction rows); ValueError if singular."""
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, r in enumerate(rows)]
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, n) if m[i][c] != 0), None)
        if pr is None:
            raise ValueError("matrix is singular")
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return [row[n:] for row in m]


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(A):
    """Smith normal form with transforms.

    Returns (S, D, T) with A = S * D * T, where S (k x k) and T (n x n) are
    unimodular integer matrices and D is diagonal with nonnegative invariant
    factors d1 | d2 | ... .  All matrices are lists of int lists.
    """
    k = len(A)
    n = len(A[0]) if k else 0
    D = [[int(x) for x in row] for row in A]
    if any(len(r) != n for r in D):
        raise RankMismatch("ragged matrix")
    S = identity_matrix(k)
    T = identity_matrix(n)

    # Row ops on D are compensated on S so that S*D*T stays constant; column
    # ops are compensated on T.
    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        for r in S:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, q):  # row_i += q*row_j
        D[i] = [x + q * y for x, y in zip(D[i], D[j])]
        for r in S:
            r[j] -= q * r[i]

    def row_neg(i):
        D[i] = [-x for x in D[i]]
        for r in S:
            r[i] = -r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        T[i], T[j] = T[j], T[i]

    def col_add(i, j, q):  # col_i += q*col_j
        for r in D:
            r[i] += q * r[j]
        T[j] = [x - q * y for x, y in zip(T[j], T[i])]

    def min_entry(t):
        best = None
        for i in range(t, k):
            for j in range(t, n):
                if D[i][j] and (best is None
                                or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(k, n):
        if min_entry(t) is None:
            break
        while True:
            bi, bj = min_entry(t)
            if bi != t:
                row_swap(t, bi)
            if bj != t:
                col_swap(t, bj)
            p = D[t][t]
            clean = True
            for i in range(t + 1, k):
                q = D[i][t] // p
                if q:
                    row_add(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    col_add(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            if D[t][t] < 0:
                row_neg(t)
            fix = None
            for i in range(t + 1, k):
                if any(D[i][j] % D[t][t] for j in range(t + 1, n)):
                    fix = i
                    break
            if fix is None:
                break
            row_add(t, fix, 1)  # pull a non-divisible entry into row t
        t += 1
    return S, D, T


def invariant_factors(A):
    _, D, _ = smith_normal_form(A)
    k = min(len(D), len(D[0]) if D else 0)
    return [D[i][i] for i in range(k) if D[i][i] != 0]


def unimodular_with_last_column(c):
    """A unimodular integer matrix whose last column is the primitive c."""
    n = len(c)
    S, D, T = smith_normal_form([list(c)])
    if D[0][0] != 1:
        raise ValueError("unimodular_with_last_column needs a primitive vector")
    rows = [list(r) for r in T]
    if S[0][0] == -1:
        rows[0] = [-x for x in rows[0]]
    # now row 0 of `rows` equals c and the matrix is unimodular
    M = transpose(rows)  # first column == c
    for row in M:
        row[0], row[n - 1] = row[n - 1], row[0]
    return [tuple(r) for r in M]


# ---------------------------------------------------------------------------
# cone duality (subset-enumeration double description)


def dual_description(gens, rank):
    """Generator description of the dual cone {u : <g, u> >= 0 for all g}.

    Returns (extremal, lineality):
      * lineality: primitive basis of {u : <g, u> = 0 for all g};
      * extremal: primitive representatives of the extreme rays of the dual
        modulo its lineality space, sorted.

    The dual cone is generated by extremal + lineality + (-lineality).

    Method: with r = rank of the generator matrix, every extreme ray of the
    dual (mod lineality) annihilates some rank-(r-1) subset of the
    generators; conversely a vector u0 spanning nullspace(subset) modulo the
    lineality is extreme iff the pairings <g, u0> have a single sign.
    """
    prim = []
    seen = set()
    for g in gens:
        p = primitive(g)
        if p not in seen:
            seen.add(p)
            prim.append(p)
    L = nullspace(prim, rank)
    r = rank - len(L)
    E = set()
    if r >= 1:
        for sub in itertools.combinations(prim, r - 1):
            ns = nullspace(sub, rank)
            if len(ns) != rank - r + 1:
                continue  # subset is rank deficient: its normals show up elsewhere
            picked = None
            for b in ns:
                vals = [dot(g, b) for g in prim]
                if any(vals):
                    picked = (b, vals)
                    break
            if picked is None:
                continue
            b, vals = picked
            if all(v >= 0 for v in vals):
                E.add(b)
            elif all(v <= 0 for v in vals):
                E.add(primitive(vneg(b)))
    return sorted(E), L


class Cone:
    """A finitely generated rational convex cone in Q^rank.

    Generators are normalized to primitive integer vectors, deduplicated and
    sorted; zero generators are dropped, so Cone(n, []) is the origin {0}.
    Dual description, extremal rays and the face lattice are computed lazily
    and cached.
    """

    __slots__ = ("rank", "gens", "_dual_pair", "_dual", "_rays", "_dim",
                 "_faces", "_pointed")

    def __init__(self, rank, generators=()):
        if rank < 0:
            raise RankMismatch("negative rank")
        out = []
        seen = set()
        for g in generators:
            vec = tuple(Fraction(x) for x in g)
            if len(vec) != rank:
                raise RankMismatch(
                    f"generator of length {len(vec)} in ambient rank {rank}"
                )
            if not any(vec):
                continue
            p = primitive(vec)
            if p not in seen:
                seen.add(p)
                out.append(p)
        self.rank = rank
        self.gens = tuple(sorted(out))
        self._dual_pair = None
        self._dual = None
        self._rays = None
        self._dim = None
        self._faces = None
        self._pointed = None

    def __repr__(self):
        return f"Cone(rank={self.rank}, gens={list(self.gens)})"

    # -- duality ------------------------------------------------------------

    def dual_pair(self):
        if self._dual_pair is None:
            self._dual_pair = dual_description(self.gens, self.rank)
        return self._dual_pair

    def dual_generators(self):
        E, L = self.dual_pair()
        return tuple(E) + tuple(L) + tuple(vneg(v) for v in L)

    def dual(self):
        if self._dual is None:
            self._dual = Cone(self.rank, self.dual_generators())
        return self._dual

    # -- basic predicates -----------------------------------------------------

    def dim(self):
        if self._dim is None:
            self._dim = mat_rank(self.gens)
        return self._dim

    def is_strongly_convex(self):
        if self._pointed is None:
            self._pointed = mat_rank(self.dual_generators()) == self.rank
        return self._pointed

    def lineality_basis(self):
        return nullspace(self.dual_generators(), self.rank)

    def contains(self, v):
        vec = tuple(Fraction(x) for x in v)
        if len(vec) != self.rank:
            raise RankMismatch(
                f"point of length {len(vec)} in ambient rank {self.rank}"
            )
        return all(dot(u, vec) >= 0 for u in self.dual_generators())

    def contains_cone(self, other):
        return all(self.contains(g) for g in other.gens)

    def equals(self, other):
        return (self.rank == other.rank
                and self.contains_cone(other)
                and other.contains_cone(self))

    # -- extremal rays and faces ----------------------------------------------

    def rays(self):
        """Sorted primitive extremal rays; requires strong convexity."""
        if self._rays is None:
            if not self.is_strongly_convex():
                raise NotStronglyConvex(
                    "extremal rays are only defined for strongly convex cones"
                )
            E, L = dual_description(self.dual_generators(), self.rank)
            assert not L  # pointed cone: double dual has no lineality
            self._rays = tuple(E)
        return self._rays

    def face_ray_sets(self):
        """All faces as frozensets of indices into self.rays().

        The empty set is the face {0}; the full index set is the cone itself.
        """
        if self._faces is None:
            rays = self.rays()
            E, _ = self.dual_pair()
            base = [
                frozenset(i for i, r in enumerate(rays) if dot(r, u) == 0)
                for u in E
            ]
            sets = set(base)
            sets.add(frozenset(range(len(rays))))
            changed = True
            while changed:
                changed = False
                for a, b in itertools.combinations(list(sets), 2):
                    c = a & b
                    if c not in sets:
                        sets.add(c)
                        changed = True
            self._faces = sets
        return self._faces

    def face_table(self):
        """dict: face index set -> dimension of that face."""
        rays = self.rays()
        return {
            fs: mat_rank([rays[i] for i in fs])
            for fs in self.face_ray_sets()
        }

    def faces(self):
        """dict: face index set -> Cone, covering the whole face lattice."""
        rays = self.rays()
        return {
            fs: Cone(self.rank, [rays[i] for i in fs])
            for fs in self.face_ray_sets()
        }

    def facet_ray_sets(self):
        d = self.dim()
        return [fs for fs, fd in self.face_table().items() if fd == d - 1]

    def canonical(self):
        """Canonical form of a strongly convex cone: its sorted ray tuple."""
        return self.rays()


# ---------------------------------------------------------------------------
# lattice points of rational polyhedra


def _normalize_rows(rank, inequalities, equalities):
    """Flatten to a single >= row list; detect trivially empty systems.

    Returns (rows, empty) where rows contains no zero normals.
    """
    rows = []
    for u, b in inequalities:
        rows.append((tuple(int(x) for x in u), int(b)))
    for u, b in equalities:
        u = tuple(int(x) for x in u)
        rows.append((u, int(b)))
        rows.append((vneg(u), -int(b)))
    clean = []
    empty = False
    for u, b in rows:
        if len(u) != rank:
            raise RankMismatch(
                f"constraint of length {len(u)} in ambient rank {rank}"
            )
        if not any(u):
            if b > 0:
                empty = True
            continue
        clean.append((u, b))
    return clean, empty


def _bounding_box(rank, rows):
    """Integer bounding box of the bounded region {x : rows}, or None if empty.

    Assumes the recession cone of the region is {0}.
    """
    hrows = [u + (-b,) for u, b in rows]
    hrows.append((0,) * rank + (1,))
    HE, HL = dual_description(hrows, rank + 1)
    assert not HL
    if not HE:
        return None
    los = [None] * rank
    his = [None] * rank
    for g in HE:
        t = g[-1]
        assert t > 0  # bounded region: homogenization has no height-0 rays
        for i in range(rank):
            val = Fraction(g[i], t)
            if los[i] is None or val < los[i]:
                los[i] = val
            if his[i] is None or val > his[i]:
                his[i] = val
    return [(math.floor(lo), math.ceil(hi)) for lo, hi in zip(los, his)]


def lattice_points(rank, inequalities=(), equalities=(), box=None):
    """All integer points satisfying <u,x> >= b / <u,x> == b, lex sorted.

    Without an explicit `box`, the region must be bounded (else
    UnboundedRegion); a bounding box is then derived exactly from the
    homogenization of the constraint system.  With `box` (a list of
    (lo, hi) pairs per coordinate), enumeration is restricted to the box.
    """
    rows, empty = _normalize_rows(rank, inequalities, equalities)
    if empty:
        return []
    if box is None:
        E, L = dual_description([u for u, _ in rows], rank) if rows else ([], nullspace([], rank))
        if E or L:
            raise UnboundedRegion(
                "the region is unbounded; pass an explicit box"
            )
        box = _bounding_box(rank, rows)
        if box is None:
            return []
    else:
        box = [(int(lo), int(hi)) for lo, hi in box]
        if len(box) != rank:
            raise RankMismatch("box length disagrees with rank")
    pts = []
    for p in itertools.product(*[range(lo, hi + 1) for lo, hi in box]):
        if all(dot(u, p) >= b for u, b in rows):
            pts.append(p)
    pts.sort()
    return pts


def integer_feasible(rank, inequalities=(), equalities=()):
    """Exact test: does {x : <u,x> >= b, <v,x> == c} contain a lattice point?

    Rational feasibility is not enough (a rational polyhedron can be
    lattice-free), so unbounded regions are reduced recursively: pick an
    integer direction c in the recession cone, apply a unimodular change of
    coordinates making c the last basis vector, drop the constraints that
    become slack along c and recurse in one dimension fewer.
    """
    rows, empty = _normalize_rows(rank, inequalities, equalities)
    if empty:
        return False
    return _int_feasible(rank, rows)


def _int_feasible(n, rows):
    clean = []
    for u, b in rows:
        if not any(u):
            if b > 0:
                return False
            continue
        clean.append((u, b))
    rows = clean
    if n == 0 or not rows:
        return True
    # rational feasibility via the homogenization
    hrows = [u + (-b,) for u, b in rows]
    hrows.append((0,) * n + (1,))
    HE, HL = dual_description(hrows, n + 1)
    if not any(g[-1] for g in HE) and not any(g[-1] for g in HL):
        return False
    KE, KL = dual_description([u for u, _ in rows], n)
    if not KE and not KL:
        # bounded region: scan the box, stop at the first hit
        box = _bounding_box(n, rows)
        if box is None:
            return False
        for p in itertools.product(*[range(lo, hi + 1) for lo, hi in box]):
            if all(dot(u, p) >= b for u, b in rows):
                return True
        return False
    c = KL[0] if KL else KE[0]
    M = unimodular_with_last_column(c)
    cols = list(zip(*M))
    new_rows = []
    for u, b in rows:
        um = tuple(dot(u, col) for col in cols)
        t = um[-1]  # = <u, c> >= 0 since c lies in the recession cone
        assert t >= 0
        if t == 0:
            new_rows.append((um[:-1], b))
    return _int_feasible(n - 1, new_rows)
