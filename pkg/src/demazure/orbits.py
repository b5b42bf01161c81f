"""Orbit structure of a corank-one additive extension acting through a root.

Given a fan Sigma and a verified root e with distinguished ray rho_e, the
torus orbits of the toric variety (one per cone) glue under the extended
group G in a completely combinatorial way: orbits merge in pairs

    (sigma_1, sigma_2)   with   sigma_2 = cone(sigma_1, rho_e),

one pair for every cone sigma_1 on which e vanishes identically; every
other torus orbit stays a single G-orbit and its points are fixed by the
additive part.  This module computes the pairs, the resulting partition,
stabilizer data of generic points, invariant divisors, the existence test
for such a structure, fan automorphisms and the classification of roots up
to automorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .errors import ConeNotInFan, NotARoot, UnsupportedFan
from .lattice import (
    det,
    dot,
    mat_inverse,
    mat_rank,
    mat_vec,
    smith_normal_form,
)
from .roots import DemazureRoot, check_condition2, extension_in_fan


def verify_root(fan, e):
    """Return the distinguished ray index of e; raise NotARoot otherwise."""
    e = tuple(int(x) for x in e)
    if len(e) != fan.rank:
        raise NotARoot(f"character of length {len(e)} in rank {fan.rank}")
    vals = [dot(r, e) for r in fan.rays]
    neg = [i for i, v in enumerate(vals) if v < 0]
    if len(neg) != 1 or vals[neg[0]] != -1:
        raise NotARoot(
            f"{e} pairs to {vals} with the rays; need exactly one -1 and "
            "no other negative values"
        )
    i = neg[0]
    ok, witness = check_condition2(fan, e, i)
    if not ok:
        raise NotARoot(
            f"{e} vanishes on cone {sorted(witness)} but its extension by "
            f"ray {i} is not in the fan"
        )
    return i


@dataclass(frozen=True)
class HeConnectedPair:
    """Orbit-gluing pair: cone2 = cone(cone1, rho_e), cone1 = cone2 ∩ e^⊥."""

    cone1: tuple
    cone2: tuple


def he_connected_pairs(fan, e):
    """All orbit-gluing pairs for a verified root, two ways, cross-checked."""
    i = verify_root(fan, e)
    rays = fan.rays

    pairs_a = []
    for key in fan.cones:
        if i in key:
            continue
        if all(dot(rays[j], e) == 0 for j in key):
            # condition (2) guarantees the extension is a fan cone
            assert extension_in_fan(fan, key, i)
            pairs_a.append((key, key | {i}))

    # independent route: sigma_2 ranges over cones containing rho_e with
    # e <= 0 on all rays; sigma_1 is the facet cut out by e = 0
    pairs_b = []
    for key in fan.cones:
        if i in key and all(dot(rays[j], e) <= 0 for j in key):
            face = frozenset(j for j in key if dot(rays[j], e) == 0)
            pairs_b.append((face, key))

    assert sorted(pairs_a) == sorted(pairs_b), "orbit-pair routes disagree"

    out = []
    for c1, c2 in pairs_a:
        d1 = fan.cones[c1].dim
        d2 = fan.cones[c2].dim
        assert d2 == d1 + 1
        out.append(HeConnectedPair(tuple(sorted(c1)), tuple(sorted(c2))))
    out.sort(key=lambda p: (len(p.cone1), p.cone1))
    return out


@dataclass(frozen=True)
class StabilizerData:
    torus_dim: int
    component_order: int
    contains_ga: bool


@dataclass(frozen=True)
class Orbit:
    """A G-orbit: one or two torus-orbit cones; dim of the orbit; whether the
    additive subgroup fixes its points; generic stabilizer data."""

    cones: tuple  # tuple of sorted index tuples; cones[0] is the open one
    dim: int
    ga_fixed: bool
    stabilizer: StabilizerData


@dataclass(frozen=True)
class GOrbitPartition:
    root: DemazureRoot
    orbits: tuple

    @property
    def orbit_count(self):
        return len(self.orbits)


def _stabilizer_core(fan, e, key, contains_ga):
    """Generic stabilizer inside G of the torus orbit of `key`.

    The stabilizer torus of the ambient torus orbit has cocharacter lattice
    N ∩ span(sigma); intersecting with the corank-one torus ker(e) drops the
    dimension by one unless e vanishes on the span, and contributes a cyclic
    component group of order gcd(<b_i, e>) over a saturated basis b_i.
    """
    idxs = sorted(key)
    if not idxs:
        return StabilizerData(0, 1, contains_ga)
    A = [list(fan.rays[j]) for j in idxs]
    _, D, T = smith_normal_form(A)
    k = min(len(D), len(D[0]))
    r = sum(1 for t in range(k) if D[t][t] != 0)
    sat_basis = [tuple(T[t]) for t in range(r)]
    vals = [dot(b, e) for b in sat_basis]
    c = 0
    for v in vals:
        c = gcd(c, v)
    if c == 0:
        return StabilizerData(r, 1, contains_ga)
    return StabilizerData(r - 1, c, contains_ga)


def g_orbit_partition(fan, e):
    """The full G-orbit partition of the torus orbits for a verified root."""
    i = verify_root(fan, e)
    pairs = he_connected_pairs(fan, e)
    paired = set()
    for p in pairs:
        paired.add(frozenset(p.cone1))
        paired.add(frozenset(p.cone2))

    orbits = []
    for p in pairs:
        open_key = frozenset(p.cone1)
        dim = fan.rank - fan.cones[open_key].dim
        stab = _stabilizer_core(fan, e, open_key, contains_ga=False)
        orbits.append(Orbit((p.cone1, p.cone2), dim, False, stab))
    for key, ref in fan.cones.items():
        if key in paired:
            continue
        stab = _stabilizer_core(fan, e, key, contains_ga=True)
        orbits.append(
            Orbit((ref.indices,), fan.rank - ref.dim, True, stab)
        )
    orbits.sort(key=lambda o: (len(o.cones[0]), o.cones[0]))

    # counting identity: #G-orbits = #cones - #{sigma : e|_sigma = 0}
    assert len(orbits) == len(fan.cones) - len(pairs)
    return GOrbitPartition(DemazureRoot(i, tuple(int(x) for x in e)),
                           tuple(orbits))


def stabilizer_data(fan, e, cone):
    """Stabilizer data of the generic point of one torus-orbit cone."""
    key = frozenset(int(i) for i in cone)
    if key not in fan.cones:
        raise ConeNotInFan(f"no cone with rays {sorted(key)}")
    verify_root(fan, e)
    pairs = he_connected_pairs(fan, e)
    in_pair = any(
        key == frozenset(p.cone1) or key == frozenset(p.cone2) for p in pairs
    )
    return _stabilizer_core(fan, e, key, contains_ga=not in_pair)


def g_invariant_divisors(fan, e):
    """Ray indices whose divisors are invariant: all but the distinguished."""
    i = verify_root(fan, e)
    return [j for j in range(len(fan.rays)) if j != i]


def admits_g_structure(fan):
    """Does the fan admit any Demazure root at all?  Exact decision.

    The root conditions are split by the zero pattern Z = {j : <n_j,e> = 0}.
    For a fixed distinguished ray i and pattern Z, condition (2) depends
    only on (i, Z), and condition (1) becomes the integer program
    <n_i,e> = -1, <n_j,e> = 0 on Z, <n_j,e> >= 1 elsewhere, decided exactly.
    """
    l = len(fan.rays)
    n = fan.rank
    for i in range(l):
        others = [j for j in range(l) if j != i]
        for bits in range(2 ** len(others)):
            Z = frozenset(
                others[k] for k in range(len(others)) if bits >> k & 1
            )
            ok = True
            for key in fan.cones:
                if key <= Z and not extension_in_fan(fan, key, i):
                    ok = False
                    break
            if not ok:
                continue
            eqs = [(fan.rays[i], -1)] + [(fan.rays[j], 0) for j in sorted(Z)]
            ineqs = [
                (fan.rays[j], 1) for j in others if j not in Z
            ]
            from .lattice import integer_feasible

            if integer_feasible(n, ineqs, eqs):
                return True
    return False


@dataclass(frozen=True)
class FanAutomorphism:
    """A lattice automorphism preserving the fan; matrix acts on columns."""

    matrix: tuple  # tuple of row tuples, det = +/-1
    ray_permutation: tuple


def fan_automorphisms(fan):
    """All lattice automorphisms of N mapping the fan onto itself.

    Requires the rays to span the ambient space (otherwise the group is not
    finite and we refuse: UnsupportedFan).  Search is over permutations of
    the rays; the candidate matrix is solved from a fixed independent
    subset and then verified on all rays and all cones.
    """
    rays = fan.rays
    l = len(rays)
    n = fan.rank
    if mat_rank(rays) < n:
        raise UnsupportedFan(
            "rays do not span the ambient space; the automorphism group "
            "is not finite"
        )
    base = next(
        idxs
        for idxs in itertools.combinations(range(l), n)
        if det([[rays[i][r] for i in idxs] for r in range(n)]) != 0
    )
    A = [[rays[i][r] for i in base] for r in range(n)]  # columns = base rays
    Ainv = mat_inverse(A)
    cone_keys = set(fan.cones)

    autos = []
    for perm in itertools.permutations(range(l)):
        B = [[rays[perm[i]][r] for i in base] for r in range(n)]
        phi = [
            [sum(B[r][k] * Ainv[k][c] for k in range(n)) for c in range(n)]
            for r in range(n)
        ]
        if any(x.denominator != 1 for row in phi for x in row):
            continue
        M = [tuple(int(x) for x in row) for row in phi]
        if abs(det(M)) != 1:
            continue
        if any(mat_vec(M, rays[j]) != rays[perm[j]] for j in range(l)):
            continue
        if any(
            frozenset(perm[i] for i in key) not in cone_keys
            for key in cone_keys
        ):
            continue
        autos.append(FanAutomorphism(tuple(M), tuple(perm)))
    autos.sort(key=lambda a: a.ray_permutation)
    return autos


def root_image(automorphism, root):
    """Image of a root under the contragredient action e -> (phi^-1)^T e."""
    M = [list(r) for r in automorphism.matrix]
    inv = mat_inverse(M)  # integral because det = +/-1
    invT = list(zip(*inv))
    e2 = tuple(int(x) for x in mat_vec(invT, root.e))
    return DemazureRoot(automorphism.ray_permutation[root.ray_index], e2)


def classify_roots(fan, roots):
    """Partition roots into classes under the fan automorphism group.

    Returns a list of classes (sorted lists of roots); classes are ordered
    by their first member.  Images that leave the supplied root list (which
    can happen for a truncated enumeration) do not merge anything.
    """
    autos = fan_automorphisms(fan)
    roots = sorted(roots)
    index = {r: k for k, r in enumerate(roots)}
    parent = list(range(len(roots)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for phi in autos:
        for r in roots:
            img = root_image(phi, r)
            # the image is always a root of the fan; it may fall outside a
            # truncated input list
            vals = [dot(v, img.e) for v in fan.rays]
            assert vals[img.ray_index] == -1
            assert all(
                v >= 0 for j, v in enumerate(vals) if j != img.ray_index
            )
            if img in index:
                union(index[r], index[img])

    groups = {}
    for r, k in index.items():
        groups.setdefault(find(k), []).append(r)
    classes = [sorted(g) for g in groups.values()]
    classes.sort(key=lambda g: g[0])
    return classes
