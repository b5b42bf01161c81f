"""Demazure roots of strongly convex cones and of fans.

A root of a fan Sigma with rays rho_1, ..., rho_l (primitive generators
n_1, ..., n_l) is a character e in M with

  (1)  <n_i, e> = -1 for exactly one i (the distinguished ray rho_e) and
       <n_j, e> >= 0 for all j != i;
  (2)  for every cone sigma in Sigma on which e vanishes identically,
       cone(sigma, rho_e) is again a cone of Sigma.

For a single strongly convex cone only the sign conditions (1) over the
cone's own rays apply.  Roots are in bijection with the homogeneous locally
nilpotent derivations of the homogeneous coordinate/affine algebra, i.e.
with one-parameter additive group actions normalized by the torus.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoRays, UnboundedRoots
from .lattice import Cone, dot, dual_description, lattice_points


@dataclass(frozen=True, order=True)
class DemazureRoot:
    """A root: distinguished ray index plus the character e."""

    ray_index: int
    e: tuple


@dataclass(frozen=True)
class RootSet:
    """Result of fan root enumeration.

    complete_enumeration is True when every per-ray search region was
    bounded, so `roots` is the full (finite) root set; otherwise `roots`
    lists exactly the roots with max |coordinate| <= the supplied bound.
    """

    roots: tuple
    complete_enumeration: bool

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def roots_of_cone(cone, bound):
    """Roots of a strongly convex cone with |e_i| <= bound, grouped by ray.

    The root region of a ray is almost always infinite for a single cone,
    so the box bound is mandatory here.  Output is ordered by distinguished
    ray index (into cone.rays()), then lexicographically in e.
    """
    rays = cone.rays()
    if not rays:
        raise NoRays("the cone {0} has no rays and hence no roots")
    bound = int(bound)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    n = cone.rank
    box = [(-bound, bound)] * n
    out = []
    for i, rho in enumerate(rays):
        eqs = [(rho, -1)]
        ineqs = [(rays[j], 0) for j in range(len(rays)) if j != i]
        for e in lattice_points(n, ineqs, eqs, box=box):
            out.append(DemazureRoot(i, e))
    return out


def _region_bounded(fan, i):
    """Is {e : <n_i,e> = -1, <n_j,e> >= 0} bounded?  Checked via its
    recession cone {e : <n_i,e> = 0, <n_j,e> >= 0}."""
    rows = [fan.rays[j] for j in range(len(fan.rays)) if j != i]
    rows += [fan.rays[i], tuple(-x for x in fan.rays[i])]
    E, L = dual_description(rows, fan.rank)
    return not E and not L


def extension_in_fan(fan, key, ray_index):
    """Is cone(sigma, rho) a cone of the fan?  sigma given by ray indices."""
    target = Cone(
        fan.rank, [fan.rays[j] for j in key] + [fan.rays[ray_index]]
    )
    if not target.is_strongly_convex():
        return False
    idxs = set()
    for r in target.rays():
        j = fan.ray_index(r)
        if j is None:
            return False
        idxs.add(j)
    return frozenset(idxs) in fan.cones


def check_condition2(fan, e, ray_index):
    """Condition (2) for a candidate root: returns (ok, witness).

    witness is the ray index set of the first cone sigma with e|_sigma = 0
    for which cone(sigma, rho_e) is not in the fan, or None.
    """
    rays = fan.rays
    for key in fan.cones:
        if ray_index in key:
            continue  # <rho_e, e> = -1 != 0, so rho_e never lies in such sigma
        if any(dot(rays[j], e) != 0 for j in key):
            continue
        if not extension_in_fan(fan, key, ray_index):
            return False, key
    return True, None


def roots_of_fan(fan, bound=None):
    """All Demazure roots of a fan.

    If every per-ray search region is bounded (e.g. for complete fans) the
    enumeration is exact and any supplied bound is ignored.  Otherwise a
    bound B is required (UnboundedRoots names an offending ray if missing)
    and the result is truncated to max |e_i| <= B.
    """
    l = len(fan.rays)
    if l == 0:
        raise NoRays("the fan has no rays")
    unbounded = [i for i in range(l) if not _region_bounded(fan, i)]
    if unbounded and bound is None:
        raise UnboundedRoots(unbounded[0])
    complete = not unbounded
    n = fan.rank
    roots = []
    for i in range(l):
        eqs = [(fan.rays[i], -1)]
        ineqs = [(fan.rays[j], 0) for j in range(l) if j != i]
        if complete:
            pts = lattice_points(n, ineqs, eqs)
        else:
            box = [(-int(bound), int(bound))] * n
            pts = lattice_points(n, ineqs, eqs, box=box)
        for e in pts:
            ok, _ = check_condition2(fan, e, i)
            if ok:
                roots.append(DemazureRoot(i, e))
    return RootSet(tuple(roots), complete)
