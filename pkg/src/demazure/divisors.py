"""Polyhedral divisors on A^1 and P^1 and their additive symmetries.

A polyhedral divisor assigns to finitely many points z of the base curve a
polyhedron Delta_z with a common pointed tail cone sigma; evaluating at a
weight m in the dual of sigma gives an ordinary Q-divisor sum_z h_z(m) [z],
whose sections are the weight-m part of a coordinate ring.  A coloring
distinguishes a point z0 and one vertex of every coefficient away from
infinity; the coherence conditions below decide whether that choice yields a
one-parameter additive symmetry, and if so the divisor can be rewritten with
support in {0, infinity} and realized torically one rank higher.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import CurveCarrier, HomogeneousLND
from .errors import (
    InvalidColoring,
    NoDegreeZeroLND,
    NotCoherent,
    NotNormalized,
    NotProper,
    NotStronglyConvex,
    RankMismatch,
    WeightOutsideDual,
)
from .lattice import Cone, dot, primitive, vadd, vsub


class _Infinity:
    """The point at infinity on P^1 (a singleton sentinel)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Infinity()


def _point(z):
    if z is INF:
        return z
    return Fraction(z)


def _point_key(z):
    return (1, Fraction(0)) if z is INF else (0, Fraction(z))


class TailedPolyhedron:
    """conv(vertices) + tail cone, with the vertex list pruned to minimal."""

    __slots__ = ("tail", "vertices")

    def __init__(self, tail, vertices):
        vs = []
        seen = set()
        for v in vertices:
            vec = tuple(Fraction(x) for x in v)
            if len(vec) != tail.rank:
                raise RankMismatch(
                    f"vertex of length {len(vec)} in ambient rank {tail.rank}"
                )
            if vec not in seen:
                seen.add(vec)
                vs.append(vec)
        if not vs:
            raise ValueError("a polyhedron needs at least one vertex")
        self.tail = tail
        self.vertices = tuple(sorted(self._prune(vs)))

    @property
    def rank(self):
        return self.tail.rank

    def _prune(self, vs):
        # v is redundant iff (v, 1) lies in the cone spanned by the
        # homogenized remaining vertices and the tail directions
        keep = list(vs)
        i = 0
        while i < len(keep):
            others = keep[:i] + keep[i + 1:]
            if others and self._hull_cone(others).contains(keep[i] + (1,)):
                del keep[i]
            else:
                i += 1
        return keep

    def _hull_cone(self, vs):
        gens = [v + (1,) for v in vs]
        gens += [g + (0,) for g in self.tail.gens]
        return Cone(self.rank + 1, gens)

    def contains_point(self, p):
        vec = tuple(Fraction(x) for x in p)
        return self._hull_cone(list(self.vertices)).contains(vec + (1,))

    def is_trivial(self):
        """True when the polyhedron is the tail cone itself."""
        return self.vertices == (tuple(Fraction(0) for _ in range(self.rank)),)

    def support_min(self, m):
        """min <v, m> over the polyhedron, for m in the dual of the tail."""
        return min(dot(v, m) for v in self.vertices)

    def translate(self, w):
        return TailedPolyhedron(self.tail, [vadd(v, w) for v in self.vertices])

    def minkowski(self, other):
        tail = Cone(self.rank, self.tail.gens + other.tail.gens)
        return TailedPolyhedron(
            tail, [vadd(v, w) for v in self.vertices for w in other.vertices]
        )

    def equals(self, other):
        return (self.rank == other.rank
                and self.tail.equals(other.tail)
                and self.vertices == other.vertices)

    def __repr__(self):
        return (f"TailedPolyhedron(vertices={list(self.vertices)}, "
                f"tail={list(self.tail.gens)})")


def trivial_polyhedron(tail):
    return TailedPolyhedron(tail, [tuple(0 for _ in range(tail.rank))])


class FreeRankOne:
    """Weight space of a divisor over A^1: free of rank one over k[t].

    ``shifts`` lists (z, k) pairs; the generator is prod_z (t - z)^k.
    """

    __slots__ = ("shifts",)

    def __init__(self, shifts):
        self.shifts = tuple(
            (z, k) for z, k in sorted(shifts, key=lambda p: _point_key(p[0]))
            if k
        )

    def __eq__(self, other):
        return isinstance(other, FreeRankOne) and self.shifts == other.shifts

    __hash__ = None

    def __repr__(self):
        return f"FreeRankOne({list(self.shifts)})"


class PolyhedralDivisor:
    """Finitely many coefficient polyhedra over points of A^1 or P^1.

    ``parts`` maps a point (a rational number, or INF over P^1) to its
    coefficient; coefficients equal to the tail cone are dropped.  The
    common tail cone must be strongly convex.
    """

    __slots__ = ("curve", "tail", "parts")

    def __init__(self, curve, tail, parts=()):
        if curve not in ("A1", "P1"):
            raise ValueError("curve must be 'A1' or 'P1'")
        if not tail.is_strongly_convex():
            raise NotStronglyConvex("the tail cone must be strongly convex")
        items = parts.items() if hasattr(parts, "items") else parts
        clean = {}
        for z, piece in items:
            z = _point(z)
            if z is INF and curve == "A1":
                raise ValueError("A^1 has no point at infinity")
            if not isinstance(piece, TailedPolyhedron):
                piece = TailedPolyhedron(tail, piece)
            if not piece.tail.equals(tail):
                raise ValueError("all coefficients must share the tail cone")
            if z in clean:
                raise ValueError(f"duplicate point {z!r}")
            if not piece.is_trivial():
                clean[z] = piece
        self.curve = curve
        self.tail = tail
        self.parts = clean

    @property
    def rank(self):
        return self.tail.rank

    def support(self):
        return tuple(sorted(self.parts, key=_point_key))

    def coefficient(self, z):
        return self.parts.get(_point(z)) or trivial_polyhedron(self.tail)

    def evaluate(self, m):
        """The Q-divisor sum h_z(m) [z] as a {z: value} dict.

        Only weights in the dual of the tail cone evaluate to something
        finite; anything else raises WeightOutsideDual.
        """
        m = tuple(Fraction(x) for x in m)
        if len(m) != self.rank:
            raise RankMismatch(
                f"weight of length {len(m)} in ambient rank {self.rank}"
            )
        if any(dot(g, m) < 0 for g in self.tail.gens):
            raise WeightOutsideDual(f"{m} pairs negatively with the tail")
        return {z: piece.support_min(m) for z, piece in self.parts.items()}

    def degree(self):
        """Minkowski sum of all coefficients (P^1 only)."""
        if self.curve != "P1":
            raise ValueError("the degree polyhedron only exists over P^1")
        total = trivial_polyhedron(self.tail)
        for piece in self.parts.values():
            total = total.minkowski(piece)
        return total

    def is_proper(self):
        """Whether the evaluations are semiample, and big inside the cone.

        Over A^1 this always holds.  Over P^1 it amounts to the degree
        polyhedron sitting inside the tail cone without meeting the origin.
        """
        if self.curve == "A1":
            return True
        deg = self.degree()
        if not all(self.tail.contains(v) for v in deg.vertices):
            return False
        return not deg.contains_point(tuple(0 for _ in range(self.rank)))

    def weight_dim(self, m):
        """Size of a weight space: a dimension over P^1, a module over A^1."""
        values = self.evaluate(m)
        if self.curve == "P1":
            total = sum(math.floor(v) for v in values.values())
            return max(0, 1 + total)
        return FreeRankOne(
            (z, -math.floor(v)) for z, v in values.items()
        )

    def equals(self, other):
        if (self.curve != other.curve or self.rank != other.rank
                or not self.tail.equals(other.tail)):
            return False
        if set(self.parts) != set(other.parts):
            return False
        return all(self.parts[z].equals(other.parts[z]) for z in self.parts)

    def __repr__(self):
        inside = ", ".join(
            f"{z!r}: {piece!r}" for z, piece in
            sorted(self.parts.items(), key=lambda kv: _point_key(kv[0]))
        )
        return f"PolyhedralDivisor({self.curve!r}, {{{inside}}})"


class ColoredDivisor:
    """A polyhedral divisor with a distinguished point and chosen vertices.

    ``z0`` is the distinguished point and ``vertices`` picks one vertex of
    the coefficient at z0 and at every support point other than ``zinf``
    (the complementary point, required over P^1).  The chosen vertices must
    be lattice points away from z0, and their sum must be a vertex of the
    Minkowski sum of the coefficients involved.
    """

    __slots__ = ("divisor", "z0", "zinf", "vertices")

    def __init__(self, divisor, z0, vertices, zinf=None):
        z0 = _point(z0)
        if divisor.curve == "P1":
            if zinf is None:
                raise ValueError("a coloring over P^1 must name zinf")
            zinf = _point(zinf)
            if z0 == zinf:
                raise ValueError("z0 and zinf must differ")
        else:
            if zinf is not None:
                raise ValueError("A^1 has no complementary point")
            if z0 is INF:
                raise ValueError("z0 must be a point of A^1")
        cprime = {z0} | {z for z in divisor.parts if z != zinf}
        normalized = {_point(z): v for z, v in vertices.items()}
        if set(normalized) != cprime:
            raise InvalidColoring(
                "need exactly one chosen vertex for each of "
                f"{sorted(cprime, key=_point_key)!r}"
            )
        chosen = {}
        for z, v in normalized.items():
            vec = tuple(Fraction(x) for x in v)
            piece = divisor.coefficient(z)
            if vec not in piece.vertices:
                raise InvalidColoring(
                    f"{vec} is not a vertex of the coefficient at {z!r}"
                )
            if z != z0 and any(x.denominator != 1 for x in vec):
                raise InvalidColoring(
                    f"the chosen vertex at {z!r} must be a lattice point"
                )
            chosen[z] = vec
        total = None
        vdeg = tuple(Fraction(0) for _ in range(divisor.rank))
        for z in chosen:
            piece = divisor.coefficient(z)
            total = piece if total is None else total.minkowski(piece)
            vdeg = vadd(vdeg, chosen[z])
        if vdeg not in total.vertices:
            raise InvalidColoring(
                "the chosen vertices do not sum to a vertex of the total"
            )
        self.divisor = divisor
        self.z0 = z0
        self.zinf = zinf
        self.vertices = chosen

    @property
    def v0(self):
        return self.vertices[self.z0]

    @property
    def v_deg(self):
        out = tuple(Fraction(0) for _ in range(self.divisor.rank))
        for v in self.vertices.values():
            out = vadd(out, v)
        return out

    def c_prime(self):
        return tuple(sorted(self.vertices, key=_point_key))

    def __repr__(self):
        return (f"ColoredDivisor(z0={self.z0!r}, zinf={self.zinf!r}, "
                f"vertices={self.vertices!r})")


@dataclass(frozen=True)
class CoherencePair:
    """A coloring together with a degree that passed all coherence checks."""

    colored: ColoredDivisor
    e: tuple
    d: int
    s: int
    sigma_tilde: Cone
    rho_tilde: tuple
    e_tilde: tuple


@dataclass(frozen=True)
class CoherenceViolation:
    condition: str  # "i" | "ii" | "iii" | "iv"
    message: str


def coherent_check(colored, e):
    """Decide whether (coloring, degree) yields an additive symmetry.

    Returns a CoherencePair on success and a CoherenceViolation naming the
    first failed condition otherwise:

      (i)   the twist s is integral, the lifted cone is strongly convex,
            the lift of the chosen vertex at z0 spans an extremal ray, and
            the lifted degree pairs nonnegatively with the other rays;
      (ii)  away from z0, every other vertex exceeds the chosen one by at
            least 1 against the degree;
      (iii) at z0 the same holds after clearing the denominator d;
      (iv)  over P^1 the vertices at zinf are bounded below by the degree
            pairing of the total chosen vertex.
    """
    div = colored.divisor
    e = tuple(int(x) for x in e)
    if len(e) != div.rank:
        raise RankMismatch(
            f"degree of length {len(e)} in ambient rank {div.rank}"
        )
    v0 = colored.v0
    d = math.lcm(*(x.denominator for x in v0)) if v0 else 1
    num = -1 - d * dot(v0, e)
    if num % d != 0:
        return CoherenceViolation(
            "i", f"the twist (-1 - d<v0, e>)/d = {Fraction(num, d)} is not an integer"
        )
    s = num // d

    delta_gens = list(div.tail.gens)
    for z, vz in colored.vertices.items():
        for v in div.coefficient(z).vertices:
            if v != vz:
                delta_gens.append(vsub(v, vz))
    lifted = [g + (0,) for g in delta_gens]
    lifted.append(v0 + (Fraction(1),))
    if div.curve == "P1":
        shift = vsub(colored.v_deg, v0)
        for w in div.coefficient(colored.zinf).vertices:
            lifted.append(vadd(w, shift) + (Fraction(-1),))
    sigma_tilde = Cone(div.rank + 1, lifted)
    if not sigma_tilde.is_strongly_convex():
        return CoherenceViolation(
            "i", "the lifted cone is not strongly convex"
        )
    rho_tilde = primitive(v0 + (Fraction(1),))
    rays = sigma_tilde.rays()
    if rho_tilde not in rays:
        return CoherenceViolation(
            "i", f"the lifted vertex ray {rho_tilde} is not extremal"
        )

    for z in colored.c_prime():
        if z == colored.z0:
            continue
        vz = colored.vertices[z]
        for v in div.coefficient(z).vertices:
            if v != vz and dot(v, e) < 1 + dot(vz, e):
                return CoherenceViolation(
                    "ii",
                    f"vertex {v} at {z!r} pairs below the chosen one + 1",
                )
    for v in div.coefficient(colored.z0).vertices:
        if v != v0 and d * dot(v, e) < 1 + d * dot(v0, e):
            return CoherenceViolation(
                "iii",
                f"vertex {v} at z0 = {colored.z0!r} pairs below the chosen"
                " one + 1/d",
            )
    if div.curve == "P1":
        bound = -1 - d * dot(colored.v_deg, e)
        for v in div.coefficient(colored.zinf).vertices:
            if d * dot(v, e) < bound:
                return CoherenceViolation(
                    "iv",
                    f"vertex {v} at zinf = {colored.zinf!r} pairs below"
                    f" {Fraction(bound, d)}",
                )

    e_tilde = e + (s,)
    for ray in rays:
        pairing = dot(ray, e_tilde)
        if ray == rho_tilde:
            assert pairing == -1
        elif pairing < 0:
            return CoherenceViolation(
                "i", f"the lifted degree pairs to {pairing} with ray {ray}"
            )
    return CoherencePair(colored, e, d, s, sigma_tilde, rho_tilde, e_tilde)


def degree_zero_normalize(colored):
    """Rewrite a coloring of degree zero with support in {0, infinity}.

    All coefficients away from the complementary point collapse to lattice
    translates of the tail cone and are moved into the coefficient at
    infinity; the distinguished point is relabeled to 0.  The degree
    polyhedron is unchanged.  Raises NotProper or NoDegreeZeroLND.
    """
    div = colored.divisor
    if not div.is_proper():
        raise NotProper("the divisor is not proper")
    zero = tuple(0 for _ in range(div.rank))
    res = coherent_check(colored, zero)
    if isinstance(res, CoherenceViolation):
        raise NoDegreeZeroLND(
            f"coherence condition ({res.condition}) fails at degree zero:"
            f" {res.message}"
        )
    if div.curve == "A1":
        return PolyhedralDivisor("A1", div.tail, {})
    inf_part = div.coefficient(colored.zinf).translate(colored.v_deg)
    out = PolyhedralDivisor("P1", div.tail, {INF: inf_part})
    assert out.degree().equals(div.degree())
    return out


def toric_realization(div):
    """The affine toric model of a normalized divisor, one rank higher.

    Over A^1 the divisor must be trivial and the result is sigma x Q>=0;
    over P^1 the support must lie in {infinity}.  Returns the lifted cone
    together with the degree of the fiberwise translation symmetry.
    """
    if not div.is_proper():
        raise NotProper("the divisor is not proper")
    n = div.rank
    e_tilde = tuple(0 for _ in range(n)) + (-1,)
    gens = [g + (0,) for g in div.tail.gens]
    gens.append(tuple(0 for _ in range(n)) + (1,))
    if div.curve == "A1":
        if div.parts:
            raise NotNormalized("the divisor still has finite support")
        return Cone(n + 1, gens), e_tilde
    if any(z is not INF for z in div.parts):
        raise NotNormalized("support does not lie in {infinity}")
    for w in div.coefficient(INF).vertices:
        gens.append(w + (Fraction(-1),))
    return Cone(n + 1, gens), e_tilde


def horizontal_lnd(colored, e):
    """The derivation of a coherent coloring on its {0, infinity} model.

    Checks coherence, rewrites the divisor so that the distinguished point
    sits at 0 (moving the collapsed coefficients into infinity over P^1),
    and returns the rewritten divisor together with the derivation acting
    on pairs (m, r) by chi^m t^r -> d (<v0, m> + r) chi^(m+e) t^(r+s).
    """
    res = coherent_check(colored, e)
    if isinstance(res, CoherenceViolation):
        raise NotCoherent(
            f"coherence condition ({res.condition}) fails: {res.message}"
        )
    div = colored.divisor
    for z in colored.c_prime():
        if z == colored.z0:
            continue
        piece = div.coefficient(z)
        if len(piece.vertices) != 1:
            raise NotNormalized(
                f"the coefficient at {z!r} is not a translate of the tail"
            )
    part0 = div.coefficient(colored.z0)
    parts = {Fraction(0): part0}
    if div.curve == "P1":
        shift = vsub(colored.v_deg, colored.v0)
        parts[INF] = div.coefficient(colored.zinf).translate(shift)
    normalized = PolyhedralDivisor(div.curve, div.tail, parts)
    if div.curve == "P1":
        assert normalized.degree().equals(div.degree())
        carrier = CurveCarrier(
            "P1", div.tail, part0.vertices, parts[INF].vertices
        )
    else:
        carrier = CurveCarrier("A1", div.tail, part0.vertices)
    lnd = HomogeneousLND.horizontal(
        carrier, colored.v0, res.d, res.e, res.s
    )
    return normalized, lnd
