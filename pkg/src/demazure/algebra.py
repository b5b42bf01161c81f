"""Graded algebra elements and homogeneous locally nilpotent derivations.

A *carrier* records which monomial weights occur in a coordinate ring.  For
an affine toric variety the admissible weights are the lattice points of the
dual cone; for a complexity-one variety over A^1 or P^1 whose coefficient
divisor is supported in {0, infinity} they are pairs (m, r), where m is a
lattice weight and r the exponent of the coordinate t on the base curve.

A homogeneous derivation shifts every weight by a fixed degree and scales the
coefficient by an integer multiplier.  The constructors enforce that the
multiplier drops by exactly one under the shift, which makes repeated
application kill every admissible monomial after finitely many steps and lets
the one-parameter flow exp(s*D) be computed exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import NotARoot, NotNilpotent, RankMismatch, WeightEscape
from .lattice import dot, vadd

# An honest derivation kills a monomial after multiplier+1 steps.  Iteration
# past this ceiling means the input data was not locally nilpotent at all.
HARD_CEILING = 10 ** 4


def _as_int(x):
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError(f"non-integral component {x!r}")
    return int(f)


class ToricCarrier:
    """Monomial weights of the affine toric variety attached to a cone.

    A weight m is admissible exactly when it pairs nonnegatively with every
    generator of the cone, i.e. when m is a lattice point of the dual cone.
    """

    __slots__ = ("cone",)

    def __init__(self, cone):
        self.cone = cone

    @property
    def rank(self):
        return self.cone.rank

    def freeze(self, key):
        m = tuple(_as_int(x) for x in key)
        if len(m) != self.cone.rank:
            raise RankMismatch(
                f"weight of length {len(m)} in ambient rank {self.cone.rank}"
            )
        return m

    def admits(self, key):
        return all(dot(g, key) >= 0 for g in self.cone.gens)

    def add_keys(self, a, b):
        return vadd(a, b)

    def __eq__(self, other):
        return (isinstance(other, ToricCarrier)
                and self.cone.rank == other.cone.rank
                and self.cone.gens == other.cone.gens)

    __hash__ = None

    def __repr__(self):
        return f"ToricCarrier({self.cone!r})"


class CurveCarrier:
    """Monomial weights (m, r) over the base curve A^1 or P^1.

    ``tail`` is the common recession cone of the coefficient polyhedra and
    ``vertices0`` / ``vertices_inf`` are the vertices of the coefficients at
    t = 0 and t = infinity.  Writing h_z(m) for the minimum of <v, m> over
    the vertices at z, the pair (m, r) is admissible when m lies in the dual
    of the tail cone and

        r >= -floor(h_0(m))        and, over P^1,        r <= floor(h_inf(m)),

    i.e. exactly when t^r chi^m is a global section.
    """

    __slots__ = ("curve", "tail", "vertices0", "vertices_inf")

    def __init__(self, curve, tail, vertices0, vertices_inf=None):
        if curve not in ("A1", "P1"):
            raise ValueError("curve must be 'A1' or 'P1'")
        if curve == "P1" and not vertices_inf:
            raise ValueError("a carrier over P^1 needs vertices at infinity")
        if curve == "A1" and vertices_inf:
            raise ValueError("vertices at infinity only occur over P^1")
        self.curve = curve
        self.tail = tail
        self.vertices0 = tuple(
            tuple(Fraction(x) for x in v) for v in vertices0
        )
        if not self.vertices0:
            raise ValueError("need at least one vertex at t = 0")
        self.vertices_inf = (
            tuple(tuple(Fraction(x) for x in v) for v in vertices_inf)
            if vertices_inf is not None
            else None
        )

    @property
    def rank(self):
        return self.tail.rank

    def h0(self, m):
        return min(dot(v, m) for v in self.vertices0)

    def hinf(self, m):
        return min(dot(v, m) for v in self.vertices_inf)

    def freeze(self, key):
        m, r = key
        m = tuple(_as_int(x) for x in m)
        if len(m) != self.tail.rank:
            raise RankMismatch(
                f"weight of length {len(m)} in ambient rank {self.tail.rank}"
            )
        return (m, _as_int(r))

    def admits(self, key):
        m, r = key
        if any(dot(g, m) < 0 for g in self.tail.gens):
            return False
        if r < -math.floor(self.h0(m)):
            return False
        if self.curve == "P1" and r > math.floor(self.hinf(m)):
            return False
        return True

    def add_keys(self, a, b):
        return (vadd(a[0], b[0]), a[1] + b[1])

    def __eq__(self, other):
        return (isinstance(other, CurveCarrier)
                and self.curve == other.curve
                and self.tail.rank == other.tail.rank
                and self.tail.gens == other.tail.gens
                and sorted(self.vertices0) == sorted(other.vertices0)
                and ((self.vertices_inf is None) ==
                     (other.vertices_inf is None))
                and (self.vertices_inf is None
                     or sorted(self.vertices_inf) == sorted(other.vertices_inf)))

    __hash__ = None

    def __repr__(self):
        return (f"CurveCarrier({self.curve!r}, tail={self.tail!r}, "
                f"vertices0={list(self.vertices0)}, "
                f"vertices_inf={self.vertices_inf and list(self.vertices_inf)})")


class SemigroupElement:
    """A finite linear combination of admissible monomials.

    ``terms`` maps frozen weight keys to nonzero Fraction coefficients.
    Addition of weights keeps the combination inside the carrier (the
    admissible weights form a semigroup), so products never escape.
    """

    __slots__ = ("carrier", "terms")

    def __init__(self, carrier, terms=()):
        items = terms.items() if hasattr(terms, "items") else terms
        data = {}
        for key, coeff in items:
            key = carrier.freeze(key)
            coeff = Fraction(coeff)
            if not coeff:
                continue
            if not carrier.admits(key):
                raise WeightEscape(f"weight {key!r} is not admissible")
            data[key] = data.get(key, Fraction(0)) + coeff
        self.carrier = carrier
        self.terms = {k: c for k, c in data.items() if c}

    def is_zero(self):
        return not self.terms

    def _combine(self, other, sign):
        if not isinstance(other, SemigroupElement):
            return NotImplemented
        data = dict(self.terms)
        for k, c in other.terms.items():
            data[k] = data.get(k, Fraction(0)) + sign * c
        return SemigroupElement(self.carrier, data)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return SemigroupElement(
            self.carrier, {k: -c for k, c in self.terms.items()}
        )

    def __rmul__(self, scalar):
        scalar = Fraction(scalar)
        return SemigroupElement(
            self.carrier, {k: scalar * c for k, c in self.terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, SemigroupElement):
            return self.__rmul__(other)
        data = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = self.carrier.add_keys(k1, k2)
                data[k] = data.get(k, Fraction(0)) + c1 * c2
        return SemigroupElement(self.carrier, data)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not monomials")
        out = None
        for _ in range(n):
            out = self if out is None else out * self
        if out is None:
            raise ValueError("the empty product has no canonical weight here")
        return out

    def __eq__(self, other):
        return (isinstance(other, SemigroupElement)
                and self.carrier == other.carrier
                and self.terms == other.terms)

    __hash__ = None

    def __repr__(self):
        return f"SemigroupElement({dict(sorted(self.terms.items()))!r})"


def monomial(carrier, key, coeff=1):
    return SemigroupElement(carrier, [(key, coeff)])


class HomogeneousLND:
    """A homogeneous derivation acting monomially on a carrier.

    kind "toric":       chi^m        ->  <n, m> chi^(m+e)
    kind "horizontal":  chi^m t^r    ->  d (<v0, m> + r) chi^(m+e) t^(r+s)

    where n is the primitive normal of the distinguished ray, respectively
    (d*v0, d) is the primitive distinguished ray over the base curve.  The
    constructors check that the multiplier drops by exactly one under the
    weight shift (this is the defining property of a root), so the
    derivation is locally nilpotent wherever the weights stay admissible.
    """

    __slots__ = ("carrier", "kind", "ray_normal", "e", "v0", "d", "s")

    def __init__(self, carrier, kind, ray_normal=None, e=None,
                 v0=None, d=None, s=None):
        self.carrier = carrier
        self.kind = kind
        self.ray_normal = ray_normal
        self.e = e
        self.v0 = v0
        self.d = d
        self.s = s

    @classmethod
    def toric(cls, carrier, ray_normal, e):
        n = tuple(_as_int(x) for x in ray_normal)
        ee = tuple(_as_int(x) for x in e)
        if len(n) != carrier.rank or len(ee) != carrier.rank:
            raise RankMismatch("ray normal and degree must match the carrier")
        if dot(n, ee) != -1:
            raise NotARoot("the degree must pair to -1 with the ray normal")
        return cls(carrier, "toric", ray_normal=n, e=ee)

    @classmethod
    def horizontal(cls, carrier, v0, d, e, s):
        v = tuple(Fraction(x) for x in v0)
        d = _as_int(d)
        ee = tuple(_as_int(x) for x in e)
        s = _as_int(s)
        if len(v) != carrier.rank or len(ee) != carrier.rank:
            raise RankMismatch("vertex and degree must match the carrier")
        if d < 1:
            raise ValueError("d must be a positive integer")
        if any((d * x).denominator != 1 for x in v):
            raise ValueError("d must clear the denominators of v0")
        if d * (dot(v, ee) + s) != -1:
            raise NotARoot("need d * (<v0, e> + s) == -1")
        return cls(carrier, "horizontal", v0=v, d=d, e=ee, s=s)

    def multiplier(self, key):
        if self.kind == "toric":
            return dot(self.ray_normal, key)
        m, r = key
        return _as_int(self.d * (dot(self.v0, m) + r))

    def shift(self, key):
        if self.kind == "toric":
            return vadd(key, self.e)
        m, r = key
        return (vadd(m, self.e), r + self.s)

    def degree(self):
        if self.kind == "toric":
            return self.e
        return (self.e, self.s)

    def __repr__(self):
        if self.kind == "toric":
            return f"HomogeneousLND(toric, n={self.ray_normal}, e={self.e})"
        return (f"HomogeneousLND(horizontal, v0={self.v0}, d={self.d}, "
                f"e={self.e}, s={self.s})")


def toric_lnd(cone, e):
    """The homogeneous derivation attached to a root of a pointed cone."""
    ee = tuple(_as_int(x) for x in e)
    distinguished = None
    for r in cone.rays():
        p = dot(r, ee)
        if p == -1 and distinguished is None:
            distinguished = r
        elif p < 0:
            raise NotARoot(f"ray {r} pairs to {p}")
    if distinguished is None:
        raise NotARoot("no ray pairs to -1")
    return HomogeneousLND.toric(ToricCarrier(cone), distinguished, ee)


def derive(lnd, element):
    """Apply the derivation once.

    Raises WeightEscape if a surviving term is carried outside the set of
    admissible weights, which is how unsound input data surfaces.
    """
    out = {}
    for key, c in element.terms.items():
        mult = lnd.multiplier(key)
        if not mult:
            continue
        new = lnd.shift(key)
        if not lnd.carrier.admits(new):
            raise WeightEscape(
                f"derivative of weight {key!r} leaves the carrier at {new!r}"
            )
        out[new] = out.get(new, Fraction(0)) + mult * c
    return SemigroupElement(lnd.carrier, out)


def _iteration_cap(lnd, element):
    cap = 0
    for key in element.terms:
        q = lnd.multiplier(key)
        if q < 0:
            return HARD_CEILING
        cap = max(cap, int(q))
    return min(cap + 3, HARD_CEILING)


def nilpotency_index(lnd, element):
    """Smallest k with the k-th derivative of ``element`` equal to zero."""
    cap = _iteration_cap(lnd, element)
    cur = element
    k = 0
    while not cur.is_zero():
        if k >= cap:
            raise NotNilpotent(f"derivation still alive after {k} steps")
        cur = derive(lnd, cur)
        k += 1
    return k


def exp_action(lnd, element, s):
    """Image of ``element`` under the flow exp(s * lnd) at time s."""
    s = Fraction(s)
    acc = dict(element.terms)
    term = element
    cap = _iteration_cap(lnd, element)
    factor = Fraction(1)
    k = 0
    while not term.is_zero():
        k += 1
        if k > cap:
            raise NotNilpotent(f"flow did not terminate after {k - 1} steps")
        term = derive(lnd, term)
        factor = factor * s / k
        for key, c in term.terms.items():
            acc[key] = acc.get(key, Fraction(0)) + factor * c
    return SemigroupElement(lnd.carrier, acc)


class SymbolicElement:
    """A combination of monomials whose coefficients are polynomials in s.

    ``terms`` maps weight keys to {power: coefficient} dictionaries; the
    flow parameter s is kept symbolic.
    """

    __slots__ = ("carrier", "terms")

    def __init__(self, carrier, terms):
        clean = {}
        for key, poly in terms.items():
            p = {}
            for deg, c in poly.items():
                c = Fraction(c)
                if c:
                    p[int(deg)] = c
            if p:
                clean[key] = p
        self.carrier = carrier
        self.terms = clean

    def evaluate(self, s):
        s = Fraction(s)
        data = {}
        for key, poly in self.terms.items():
            data[key] = sum((c * s ** deg for deg, c in poly.items()),
                            Fraction(0))
        return SemigroupElement(self.carrier, data)

    def __eq__(self, other):
        return (isinstance(other, SymbolicElement)
                and self.carrier == other.carrier
                and self.terms == other.terms)

    __hash__ = None

    def __repr__(self):
        return f"SymbolicElement({dict(sorted(self.terms.items()))!r})"


def exp_symbolic(lnd, element):
    """The flow exp(s * lnd) applied to ``element`` with s left symbolic."""
    terms = {k: {0: c} for k, c in element.terms.items()}
    term = element
    cap = _iteration_cap(lnd, element)
    fact = 1
    k = 0
    while not term.is_zero():
        k += 1
        if k > cap:
            raise NotNilpotent(f"flow did not terminate after {k - 1} steps")
        term = derive(lnd, term)
        fact *= k
        for key, c in term.terms.items():
            poly = terms.setdefault(key, {})
            poly[k] = poly.get(k, Fraction(0)) + c / fact
    return SymbolicElement(lnd.carrier, terms)
