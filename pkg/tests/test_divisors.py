"""Tailed polyhedra, polyhedral divisors, colorings and coherence."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from demazure.algebra import derive, monomial, nilpotency_index, toric_lnd
from demazure.divisors import (
    INF,
    ColoredDivisor,
    CoherencePair,
    CoherenceViolation,
    FreeRankOne,
    PolyhedralDivisor,
    TailedPolyhedron,
    coherent_check,
    degree_zero_normalize,
    horizontal_lnd,
    toric_realization,
    trivial_polyhedron,
)
from demazure.errors import (
    InvalidColoring,
    NoDegreeZeroLND,
    NotCoherent,
    NotNormalized,
    NotProper,
    NotStronglyConvex,
    WeightOutsideDual,
)
from demazure.lattice import Cone, lattice_points


def ray1():
    return Cone(1, [(1,)])


def quadrant():
    return Cone(2, [(1, 0), (0, 1)])


# -- tailed polyhedra ---------------------------------------------------------


def test_polyhedron_pruning():
    p = TailedPolyhedron(quadrant(), [(0, 1), (1, 0), (1, 1), (2, 3)])
    assert p.vertices == ((0, 1), (1, 0))
    q = TailedPolyhedron(Cone(1, []), [(0,), (2,), (1,)])
    assert q.vertices == ((0,), (2,))  # midpoint is a convex combination


def test_polyhedron_trivial_and_translate():
    t = trivial_polyhedron(quadrant())
    assert t.is_trivial()
    moved = t.translate((1, 2))
    assert moved.vertices == ((1, 2),)
    assert not moved.is_trivial()


def test_polyhedron_minkowski():
    seg = TailedPolyhedron(Cone(1, []), [(0,), (1,)])
    assert seg.minkowski(seg).vertices == ((0,), (2,))
    half = TailedPolyhedron(ray1(), [(Fraction(1, 2),)])
    assert half.minkowski(half).vertices == ((1,),)


def test_polyhedron_support_min_and_membership():
    p = TailedPolyhedron(quadrant(), [(Fraction(1, 2), 0), (0, 2)])
    assert p.support_min((2, 2)) == 1
    assert p.support_min((1, 0)) == 0
    assert p.contains_point((5, 5))
    assert not p.contains_point((0, 0))
    line = TailedPolyhedron(ray1(), [(1,)])
    assert line.contains_point((3,)) and not line.contains_point((0,))


# -- polyhedral divisors ------------------------------------------------------


def test_divisor_drops_trivial_parts():
    div = PolyhedralDivisor("A1", ray1(), {0: [(0,)], 2: [(1,)]})
    assert div.support() == (Fraction(2),)
    assert div.coefficient(0).is_trivial()


def test_divisor_point_validation():
    with pytest.raises(ValueError):
        PolyhedralDivisor("A1", ray1(), {INF: [(1,)]})
    with pytest.raises(ValueError):
        PolyhedralDivisor("X", ray1(), {})
    with pytest.raises(NotStronglyConvex):
        PolyhedralDivisor("A1", Cone(1, [(1,), (-1,)]), {})


def test_divisor_evaluate():
    div = PolyhedralDivisor(
        "P1", ray1(),
        {0: [(Fraction(1, 2),)], INF: [(1,)]},
    )
    assert div.evaluate((2,)) == {Fraction(0): 1, INF: 2}
    assert div.evaluate((0,)) == {Fraction(0): 0, INF: 0}
    with pytest.raises(WeightOutsideDual):
        div.evaluate((-1,))


def test_weight_dim_p1():
    # trivial coefficient at 0, [1, oo) at infinity: dim = m + 1
    div = PolyhedralDivisor("P1", ray1(), {INF: [(1,)]})
    for m in range(6):
        assert div.weight_dim((m,)) == m + 1
    wide = PolyhedralDivisor("P1", quadrant(), {INF: [(1, 1)]})
    for m1 in range(4):
        for m2 in range(4):
            assert wide.weight_dim((m1, m2)) == m1 + m2 + 1


def test_weight_dim_p1_truncates_at_zero():
    div = PolyhedralDivisor(
        "P1", ray1(),
        {0: [(Fraction(-3, 2),)], INF: [(1,)]},
    )
    # floor(-3m/2) + m + 1 goes negative already at m = 2
    assert div.weight_dim((2,)) == 0
    assert div.weight_dim((0,)) == 1


def test_weight_module_a1():
    div = PolyhedralDivisor("A1", ray1(), {0: [(Fraction(1, 2),)]})
    assert div.weight_dim((1,)) == FreeRankOne([])
    assert div.weight_dim((3,)) == FreeRankOne([(Fraction(0), -1)])
    two = PolyhedralDivisor(
        "A1", ray1(),
        {0: [(Fraction(1, 2),)], 1: [(-2,)]},
    )
    assert two.weight_dim((1,)) == FreeRankOne([(Fraction(1), 2)])


def test_degree_and_properness():
    div = PolyhedralDivisor("P1", ray1(), {INF: [(1,)]})
    assert div.degree().vertices == ((1,),)
    assert div.is_proper()
    # the degree polyhedron leaves the tail cone
    bad = PolyhedralDivisor(
        "P1", quadrant(),
        {0: [(Fraction(1, 2), 0)], INF: [(-1, 1), (-2, 3)]},
    )
    assert bad.degree().vertices == (
        (Fraction(-3, 2), 3), (Fraction(-1, 2), 1)
    )
    assert not bad.is_proper()
    # trivial divisor over P^1: the degree contains the origin
    assert not PolyhedralDivisor("P1", ray1(), {}).is_proper()
    assert PolyhedralDivisor("A1", ray1(), {}).is_proper()


# -- colorings ----------------------------------------------------------------


def test_coloring_validation():
    seg = Cone(1, [])
    div = PolyhedralDivisor("A1", seg, {0: [(0,), (1,)], 1: [(0,), (1,)]})
    ColoredDivisor(div, 0, {0: (0,), 1: (0,)})
    ColoredDivisor(div, 0, {0: (1,), 1: (1,)})
    with pytest.raises(InvalidColoring):
        ColoredDivisor(div, 0, {0: (1,), 1: (0,)})  # sum is interior
    with pytest.raises(InvalidColoring):
        ColoredDivisor(div, 0, {0: (2,), 1: (0,)})  # not a vertex
    with pytest.raises(InvalidColoring):
        ColoredDivisor(div, 0, {0: (0,)})  # missing a support point
    with pytest.raises(InvalidColoring):
        ColoredDivisor(div, 0, {0: (0,), 1: (0,), 2: (0,)})


def test_coloring_integrality_away_from_z0():
    half = PolyhedralDivisor("A1", ray1(), {1: [(Fraction(1, 2),)]})
    with pytest.raises(InvalidColoring):
        ColoredDivisor(half, 0, {0: (0,), 1: (Fraction(1, 2),)})
    # the same vertex is fine at z0
    at0 = PolyhedralDivisor("A1", ray1(), {0: [(Fraction(1, 2),)]})
    c = ColoredDivisor(at0, 0, {0: (Fraction(1, 2),)})
    assert c.v0 == (Fraction(1, 2),)
    assert c.v_deg == (Fraction(1, 2),)


def test_coloring_zinf_rules():
    div = PolyhedralDivisor("P1", ray1(), {INF: [(1,)]})
    c = ColoredDivisor(div, 0, {0: (0,)}, zinf=INF)
    assert c.c_prime() == (Fraction(0),)
    with pytest.raises(ValueError):
        ColoredDivisor(div, 0, {0: (0,)})  # zinf required over P^1
    with pytest.raises(ValueError):
        ColoredDivisor(div, INF, {INF: (1,)}, zinf=INF)
    a1 = PolyhedralDivisor("A1", ray1(), {})
    with pytest.raises(ValueError):
        ColoredDivisor(a1, 0, {0: (0,)}, zinf=2)


# -- coherence ----------------------------------------------------------------


def fixture_violation_i():
    div = PolyhedralDivisor("A1", ray1(), {0: [(Fraction(1, 2),)]})
    return ColoredDivisor(div, 0, {0: (Fraction(1, 2),)}), (0,)


def fixture_violation_ii():
    div = PolyhedralDivisor("A1", Cone(1, []),
                            {0: [(0,)], 1: [(0,), (1,)]})
    return ColoredDivisor(div, 0, {0: (0,), 1: (0,)}), (0,)


def fixture_violation_iii():
    div = PolyhedralDivisor("A1", Cone(1, []), {0: [(0,), (1,)]})
    return ColoredDivisor(div, 0, {0: (0,)}), (0,)


def fixture_violation_iv():
    div = PolyhedralDivisor(
        "P1", quadrant(),
        {0: [(Fraction(1, 2), 0)], INF: [(-1, 1), (-2, 3)]},
    )
    return (ColoredDivisor(div, 0, {0: (Fraction(1, 2), 0)}, zinf=INF),
            (1, 0))


def test_coherence_violations_name_the_condition():
    for fixture, expected in [
        (fixture_violation_i, "i"),
        (fixture_violation_ii, "ii"),
        (fixture_violation_iii, "iii"),
        (fixture_violation_iv, "iv"),
    ]:
        colored, e = fixture()
        res = coherent_check(colored, e)
        assert isinstance(res, CoherenceViolation)
        assert res.condition == expected


def test_coherence_positive_d2():
    div = PolyhedralDivisor("A1", ray1(), {0: [(Fraction(1, 2),)]})
    colored = ColoredDivisor(div, 0, {0: (Fraction(1, 2),)})
    res = coherent_check(colored, (1,))
    assert isinstance(res, CoherencePair)
    assert res.d == 2 and res.s == -1
    assert res.rho_tilde == (1, 2)
    assert res.e_tilde == (1, -1)
    assert sorted(res.sigma_tilde.rays()) == [(1, 0), (1, 2)]


def test_coherence_rejects_degree_outside_weight_cone():
    div = PolyhedralDivisor("A1", ray1(), {0: [(0,)]})
    colored = ColoredDivisor(div, 0, {0: (0,)})
    res = coherent_check(colored, (-1,))
    assert isinstance(res, CoherenceViolation)
    assert res.condition == "i"


# -- normalization and the toric model ----------------------------------------


def test_normalize_a1_lattice_translate():
    div = PolyhedralDivisor("A1", quadrant(), {0: [(1, 2)]})
    colored = ColoredDivisor(div, 0, {0: (1, 2)})
    out = degree_zero_normalize(colored)
    assert out.curve == "A1" and not out.parts


def test_normalize_shift_fixture():
    div = PolyhedralDivisor("P1", ray1(), {0: [(1,)], INF: [(1,)]})
    colored = ColoredDivisor(div, 0, {0: (1,)}, zinf=INF)
    out = degree_zero_normalize(colored)
    assert out.support() == (INF,)
    assert out.coefficient(INF).vertices == ((2,),)
    assert out.degree().equals(div.degree())


def test_normalize_already_normalized():
    div = PolyhedralDivisor("P1", ray1(), {INF: [(1,)]})
    colored = ColoredDivisor(div, 0, {0: (0,)}, zinf=INF)
    out = degree_zero_normalize(colored)
    assert out.equals(div)


def test_normalize_refuses():
    colored, _ = fixture_violation_iii()
    with pytest.raises(NoDegreeZeroLND) as info:
        degree_zero_normalize(colored)
    assert "(iii)" in str(info.value)
    bad, _ = fixture_violation_iv()
    with pytest.raises(NotProper):
        degree_zero_normalize(bad)


def test_toric_realization_fixtures():
    # (a) trivial over A^1, rank 2
    cone, e = toric_realization(PolyhedralDivisor("A1", quadrant(), {}))
    assert sorted(cone.rays()) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert e == (0, 0, -1)
    # (b) [1, oo) at infinity over P^1
    cone, e = toric_realization(PolyhedralDivisor("P1", ray1(), {INF: [(1,)]}))
    assert sorted(cone.rays()) == [(0, 1), (1, -1)]
    assert e == (0, -1)
    # (c) (1,1) + quadrant at infinity
    cone, e = toric_realization(
        PolyhedralDivisor("P1", quadrant(), {INF: [(1, 1)]})
    )
    assert sorted(cone.rays()) == [(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, -1)]
    assert e == (0, 0, -1)
    # the advertised degree really is a root of the lifted cone
    lnd = toric_lnd(cone, e)
    assert lnd.e == e


def test_toric_realization_refuses():
    with pytest.raises(NotNormalized):
        toric_realization(PolyhedralDivisor("A1", ray1(), {0: [(1,)]}))
    with pytest.raises(NotNormalized):
        toric_realization(
            PolyhedralDivisor("P1", ray1(), {0: [(1,)], INF: [(1,)]})
        )
    with pytest.raises(NotProper):
        toric_realization(PolyhedralDivisor("P1", ray1(), {}))


def _lifted_cone(div):
    # Homogenize a divisor supported inside {0, infinity}: tail generators
    # at height zero, vertices of the part at 0 lifted to height +1 and
    # vertices of the part at infinity to height -1, denominators cleared.
    n = div.rank
    gens = [g + (0,) for g in div.tail.gens]

    def lift(poly, sign):
        for v in poly.vertices:
            den = 1
            for c in v:
                den = math.lcm(den, Fraction(c).denominator)
            gens.append(tuple(int(c * den) for c in v) + (sign * den,))

    lift(div.coefficient(0), 1)
    lift(div.coefficient(INF), -1)
    return Cone(n + 1, gens)


def test_slice_identity():
    """weight_dim(m) counts the lattice points of the lifted dual slice."""
    rng = random.Random(2024)
    fixtures = [
        PolyhedralDivisor("P1", ray1(), {INF: [(1,)]}),
        PolyhedralDivisor("P1", quadrant(), {INF: [(1, 1)]}),
        PolyhedralDivisor(
            "P1", ray1(),
            {0: [(Fraction(1, 2),)], INF: [(Fraction(3, 2),)]},
        ),
    ]
    for div in fixtures:
        cone = _lifted_cone(div)
        if not div.coefficient(0).is_trivial():
            with pytest.raises(NotNormalized):
                toric_realization(div)
        else:
            realized, _ = toric_realization(div)
            assert realized.equals(cone)
        n = div.rank
        for _ in range(20):
            m = tuple(rng.randint(0, 5) for _ in range(n))
            ineqs = [(g, 0) for g in cone.gens]
            eqs = [(tuple(1 if j == i else 0 for j in range(n + 1)), m[i])
                   for i in range(n)]
            pts = lattice_points(n + 1, ineqs, eqs)
            assert div.weight_dim(m) == len(pts)


def test_horizontal_lnd_d2():
    div = PolyhedralDivisor("A1", ray1(), {0: [(Fraction(1, 2),)]})
    colored = ColoredDivisor(div, 0, {0: (Fraction(1, 2),)})
    normalized, lnd = horizontal_lnd(colored, (1,))
    assert normalized.equals(div)
    assert lnd.d == 2 and lnd.s == -1 and lnd.e == (1,)
    assert lnd.multiplier(((3,), 1)) == 5
    x = monomial(lnd.carrier, ((1,), 0))
    assert derive(lnd, x) == monomial(lnd.carrier, ((2,), -1))
    assert nilpotency_index(lnd, x) == 2


def test_horizontal_lnd_with_relabeled_point():
    div = PolyhedralDivisor(
        "P1", ray1(),
        {0: [(Fraction(1, 2),)], 3: [(2,)], INF: [(1,)]},
    )
    colored = ColoredDivisor(
        div, 0, {0: (Fraction(1, 2),), 3: (2,)}, zinf=INF
    )
    normalized, lnd = horizontal_lnd(colored, (1,))
    assert normalized.support() == (Fraction(0), INF)
    assert normalized.coefficient(INF).vertices == ((3,),)
    assert normalized.degree().equals(div.degree())
    assert lnd.d == 2 and lnd.s == -1
    # the z0 sharpness: chi^3 flows along r = -floor(m/2) without escaping
    x = monomial(lnd.carrier, ((3,), 0))
    assert nilpotency_index(lnd, x) == 4


def test_horizontal_lnd_refuses():
    colored, e = fixture_violation_ii()
    with pytest.raises(NotCoherent) as info:
        horizontal_lnd(colored, e)
    assert "(ii)" in str(info.value)
    # a support point whose coefficient has two vertices cannot be relabeled
    # (the tail must be the origin: over a ray, a segment is absorbed)
    div = PolyhedralDivisor(
        "P1", Cone(1, []),
        {3: [(0,), (1,)], INF: [(1,)]},
    )
    colored = ColoredDivisor(div, 0, {0: (0,), 3: (0,)}, zinf=INF)
    assert isinstance(coherent_check(colored, (1,)), CoherencePair)
    with pytest.raises(NotNormalized):
        horizontal_lnd(colored, (1,))
