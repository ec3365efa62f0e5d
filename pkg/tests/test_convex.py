import random
from fractions import Fraction as Q

import pytest

from ahsmooth.convex import (
    UNBOUNDED_BELOW,
    RationalCone,
    SigmaPolyhedron,
    canonical_rank1,
    format_canonical,
    from_canonical,
    halfline,
    in_hull,
    interval,
    is_smooth_cone,
    minkowski_sum,
    point,
    primitive,
    support_min,
    tail_cone,
    tail_polyhedron,
)
from ahsmooth.errors import DimensionError, DomainError

RAY = RationalCone(1, [(1,)])


def test_primitive():
    assert primitive((4, 6)) == (2, 3)
    assert primitive((Q(1, 2), Q(1, 3))) == (3, 2)
    with pytest.raises(DomainError):
        primitive((0, 0))


def test_cone_normalisation():
    c = RationalCone(2, [(2, 0), (1, 0), (1, 1), (0, 3)])
    assert c.generators == ((0, 1), (1, 0))
    assert RationalCone.zero(3).is_zero()
    with pytest.raises(DimensionError):
        RationalCone(2, [(1, 0, 0)])


def test_cone_membership_and_convexity():
    c = RationalCone(2, [(1, 0), (1, 2)])
    assert c.contains((2, 1)) and not c.contains((0, 1))
    assert c.is_strongly_convex()
    assert not RationalCone(1, [(1,), (-1,)]).is_strongly_convex()


def test_dual_generators():
    assert set(RationalCone(2, [(1, 0), (1, 2)]).dual_generators()) == {(0, 1), (2, -1)}
    assert RAY.dual_generators() == ((1,),)
    d = RationalCone(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]).dual_generators()
    assert set(d) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_is_smooth_cone_examples():
    assert is_smooth_cone(RationalCone(2, [(1, 0), (0, 1)]))
    assert not is_smooth_cone(RationalCone(2, [(1, 0), (1, 2)]))
    assert is_smooth_cone(RationalCone(2, [(2, 1)]))
    assert is_smooth_cone(RationalCone.zero(2))
    assert not is_smooth_cone(RationalCone(2, [(1, 0), (0, 1), (1, 1), (-1, 2)]))
    with pytest.raises(DomainError):
        is_smooth_cone(RationalCone(1, [(1,), (-1,)]))


def test_in_hull():
    assert in_hull((Q(1, 2),), [(0,), (1,)], [])
    assert not in_hull((2,), [(0,), (1,)], [])
    assert in_hull((5,), [(0,)], [(1,)])
    assert in_hull((1, 1), [(0, 0), (2, 0), (0, 2)], [])
    assert not in_hull((2, 2), [(0, 0), (2, 0), (0, 2)], [])


def test_polyhedron_vertices_irredundant():
    p = SigmaPolyhedron([(0,), (Q(1, 2),), (1,)])
    assert p.vertices == ((Q(0),), (Q(1),))
    h = SigmaPolyhedron([(3,), (1,)], RAY)
    assert h.vertices == ((Q(1),),)


def test_minkowski_sum_examples():
    assert minkowski_sum(interval(0, 1), interval(0, 1)) == interval(0, 2)
    assert minkowski_sum(point(Q(1, 2)), tail_polyhedron(RAY)) == halfline(Q(1, 2))
    d = interval(-1, Q(1, 3))
    assert d + tail_polyhedron(d.tail) == d
    with pytest.raises(DimensionError):
        minkowski_sum(point(0), SigmaPolyhedron([(0, 0)]))


def test_tail_cone_examples():
    assert tail_cone(interval(-1, 0)).is_zero()
    assert tail_cone(halfline(Q(1, 3))) == RAY
    assert tail_cone(point(5)).is_zero()


def test_support_min_examples():
    assert support_min(interval(-1, 0), (1,)) == -1
    assert support_min(interval(0, Q(1, 6)), (0,)) == 0
    assert support_min(halfline(Q(1, 2)), (-1,)) is UNBOUNDED_BELOW
    assert support_min(halfline(Q(1, 2)), (4,)) == 2


def test_canonical_forms_round_trip():
    forms = [("point", Q(-1, 3)), ("interval", Q(0), Q(1, 6)), ("halfline", Q(2, 7)), ("neg_halfline", Q(1))]
    for f in forms:
        assert canonical_rank1(from_canonical(f)) == f
    assert format_canonical(forms[0]) == "{-1/3}"
    assert format_canonical(forms[1]) == "[0, 1/6]"
    assert format_canonical(forms[2]) == "[2/7, +inf)"
    with pytest.raises(DomainError):
        interval(1, 0)


def test_scale_and_negate():
    assert interval(0, Q(1, 6)).scale(6) == interval(0, 1)
    assert interval(0, 1).scale(0) == point(0)
    assert halfline(1).negate() == from_canonical(("neg_halfline", -1))
    with pytest.raises(DomainError):
        point(1).scale(-1)


def test_minkowski_sum_is_commutative_and_additive_on_support():
    rng = random.Random(3)
    for _ in range(100):
        a = interval(Q(rng.randint(-9, 0), rng.randint(1, 5)), Q(rng.randint(1, 9), rng.randint(1, 5)))
        b = point(Q(rng.randint(-9, 9), rng.randint(1, 7)))
        u = (rng.randint(-5, 5),)
        assert a + b == b + a
        assert support_min(a + b, u) == support_min(a, u) + support_min(b, u)
