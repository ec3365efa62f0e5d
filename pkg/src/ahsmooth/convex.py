"""Exact rational cones and sigma-polyhedra in V-representation."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .errors import DimensionError, DomainError
from .lattice import IntMatrix, rational_rank, smith_diagonal, solve_exact

Vector = tuple[Fraction, ...]


class Unbounded(enum.Enum):
    BELOW = "unbounded below"

    def __repr__(self) -> str:
        return "UNBOUNDED_BELOW"


UNBOUNDED_BELOW = Unbounded.BELOW
SupportValue = Union[Fraction, Unbounded]


def as_vector(v: Iterable) -> Vector:
    return tuple(Fraction(x) for x in v)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through a nonzero rational vector."""
    v = as_vector(v)
    if all(x == 0 for x in v):
        raise DomainError("the zero vector spans no ray")
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def in_hull(target: Sequence, points: Sequence[Sequence], rays: Sequence[Sequence]) -> bool:
    """Whether target lies in conv(points) + cone(rays), decided exactly.

    With no points this is plain cone membership. Uses Caratheodory: the
    homogenised target lies in the cone over the homogenised generators iff it
    lies in the cone over some linearly independent subset.
    """
    target = as_vector(target)
    if points:
        gens = [as_vector(p) + (Fraction(1),) for p in points] + [as_vector(r) + (Fraction(0),) for r in rays]
        goal = target + (Fraction(1),)
    else:
        gens = [as_vector(r) for r in rays]
        goal = target
        if all(x == 0 for x in goal):
            return True
    dim = len(goal)
    for k in range(1, min(dim, len(gens)) + 1):
        for subset in combinations(gens, k):
            if rational_rank(subset) < k:
                continue
            coeffs = solve_exact(subset, goal)
            if coeffs is not None and all(x >= 0 for x in coeffs):
                return True
    return False


@dataclass(frozen=True)
class RationalCone:
    """Cone generated by primitive integer vectors; redundant generators removed."""

    ambient_rank: int
    generators: tuple[tuple[int, ...], ...]

    def __init__(self, ambient_rank: int, generators: Iterable[Sequence] = ()):
        gens = []
        for g in generators:
            if len(g) != ambient_rank:
                raise DimensionError(f"generator {tuple(g)} is not in rank {ambient_rank}")
            if any(Fraction(x) != 0 for x in g):
                p = primitive(g)
                if p not in gens:
                    gens.append(p)
        # drop generators lying in the cone spanned by the others
        changed = True
        while changed:
            changed = False
            for g in gens:
                rest = [h for h in gens if h != g]
                if rest and in_hull(g, [], rest):
                    gens.remove(g)
                    changed = True
                    break
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "generators", tuple(sorted(gens)))

    @classmethod
    def zero(cls, rank: int) -> RationalCone:
        return cls(rank, ())

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, v: Sequence) -> bool:
        return in_hull(v, [], self.generators)

    def is_strongly_convex(self) -> bool:
        return not any(in_hull(tuple(-x for x in g), [], self.generators) for g in self.generators)

    def __add__(self, other: RationalCone) -> RationalCone:
        if self.ambient_rank != other.ambient_rank:
            raise DimensionError("cones live in different ranks")
        return RationalCone(self.ambient_rank, self.generators + other.generators)

    def dual_generators(self) -> tuple[tuple[int, ...], ...]:
        """Generators of the dual cone (possibly with a lineality space)."""
        n = self.ambient_rank
        gens = self.generators
        if not gens:
            basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
            return tuple(basis + [tuple(-x for x in e) for e in basis])
        if n == 1:
            return gens
        if n == 2:
            if len(gens) == 1:
                g = gens[0]
                perp = (-g[1], g[0])
                return (perp, (-perp[0], -perp[1]), g)
            g1, g2 = gens
            n1, n2 = (-g1[1], g1[0]), (-g2[1], g2[0])
            if dot(n1, g2) < 0:
                n1 = (-n1[0], -n1[1])
            if dot(n2, g1) < 0:
                n2 = (-n2[0], -n2[1])
            return tuple(sorted({primitive(n1), primitive(n2)}))
        if len(gens) == n and rational_rank(gens) == n:
            out = []
            for i in range(n):
                target = [Fraction(int(i == j)) for j in range(n)]
                # row i of the inverse of the generator matrix
                cols = [tuple(Fraction(g[k]) for g in gens) for k in range(n)]
                row = solve_exact(cols, target)
                out.append(primitive(row))
            return tuple(sorted(out))
        raise NotImplementedError("dual cones are computed for rank <= 2 or simplicial full-dimensional cones")

    def dual_contains(self, u: Sequence) -> bool:
        return all(dot(u, g) >= 0 for g in self.generators)


def is_smooth_cone(cone: RationalCone) -> bool:
    """Primitive generators extend to a lattice basis."""
    if not cone.is_strongly_convex():
        raise DomainError("smoothness is defined for strongly convex cones")
    gens = cone.generators
    if not gens:
        return True
    if len(gens) > cone.ambient_rank or rational_rank(gens) < len(gens):
        return False
    return all(d == 1 for d in smith_diagonal(IntMatrix(gens)))


@dataclass(frozen=True)
class SigmaPolyhedron:
    """Delta = conv(vertices) + tail, with an irredundant vertex list."""

    vertices: tuple[Vector, ...]
    tail: RationalCone

    def __init__(self, vertices: Iterable[Sequence], tail: RationalCone | None = None):
        verts = []
        for v in vertices:
            v = as_vector(v)
            if v not in verts:
                verts.append(v)
        if not verts:
            raise DomainError("a sigma-polyhedron needs at least one vertex")
        rank = len(verts[0])
        if any(len(v) != rank for v in verts):
            raise DimensionError("vertices of mixed rank")
        tail = tail if tail is not None else RationalCone.zero(rank)
        if tail.ambient_rank != rank:
            raise DimensionError("tail cone rank differs from the vertex rank")
        changed = True
        while changed and len(verts) > 1:
            changed = False
            for v in verts:
                rest = [w for w in verts if w != v]
                if in_hull(v, rest, tail.generators):
                    verts.remove(v)
                    changed = True
                    break
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        object.__setattr__(self, "tail", tail)

    @property
    def rank(self) -> int:
        return self.tail.ambient_rank

    def is_tail(self) -> bool:
        """Delta equals its own tail cone (the neutral element)."""
        return self.vertices == ((Fraction(0),) * self.rank,)

    def contains(self, v: Sequence) -> bool:
        return in_hull(v, self.vertices, self.tail.generators)

    def __add__(self, other: SigmaPolyhedron) -> SigmaPolyhedron:
        return minkowski_sum(self, other)

    def scale(self, m: int) -> SigmaPolyhedron:
        """m * Delta for a non-negative integer m (m = 0 gives the tail)."""
        if m < 0:
            raise DomainError("only non-negative multiples keep the tail cone")
        if m == 0:
            return tail_polyhedron(self.tail)
        return SigmaPolyhedron([tuple(m * x for x in v) for v in self.vertices], self.tail)

    def negate(self) -> SigmaPolyhedron:
        neg_tail = RationalCone(self.rank, [tuple(-x for x in g) for g in self.tail.generators])
        return SigmaPolyhedron([tuple(-x for x in v) for v in self.vertices], neg_tail)

    def __repr__(self) -> str:
        if self.rank == 1:
            return f"SigmaPolyhedron<{format_canonical(canonical_rank1(self))}>"
        return f"SigmaPolyhedron(vertices={self.vertices}, tail={self.tail.generators})"


def tail_polyhedron(cone: RationalCone) -> SigmaPolyhedron:
    return SigmaPolyhedron([(0,) * cone.ambient_rank], cone)


def minkowski_sum(a: SigmaPolyhedron, b: SigmaPolyhedron) -> SigmaPolyhedron:
    if a.rank != b.rank:
        raise DimensionError("Minkowski sum of polyhedra in different ranks")
    verts = [tuple(x + y for x, y in zip(v, w)) for v in a.vertices for w in b.vertices]
    return SigmaPolyhedron(verts, a.tail + b.tail)


def tail_cone(delta: SigmaPolyhedron) -> RationalCone:
    return delta.tail


def support_min(delta: SigmaPolyhedron, u: Sequence[int]) -> SupportValue:
    """min <u, v> over Delta, or UNBOUNDED_BELOW."""
    if len(u) != delta.rank:
        raise DimensionError("functional and polyhedron ranks differ")
    if any(dot(u, g) < 0 for g in delta.tail.generators):
        return UNBOUNDED_BELOW
    return min(dot(u, v) for v in delta.vertices)


# Rank-one canonical forms: ("point", q), ("interval", l, r),
# ("halfline", l) for [l, +inf) and ("neg_halfline", r) for (-inf, r].

def canonical_rank1(delta: SigmaPolyhedron) -> tuple:
    if delta.rank != 1:
        raise DimensionError("canonical forms exist for rank-one polyhedra only")
    xs = [v[0] for v in delta.vertices]
    gens = delta.tail.generators
    if not gens:
        return ("point", xs[0]) if len(xs) == 1 else ("interval", min(xs), max(xs))
    if len(gens) == 2:
        raise DomainError("the tail cone is a line, not strongly convex")
    return ("halfline", min(xs)) if gens[0] == (1,) else ("neg_halfline", max(xs))


def from_canonical(form: tuple) -> SigmaPolyhedron:
    kind, *vals = form
    vals = [Fraction(x) for x in vals]
    if kind == "point":
        return SigmaPolyhedron([(vals[0],)])
    if kind == "interval":
        if not vals[0] < vals[1]:
            raise DomainError(f"interval endpoints must increase, got {vals}")
        return SigmaPolyhedron([(vals[0],), (vals[1],)])
    if kind == "halfline":
        return SigmaPolyhedron([(vals[0],)], RationalCone(1, [(1,)]))
    if kind == "neg_halfline":
        return SigmaPolyhedron([(vals[0],)], RationalCone(1, [(-1,)]))
    raise DomainError(f"unknown rank-one form {kind!r}")


def point(q) -> SigmaPolyhedron:
    return from_canonical(("point", q))


def interval(l, r) -> SigmaPolyhedron:
    return from_canonical(("interval", l, r))


def halfline(l) -> SigmaPolyhedron:
    return from_canonical(("halfline", l))


def fmt_q(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_canonical(form: tuple) -> str:
    kind, *vals = form
    if kind == "point":
        return "{" + fmt_q(vals[0]) + "}"
    if kind == "interval":
        return f"[{fmt_q(vals[0])}, {fmt_q(vals[1])}]"
    if kind == "halfline":
        return f"[{fmt_q(vals[0])}, +inf)"
    return f"(-inf, {fmt_q(vals[0])}]"
