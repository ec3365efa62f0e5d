"""Polyhedral divisors, evaluation divisors and the two decidable positivity checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .base import AFFINE_LINE, BLOWUP, PROJECTIVE_LINE, BaseVariety
from .convex import (
    UNBOUNDED_BELOW,
    RationalCone,
    SigmaPolyhedron,
    minkowski_sum,
    support_min,
    tail_polyhedron,
)
from .errors import DimensionError, DomainError, EvaluationDomainError, IncompleteIncidenceError


@dataclass(frozen=True)
class WeilQDivisor:
    """Finitely supported map prime divisor -> rational coefficient (zeros dropped)."""

    coefficients: Mapping[str, Fraction]

    def __init__(self, coefficients: Mapping[str, Fraction] = ()):
        items = dict(coefficients)
        object.__setattr__(self, "coefficients", {k: Fraction(v) for k, v in items.items() if v != 0})

    def __getitem__(self, ident: str) -> Fraction:
        return self.coefficients.get(ident, Fraction(0))

    def degree(self) -> Fraction:
        return sum(self.coefficients.values(), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, WeilQDivisor) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(sorted(self.coefficients.items())))


@dataclass(frozen=True)
class PolyhedralDivisor:
    """D = sum Delta_i . D_i on a base; coefficients equal to the tail are dropped.

    ``origin_multiplicities`` records how divisors pass through the blown-up
    origin when the base is a blow-up; it is only used by the minimality test.
    """

    base: BaseVariety
    tail: RationalCone
    coefficients: Mapping[str, SigmaPolyhedron]
    origin_multiplicities: Mapping[str, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        kept = {}
        for ident, delta in self.coefficients.items():
            self.base.divisor(ident)
            if delta.tail != self.tail:
                raise DomainError(f"coefficient of {ident!r} has tail {delta.tail.generators}, expected {self.tail.generators}")
            if not delta.is_tail():
                kept[ident] = delta
        object.__setattr__(self, "coefficients", kept)

    @property
    def rank(self) -> int:
        return self.tail.ambient_rank

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self.coefficients)

    def coefficient(self, ident: str) -> SigmaPolyhedron:
        return self.coefficients.get(ident, tail_polyhedron(self.tail))


def evaluate(d: PolyhedralDivisor, u: Sequence[int]) -> WeilQDivisor:
    """The evaluation divisor D(u) = sum_i min_{v in Delta_i} <u, v> D_i."""
    if len(u) != d.rank:
        raise DimensionError(f"u has rank {len(u)}, the divisor lives in rank {d.rank}")
    if not d.tail.dual_contains(u):
        raise EvaluationDomainError(f"u = {tuple(u)} lies outside the dual of the tail cone")
    out = {}
    for ident, delta in d.coefficients.items():
        value = support_min(delta, u)
        assert value is not UNBOUNDED_BELOW
        out[ident] = value
    return WeilQDivisor(out)


def is_proper_on_curve(d: PolyhedralDivisor) -> bool:
    """Semi-ample and big evaluations on a curve base.

    On an affine curve this always holds. On P^1 the degree u -> deg D(u) is
    concave and positively homogeneous, so it is non-negative on the dual
    cone iff it is on the dual generators, and (given that) it is positive on
    the relative interior iff it is positive on at least one dual generator.
    A dual cone containing a line forces degree zero somewhere on its
    relative interior only when the cone is a linear space.
    """
    if not d.base.is_curve:
        raise DomainError("properness is decided on curve bases only")
    if d.base.kind == AFFINE_LINE:
        return True
    assert d.base.kind == PROJECTIVE_LINE
    gens = d.tail.dual_generators()

    def degree(u):
        return sum((support_min(delta, u) for delta in d.coefficients.values()), Fraction(0))

    degs = [degree(g) for g in gens]
    if any(x < 0 for x in degs):
        return False
    if d.tail.is_zero():
        # the dual cone is all of M_Q, whose relative interior contains 0
        return False
    return any(x > 0 for x in degs)


def is_minimal_on_blowup(d: PolyhedralDivisor) -> bool:
    """False exactly when D is the total transform of a divisor on A^2.

    The test compares the coefficient of the exceptional divisor with the
    multiplicity-weighted Minkowski sum of the coefficients of the divisors
    through the origin (strict transforms of the axes pass with multiplicity one).
    """
    exc = [x.id for x in d.base.divisors if x.exceptional]
    if d.base.kind != BLOWUP and not (exc and d.origin_multiplicities is not None):
        raise DomainError("minimality is decided on the blow-up of the origin only")
    if len(exc) != 1:
        raise IncompleteIncidenceError("expected exactly one exceptional divisor")
    e = exc[0]
    mult = {"D1": 1, "D2": 1} if d.base.kind == BLOWUP else {}
    mult.update(d.origin_multiplicities or {})
    expected = tail_polyhedron(d.tail)
    for ident, delta in d.coefficients.items():
        if ident == e:
            continue
        m = mult.get(ident, 0)
        if m:
            expected = minkowski_sum(expected, delta.scale(m))
    return d.coefficient(e) != expected


def degree_at(d: PolyhedralDivisor, u: Sequence[int]) -> Fraction:
    return evaluate(d, u).degree()

