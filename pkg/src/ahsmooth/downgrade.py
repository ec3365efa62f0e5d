"""Downgrading a linear Gm-action on A^3 to a p-divisor over a surface."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .base import (
    BaseVariety,
    affine_plane,
    blowup_affine_plane,
    p1xa1,
    weighted_projective_plane,
)
from .convex import RationalCone, from_canonical, primitive
from .errors import DimensionError, DomainError, NoSectionError, SectionMismatchError
from .lattice import (
    IntMatrix,
    WeightData,
    case_parameters,
    cokernel_matrix,
    delta,
    rho,
    section_of,
    smith_normal_form,
)
from .pdivisor import PolyhedralDivisor



@dataclass(frozen=True)
class WeightCase:
    """Which of the five sign patterns a weight vector falls into.

    ``normalized[i] == sign * F[permutation[i]]`` for i = 0, 1, 2.
    """

    case_id: int
    normalized: tuple[int, int, int]
    permutation: tuple[int, int, int]
    sign: int

    @property
    def params(self) -> tuple[int, int, int]:
        return case_parameters(self.normalized, self.case_id)

    def normalize_section(self, s: Sequence[int]) -> tuple[int, int, int]:
        if len(s) != 3:
            raise DimensionError("a section on A^3 has three entries")
        return tuple(self.sign * int(s[p]) for p in self.permutation)

    def original_coordinate(self, role: str) -> int:
        """Input coordinate index carried by divisor D1, D2 or D3."""
        return self.permutation[int(role[1:]) - 1]


def classify(f: Sequence[int]) -> WeightCase:
    if len(f) != 3:
        raise DimensionError("weight vectors on A^3 have three entries")
    f = tuple(int(x) for x in f)
    if gcd(*f) != 1:
        raise NoSectionError(f"{f} has gcd {gcd(*f)}, so no section s with s.F = 1 exists")
    pos = sum(x > 0 for x in f)
    neg = sum(x < 0 for x in f)
    # flip so that positive entries are the majority; with a tie (one zero) keep the input orientation
    sign = -1 if neg > pos or (pos == 0 and neg > 0) else 1
    g = [sign * x for x in f]
    zeros = [i for i in range(3) if g[i] == 0]
    positives = sorted((i for i in range(3) if g[i] > 0), key=lambda i: (g[i], i))
    negatives = [i for i in range(3) if g[i] < 0]
    perm = tuple(zeros + positives + negatives)
    normalized = tuple(g[i] for i in perm)
    n_zero, n_neg = len(zeros), len(negatives)
    if n_zero == 2:
        case_id = 5
    elif n_zero == 1:
        case_id = 4 if n_neg else 3
    else:
        case_id = 1 if n_neg else 2
    return WeightCase(case_id, normalized, perm, sign)


def model_coefficients(case_id: int, params: Sequence[int], section: Sequence[int], chart: bool = False) -> dict:
    """Rank-one canonical coefficient of each divisor in the downgraded presentation.

    ``params`` are the positive (a, b, c); ``section`` satisfies s.F = 1 for the
    normalized F. With ``chart=True`` (case 2 only) the coefficients are those
    on the smooth affine chart {x3 != 0} of P(a, b, c), where the tail is {0}.
    """
    a, b, c = params
    al, be, ga = (Fraction(x) for x in section)
    if case_id == 1:
        d = delta(a, b, c)
        lo = ga / d
        return {
            "D1": ("point", al * rho(a, c) / c),
            "D2": ("point", be * rho(b, c) / c),
            "E": ("interval", lo, lo + Fraction(1, d * c)),
        }
    if case_id == 2:
        h1, h2 = al * rho(a, c) / c, be * rho(b, c) / c
        if chart:
            return {"D1": ("point", h1), "D2": ("point", h2)}
        return {"D1": ("halfline", h1), "D2": ("halfline", h2), "D3": ("halfline", ga / delta(a, b, c))}
    if case_id == 3:
        r = rho(b, c)
        return {"D2": ("halfline", be * r / c), "D3": ("halfline", ga * r / b)}
    if case_id == 4:
        r = rho(b, c)
        return {"D2": ("interval", ga * r / b, be * r / c)}
    if case_id == 5:
        return {}
    raise DomainError(f"unknown case {case_id}")


def model_tail(case_id: int, chart: bool = False) -> RationalCone:
    if case_id in (1, 4) or (case_id == 2 and chart):
        return RationalCone.zero(1)
    return RationalCone(1, [(1,)])


def model_base(case_id: int, params: Sequence[int]) -> BaseVariety:
    if case_id == 1:
        return blowup_affine_plane()
    if case_id == 2:
        return weighted_projective_plane(*params)
    if case_id == 3:
        return p1xa1()
    return affine_plane()


@dataclass(frozen=True)
class Presentation:
    """Downgraded data of a linear Gm-action on A^3.

    When ``cover_order > 1`` the p-divisor describes the cyclic cover of order
    ``cover_order`` branched along the exceptional locus, not A^3 itself
    (see ``describes_cover``).
    """

    case: WeightCase
    weights: WeightData
    base: BaseVariety
    divisor: PolyhedralDivisor

    @property
    def cover_order(self) -> int:
        return self.weights.cover_order

    @property
    def describes_cover(self) -> bool:
        return self.weights.cover_order > 1

    @property
    def section(self) -> tuple[int, int, int]:
        return tuple(self.weights.s.flat())

    @property
    def params(self) -> tuple[int, int, int]:
        return self.case.params


def presentation_for(f: Sequence[int], s: Sequence[int] | None = None) -> Presentation:
    """Base, p-divisor and weight data for the action with weights f.

    A supplied section is read in the input coordinates; it is permuted and
    sign-adjusted along with f. Without one, the canonical section is used.
    """
    wc = classify(f)
    fn = wc.normalized
    if s is None:
        sn = section_of(fn)
    else:
        if sum(int(x) * int(y) for x, y in zip(s, f)) != 1:
            raise SectionMismatchError(f"s = {tuple(s)} does not satisfy s.F = 1 for F = {tuple(f)}")
        sn = wc.normalize_section(s)
    p, cover = cokernel_matrix(fn, wc.case_id)
    wd = WeightData(IntMatrix.column(fn), IntMatrix.row(sn), p, cover)
    base = model_base(wc.case_id, wc.params)
    coeffs = {k: from_canonical(v) for k, v in model_coefficients(wc.case_id, wc.params, sn).items()}
    tail = model_tail(wc.case_id)
    return Presentation(wc, wd, base, PolyhedralDivisor(base, tail, coeffs))


def wps_chart_rays(a: int, b: int, c: int) -> tuple[tuple[int, int], tuple[int, int], tuple[int, int]]:
    """Primitive rays v1, v2, v3 of the fan of P(a, b, c).

    The rays are the primitive images of e1, e2, e3 under a surjection
    Z^3 -> Z^2 with kernel spanned by (a, b, c). For well-formed weights they
    satisfy a v1 + b v2 + c v3 = 0; in general the relation has the reduced
    weights a rho(b,c), b rho(a,c), c rho(a,b) divided by their gcd.
    """
    if min(a, b, c) < 1:
        raise DomainError("weights of P(a, b, c) must be positive")
    if gcd(a, b, c) != 1:
        raise DomainError(f"weights {(a, b, c)} are not coprime")
    u, _, _ = smith_normal_form(IntMatrix.column((a, b, c)))
    rows = u.rows[1:]
    return tuple(primitive((rows[0][i], rows[1][i])) for i in range(3))


def reduced_wps_weights(a: int, b: int, c: int) -> tuple[int, int, int]:
    w = (a * rho(b, c), b * rho(a, c), c * rho(a, b))
    g = gcd(*w)
    return tuple(x // g for x in w)
