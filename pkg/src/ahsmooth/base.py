"""Symbolic base varieties, their prime divisors and strata.

No equations are ever manipulated: a base is a kind tag, its prime
divisors, and the incidence data that the local smoothness test consumes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .convex import SigmaPolyhedron, minkowski_sum, tail_polyhedron
from .errors import DomainError, IncompleteIncidenceError

AFFINE_PLANE = "affine_plane"
BLOWUP = "blowup_affine_plane"
P1XA1 = "p1xa1"
WPS = "weighted_projective_plane"
AFFINE_LINE = "affine_line"
PROJECTIVE_LINE = "projective_line"
USER_SURFACE = "user_surface"

KINDS = (AFFINE_PLANE, BLOWUP, P1XA1, WPS, AFFINE_LINE, PROJECTIVE_LINE, USER_SURFACE)
CURVES = (AFFINE_LINE, PROJECTIVE_LINE)

FLAVORS = ("coordinate", "exceptional", "strict_transform", "user")
CROSSINGS = ("normal", "non_normal", "single", "none")

# divisors every catalog base is equipped with; curves carry user-named points
CATALOG_DIVISORS = {
    AFFINE_PLANE: {"D1": "coordinate", "D2": "coordinate"},
    BLOWUP: {"D1": "strict_transform", "D2": "strict_transform", "E": "exceptional"},
    P1XA1: {"D2": "coordinate", "D3": "coordinate"},
    WPS: {"D1": "coordinate", "D2": "coordinate", "D3": "coordinate"},
}

# pairs of catalog divisors meeting in a point (always transversally)
CATALOG_MEETS = {
    AFFINE_PLANE: [("D1", "D2")],
    BLOWUP: [],
    P1XA1: [],
    WPS: [("D1", "D2"), ("D1", "D3"), ("D2", "D3")],
}


@dataclass(frozen=True)
class PrimeDivisor:
    id: str
    flavor: str = "user"
    notes: str = ""

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise DomainError(f"unknown divisor flavor {self.flavor!r}")

    @property
    def exceptional(self) -> bool:
        return self.flavor == "exceptional"


@dataclass(frozen=True)
class Stratum:
    id: str
    divisors_through: tuple[str, ...]
    crossing: str
    includes_exceptional_image: bool = False

    def __post_init__(self):
        if self.crossing not in CROSSINGS:
            raise DomainError(f"unknown crossing flag {self.crossing!r}")
        n = len(self.divisors_through)
        if (self.crossing == "none") != (n == 0) or (self.crossing == "single") != (n == 1):
            raise DomainError(f"stratum {self.id!r}: crossing {self.crossing!r} inconsistent with {n} divisors")
        if len(set(self.divisors_through)) != n:
            raise DomainError(f"stratum {self.id!r} lists a divisor twice")


def crossing_for(ids) -> str:
    return {0: "none", 1: "single"}.get(len(ids), "normal")


@dataclass(frozen=True)
class BaseVariety:
    kind: str
    parameters: tuple[int, ...] = ()
    divisors: tuple[PrimeDivisor, ...] = ()
    strata: tuple[Stratum, ...] = ()  # declared strata, user surfaces only
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown base kind {self.kind!r}")
        if self.kind == WPS:
            if len(self.parameters) != 3 or min(self.parameters) < 1:
                raise DomainError("a weighted projective plane needs three positive weights")
        ids = [d.id for d in self.divisors]
        if len(set(ids)) != len(ids):
            raise DomainError("prime divisor ids must be unique")
        if self.kind in CATALOG_DIVISORS and not self.divisors:
            object.__setattr__(
                self,
                "divisors",
                tuple(PrimeDivisor(i, f) for i, f in CATALOG_DIVISORS[self.kind].items()),
            )

    @property
    def is_curve(self) -> bool:
        return self.kind in CURVES

    def divisor(self, ident: str) -> PrimeDivisor:
        for d in self.divisors:
            if d.id == ident:
                return d
        raise DomainError(f"{ident!r} is not a prime divisor of {self.kind}")

    def with_divisor(self, d: PrimeDivisor) -> BaseVariety:
        if any(x.id == d.id for x in self.divisors):
            return self
        return BaseVariety(self.kind, self.parameters, self.divisors + (d,), self.strata, self.name)


def affine_plane() -> BaseVariety:
    return BaseVariety(AFFINE_PLANE)


def blowup_affine_plane() -> BaseVariety:
    return BaseVariety(BLOWUP)


def p1xa1() -> BaseVariety:
    return BaseVariety(P1XA1)


def weighted_projective_plane(a: int, b: int, c: int) -> BaseVariety:
    return BaseVariety(WPS, (a, b, c))


def catalog_strata(base: BaseVariety, support: Iterable[str]) -> list[Stratum]:
    """Finite list of combinatorial stratum types covering the base.

    Catalog bases yield the generic stratum, one stratum per support divisor,
    one per meeting pair of support divisors and, on the blow-up, the stratum
    over the blown-up origin. User surfaces return their declared strata.
    """
    support = list(dict.fromkeys(support))
    for s in support:
        base.divisor(s)
    if base.kind == USER_SURFACE:
        declared = {d for st in base.strata for d in st.divisors_through}
        missing = [s for s in support if s not in declared]
        if missing:
            raise IncompleteIncidenceError(f"no declared stratum passes through {missing}")
        undeclared = declared - {d.id for d in base.divisors}
        if undeclared:
            raise IncompleteIncidenceError(f"strata mention undeclared divisors {sorted(undeclared)}")
        return list(base.strata)
    strata = [Stratum("generic", (), "none")]
    strata += [Stratum(f"on-{s}", (s,), "single") for s in support]
    if base.kind in CURVES:
        return strata
    for p, q in CATALOG_MEETS[base.kind]:
        if p in support and q in support:
            strata.append(Stratum(f"{p}*{q}", (p, q), "normal"))
    if base.kind == BLOWUP:
        through = tuple(s for s in ("D1", "D2", "E") if s in support)
        strata.append(Stratum("origin", through, crossing_for(through), includes_exceptional_image=True))
    return strata


def total_transform(
    coefficients: Mapping[str, SigmaPolyhedron],
    blowup: BaseVariety,
    multiplicities: Mapping[str, int] | None = None,
) -> dict[str, SigmaPolyhedron]:
    """Pull a polyhedral divisor on A^2 back to the blow-up at the origin.

    Strict transforms keep their polyhedra; the exceptional divisor receives
    the multiplicity-weighted Minkowski sum of the coefficients of the divisors
    through the origin. Coordinate axes D1, D2 pass with multiplicity one.
    """
    if blowup.kind != BLOWUP:
        raise DomainError("total transforms are taken along the blow-up of the origin")
    mult = {"D1": 1, "D2": 1}
    mult.update(multiplicities or {})
    out: dict[str, SigmaPolyhedron] = {}
    e_coeff = None
    for ident, delta in coefficients.items():
        if ident not in mult:
            raise IncompleteIncidenceError(f"multiplicity of {ident!r} at the origin is not declared")
        out[ident] = delta
        if e_coeff is None:
            e_coeff = tail_polyhedron(delta.tail)
        e_coeff = minkowski_sum(e_coeff, delta.scale(mult[ident]))
    if e_coeff is not None and not e_coeff.is_tail():
        out["E"] = e_coeff
    return out

