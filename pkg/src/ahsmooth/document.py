"""YAML interchange format for p-divisors with their strata.

Example::

    base:
      kind: blowup_affine_plane
    tail: []
    divisors:
      - {id: D1, coefficient: point 1/2}
      - {id: E, coefficient: interval 0 1/6}

Rationals are written ``p/q`` or ``p`` with an optional sign; decimals are rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from .base import (
    CATALOG_DIVISORS,
    CURVES,
    USER_SURFACE,
    WPS,
    BaseVariety,
    PrimeDivisor,
    Stratum,
    catalog_strata,
)
from .convex import RationalCone, canonical_rank1, fmt_q, from_canonical
from .errors import AHError, DocumentError
from .pdivisor import PolyhedralDivisor

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_ARITY = {"point": 1, "interval": 2, "halfline": 1, "neg_halfline": 1}

TOP_KEYS = {"base", "tail", "rank", "divisors", "strata", "origin_multiplicities", "notes"}
BASE_KEYS = {"kind", "weights", "name"}
DIVISOR_KEYS = {"id", "flavor", "coefficient", "notes"}
STRATUM_KEYS = {"id", "divisors", "crossing", "exceptional_image"}


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (int, str)):
        raise DocumentError(f"expected a rational p/q, got {text!r}")
    s = str(text).strip()
    if not _RATIONAL.match(s):
        raise DocumentError(f"malformed rational {s!r} (write p/q; decimals are not accepted)")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise DocumentError(f"zero denominator in {s!r}") from None


def parse_coefficient(text: str) -> tuple:
    parts = str(text).split()
    if not parts or parts[0] not in _ARITY:
        raise DocumentError(f"coefficient {text!r} must start with one of {sorted(_ARITY)}")
    kind, vals = parts[0], parts[1:]
    if len(vals) != _ARITY[kind]:
        raise DocumentError(f"{kind} takes {_ARITY[kind]} value(s), got {len(vals)}")
    return (kind, *(parse_rational(v) for v in vals))


def format_coefficient(form: tuple) -> str:
    return " ".join([form[0]] + [fmt_q(v) for v in form[1:]])


def _reject_unknown(obj: dict, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise DocumentError(f"{where} must be a mapping")
    extra = set(obj) - allowed
    if extra:
        raise DocumentError(f"unknown key(s) {sorted(extra)} in {where}")


@dataclass(frozen=True)
class PDivisorDocument:
    divisor: PolyhedralDivisor
    strata: tuple[Stratum, ...] | None = None  # explicit strata; None means catalog strata
    notes: str = field(default="", compare=False)

    @property
    def base(self) -> BaseVariety:
        return self.divisor.base

    def resolved_strata(self) -> list[Stratum] | None:
        if self.strata is not None:
            return list(self.strata)
        if self.base.is_curve:
            return None
        return list(catalog_strata(self.base, self.divisor.support))


def loads(text: str) -> PDivisorDocument:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentError(f"not valid YAML: {exc}") from None
    try:
        return _from_raw(raw)
    except DocumentError:
        raise
    except AHError as exc:
        raise DocumentError(str(exc)) from None


def load(path: str | Path) -> PDivisorDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def _from_raw(raw) -> PDivisorDocument:
    _reject_unknown(raw, TOP_KEYS, "document")
    if "base" not in raw:
        raise DocumentError("missing 'base' section")
    b = raw["base"]
    _reject_unknown(b, BASE_KEYS, "base")
    kind = b.get("kind")
    weights = tuple(int(w) for w in b.get("weights", ()))
    if weights and kind != WPS:
        raise DocumentError("only weighted_projective_plane takes weights")

    tail_gens = raw.get("tail", [])
    if not isinstance(tail_gens, list):
        raise DocumentError("tail must be a list of generator vectors")
    rank = raw.get("rank")
    if tail_gens:
        rank = len(tail_gens[0]) if rank is None else rank
    rank = 1 if rank is None else int(rank)
    tail = RationalCone(rank, [tuple(parse_rational(x) for x in g) for g in tail_gens])
    if rank != 1:
        raise DocumentError("documents describe rank-one tails only")

    entries = raw.get("divisors") or []
    divisors, coeffs = [], {}
    for d in entries:
        _reject_unknown(d, DIVISOR_KEYS, "divisor entry")
        if "id" not in d:
            raise DocumentError("divisor entry without id")
        ident = str(d["id"])
        catalog = CATALOG_DIVISORS.get(kind, {})
        default_flavor = catalog.get(ident, "user")
        flavor = d.get("flavor", default_flavor)
        if catalog and ident in catalog and flavor != catalog[ident]:
            raise DocumentError(f"{ident} is a {catalog[ident]} divisor of {kind}, not {flavor}")
        if catalog and ident not in catalog:
            raise DocumentError(f"{kind} has no divisor {ident!r}")
        if ident in coeffs or any(p.id == ident for p in divisors):
            raise DocumentError(f"divisor {ident!r} listed twice")
        divisors.append(PrimeDivisor(ident, flavor, str(d.get("notes", ""))))
        if "coefficient" in d:
            form = parse_coefficient(d["coefficient"])
            poly = from_canonical(form)
            if poly.tail != tail:
                raise DocumentError(f"coefficient of {ident} does not have the declared tail")
            coeffs[ident] = poly

    strata = None
    if "strata" in raw:
        strata = []
        for s in raw["strata"] or []:
            _reject_unknown(s, STRATUM_KEYS, "stratum entry")
            ids = tuple(str(x) for x in s.get("divisors", []))
            crossing = s.get("crossing", {0: "none", 1: "single"}.get(len(ids), "normal"))
            strata.append(Stratum(str(s["id"]), ids, crossing, bool(s.get("exceptional_image", False))))
        strata = tuple(strata)

    if kind in CATALOG_DIVISORS:
        base = BaseVariety(kind, weights)
    elif kind == USER_SURFACE:
        if strata is None:
            raise DocumentError("a user_surface must declare its strata")
        base = BaseVariety(kind, (), tuple(divisors), strata, str(b.get("name", "")))
        strata = None
    elif kind in CURVES:
        base = BaseVariety(kind, (), tuple(divisors), (), str(b.get("name", "")))
    else:
        raise DocumentError(f"unknown base kind {kind!r}")

    mults = raw.get("origin_multiplicities")
    if mults is not None:
        _reject_unknown(mults, {p.id for p in base.divisors}, "origin_multiplicities")
        mults = {str(k): int(v) for k, v in mults.items()}
    d = PolyhedralDivisor(base, tail, coeffs, mults)
    return PDivisorDocument(d, strata, str(raw.get("notes", "")))


def to_raw(doc: PDivisorDocument) -> dict:
    d = doc.divisor
    base: dict = {"kind": d.base.kind}
    if d.base.parameters:
        base["weights"] = list(d.base.parameters)
    if d.base.name:
        base["name"] = d.base.name
    out: dict = {"base": base, "tail": [list(g) for g in d.tail.generators]}
    if d.tail.is_zero():
        out["rank"] = d.rank
    divs = []
    for p in d.base.divisors:
        if d.base.kind in CATALOG_DIVISORS and p.id not in d.coefficients:
            continue
        entry: dict = {"id": p.id}
        if d.base.kind not in CATALOG_DIVISORS:
            entry["flavor"] = p.flavor
        if p.id in d.coefficients:
            entry["coefficient"] = format_coefficient(canonical_rank1(d.coefficients[p.id]))
        if p.notes:
            entry["notes"] = p.notes
        divs.append(entry)
    out["divisors"] = divs
    strata = doc.strata if doc.strata is not None else (d.base.strata if d.base.kind == USER_SURFACE else None)
    if strata is not None:
        out["strata"] = [
            {"id": s.id, "divisors": list(s.divisors_through), "crossing": s.crossing, "exceptional_image": s.includes_exceptional_image}
            for s in strata
        ]
    if d.origin_multiplicities is not None:
        out["origin_multiplicities"] = dict(d.origin_multiplicities)
    if doc.notes:
        out["notes"] = doc.notes
    return out


def dumps(doc: PDivisorDocument) -> str:
    return yaml.safe_dump(to_raw(doc), sort_keys=False, default_flow_style=None)
