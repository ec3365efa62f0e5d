"""Smoothness tests: toric, complexity one over a curve, and the Gm-threefold matcher."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import gcd
from typing import Iterable, Sequence

from .base import AFFINE_LINE, BLOWUP, PROJECTIVE_LINE, BaseVariety, Stratum, catalog_strata
from .convex import RationalCone, canonical_rank1, is_smooth_cone
from .downgrade import model_coefficients, wps_chart_rays
from .errors import DomainError, MinimalityError, NotPDivisorError
from .lattice import cokernel_matrix, rho
from .pdivisor import PolyhedralDivisor, is_minimal_on_blowup, is_proper_on_curve


class Verdict(str, enum.Enum):
    SMOOTH = "Smooth"
    SINGULAR = "Singular"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


NON_NORMAL = "NonNormalCrossing"
WIDTH = "WidthExceedsBound"
NO_SOLUTION = "NoDiophantineSolution"
UNSUPPORTED = "Unsupported"


def check_toric(cone: RationalCone) -> bool:
    return is_smooth_cone(cone)


def chart_smooth_wps(a: int, b: int, c: int) -> bool:
    """Whether the chart {x3 != 0} of P(a, b, c) is smooth."""
    v1, v2, _ = wps_chart_rays(a, b, c)
    return abs(v1[0] * v2[1] - v1[1] * v2[0]) == 1


# ---------------------------------------------------------------- complexity one


def _cone_over(delta) -> RationalCone:
    n = delta.rank
    gens = [(1,) + tuple(v) for v in delta.vertices]
    gens += [(0,) + tuple(t) for t in delta.tail.generators]
    return RationalCone(n + 1, gens)


def _p1_linear_match(d: PolyhedralDivisor) -> bool:
    # Elliptic actions on A^2 with coprime weights (b, c): over P^1 the
    # coefficients are [beta/c, inf) and [gamma/b, inf) with b beta + c gamma = 1,
    # i.e. h0 + h1 = 1/(den h0 * den h1). Integral coefficients elsewhere are
    # moved onto one of the two points by a principal divisor.
    forms = [canonical_rank1(x) for x in d.coefficients.values()]
    if d.tail.generators == ((-1,),):
        forms = [_negate(f) for f in forms]
    hs = [f[1] for f in forms]
    frac = [h for h in hs if h.denominator != 1]
    if len(frac) > 2:
        return False
    shift = sum((h for h in hs if h.denominator == 1), Fraction(0))
    h0, h1 = (frac + [Fraction(0), Fraction(0)])[:2]
    h0 += shift
    return h0 + h1 == Fraction(1, h0.denominator * h1.denominator)


def check_complexity1(base: BaseVariety, d: PolyhedralDivisor) -> Verdict:
    if not base.is_curve:
        raise DomainError("complexity-one test needs a curve base")
    if d.base != base:
        raise DomainError("the divisor lives on a different base")
    if not is_proper_on_curve(d):
        raise NotPDivisorError("D is not semi-ample and big on the curve")
    if base.kind == AFFINE_LINE:
        cones = [_cone_over(x) for x in d.coefficients.values()]
        # a general point carries the tail itself
        cones.append(RationalCone(d.rank + 1, [(1,) + (0,) * d.rank] + [(0,) + g for g in d.tail.generators]))
        return Verdict.SMOOTH if all(is_smooth_cone(c) for c in cones) else Verdict.SINGULAR
    assert base.kind == PROJECTIVE_LINE
    if d.rank != 1:
        return Verdict.INCONCLUSIVE
    return Verdict.SMOOTH if _p1_linear_match(d) else Verdict.SINGULAR


# ---------------------------------------------------------------- local data


@dataclass(frozen=True)
class GermEntry:
    divisor: str
    flavor: str  # "ordinary" or "exceptional"
    form: tuple  # rank-one canonical form

    def __str__(self) -> str:
        from .convex import format_canonical

        return f"{self.flavor} {format_canonical(self.form)}@{self.divisor}"


@dataclass(frozen=True)
class LocalModelData:
    stratum: Stratum
    tail: str  # "zero", "ray" or "neg_ray"
    entries: tuple[GermEntry, ...]

    @property
    def crossing(self) -> str:
        return self.stratum.crossing


def _tail_kind(cone: RationalCone) -> str:
    if cone.ambient_rank != 1:
        raise DomainError("local germs are built for rank-one tails")
    if cone.is_zero():
        return "zero"
    if len(cone.generators) != 1:
        raise DomainError("the tail cone is not strongly convex")
    return "ray" if cone.generators[0] == (1,) else "neg_ray"


def extract_local_data(d: PolyhedralDivisor, strata: Sequence[Stratum] | None = None) -> list[LocalModelData]:
    if strata is None:
        strata = catalog_strata(d.base, d.support)
    tail = _tail_kind(d.tail)
    out = []
    for st in strata:
        ords, excs = [], []
        for ident in st.divisors_through:
            prime = d.base.divisor(ident)
            if ident not in d.coefficients:
                continue
            entry = GermEntry(ident, "exceptional" if prime.exceptional else "ordinary", canonical_rank1(d.coefficients[ident]))
            (excs if prime.exceptional else ords).append(entry)
        out.append(LocalModelData(st, tail, tuple(ords + excs)))
    return out


# ---------------------------------------------------------------- matcher


@dataclass(frozen=True)
class MatchResult:
    stratum: str
    matched: bool
    case_id: int | None = None
    params: tuple[int, int, int] | None = None
    section: tuple[int, int, int] | None = None
    roles: tuple[tuple[str, str], ...] = ()  # (divisor id, model divisor)
    reason: str | None = None
    definitive: bool = False
    cases: tuple[int, ...] = ()
    note: str = ""

    @property
    def weights(self) -> tuple[int, int, int] | None:
        if not self.matched:
            return None
        a, b, c = self.params
        return {1: (a, b, -c), 2: (a, b, c), 3: (0, b, c), 4: (0, b, -c), 5: (0, 0, 1)}[self.case_id]

    def summary(self) -> str:
        if self.matched:
            roles = ", ".join(f"{d}->{r}" for d, r in self.roles) or "-"
            also = f" (also cases {list(self.cases)})" if len(self.cases) > 1 else ""
            return (
                f"{self.stratum}: matched case {self.case_id} (a,b,c)={self.params} "
                f"s={self.section} roles[{roles}]{also}"
            )
        kind = "definitive" if self.definitive else "not definitive"
        return f"{self.stratum}: {self.reason} ({kind}) {self.note}".rstrip()


class _Refuted(Exception):
    def __init__(self, reason: str, note: str = ""):
        super().__init__(note)
        self.reason, self.note = reason, note


def _negate(form: tuple) -> tuple:
    kind, *v = form
    if kind == "point":
        return ("point", -v[0])
    if kind == "interval":
        return ("interval", -v[1], -v[0])
    if kind == "halfline":
        return ("neg_halfline", -v[0])
    return ("halfline", -v[0])


def _free_solve(coeffs: Sequence[int], fixed: Sequence[int | None], rhs: int = 1):
    """Solve sum k_i x_i = rhs for the unfixed x_i, or None.

    Free variables with coefficient 0 are set to 0; the others are chosen in
    order, each as the least non-negative value leaving a solvable remainder.
    """
    vals = list(fixed)
    r = rhs - sum(k * v for k, v in zip(coeffs, vals) if v is not None)
    free = [i for i, v in enumerate(vals) if v is None and coeffs[i] != 0]
    for i, v in enumerate(vals):
        if v is None and coeffs[i] == 0:
            vals[i] = 0
    if not free:
        return tuple(vals) if r == 0 else None
    if r % gcd(*(coeffs[i] for i in free)):
        return None
    for pos, i in enumerate(free):
        k = coeffs[i]
        rest = free[pos + 1:]
        if not rest:
            vals[i] = r // k
            break
        g_rest = gcd(*(coeffs[j] for j in rest))
        g = gcd(k, g_rest)
        m = g_rest // g
        t = 0 if m == 1 else (r // g) * pow(k // g, -1, m) % m
        vals[i] = t
        r -= k * t
    return tuple(vals)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _rho_pairs(r1_fixed, r2_fixed, n_req, bound):
    """Coprime (rho1, rho2) in increasing c = rho1 * rho2, honoring pins."""
    if r1_fixed is not None and r2_fixed is not None:
        yield r1_fixed, r2_fixed
        return
    cs = _divisors(n_req) if n_req is not None else range(1, bound + 1)
    for c in cs:
        for r1 in _divisors(c):
            r2 = c // r1
            if gcd(r1, r2) != 1:
                continue
            if r1_fixed is not None and r1 != r1_fixed:
                continue
            if r2_fixed is not None and r2 != r2_fixed:
                continue
            yield r1, r2


def _solve_pair(case_id, r1, r2, h1, h2, third, d_req, bound):
    # a = r1 a', b = r2 b', c = r1 r2 with gcd(a', r2) = gcd(b', r1) = 1 is
    # exactly the family with cover order one (and smooth chart for case 2).
    c = r1 * r2
    sgn = -1 if case_id == 1 else 1
    al = int(h1 * r2) if h1 is not None else None
    be = int(h2 * r1) if h2 is not None else None
    lo = third
    ga_pinned = None
    if d_req is not None and lo is not None:
        ga = lo * d_req
        # a and b are multiples of delta, so delta must divide 1 - sgn c gamma
        if ga.denominator != 1 or (1 - sgn * c * int(ga)) % d_req:
            return None
        ga_pinned = int(ga)
    step = d_req or 1
    for a1 in range(step, bound // r1 + 1, step):
        if gcd(a1, r2) != 1:
            continue
        a = r1 * a1
        if ga_pinned is not None and al is not None and be:
            # everything but b' is known: solve for it directly
            num = 1 - a * al - sgn * c * ga_pinned
            if num % (r2 * be) == 0:
                b1 = num // (r2 * be)
                if 1 <= b1 <= bound // r2 and b1 % step == 0 and gcd(b1, r1) == 1 and gcd(a1, b1) == d_req:
                    return (c, a, r2 * b1, al, be, ga_pinned)
            continue
        for b1 in range(step, bound // r2 + 1, step):
            if gcd(b1, r1) != 1:
                continue
            d = gcd(a1, b1)
            if d_req is not None and d != d_req:
                continue
            ga = None
            if lo is not None:
                t = lo * d
                if t.denominator != 1:
                    continue
                ga = int(t)
            sol = _free_solve((a, r2 * b1, sgn * c), (al, be, ga))
            if sol is not None:
                return (c, a, r2 * b1) + sol
    return None


def _solve_family(case_id, h1, h2, third, width, bound):
    """Smallest (c, a, b, alpha, beta, gamma) in the case-1/2 family, or None.

    Raises _Refuted for failures that no search bound can repair.
    """
    n_req = None
    if width is not None:
        if width.numerator != 1:
            raise _Refuted(NO_SOLUTION, f"exceptional width {width} is not of the form 1/N")
        n_req = width.denominator
    r2 = h1.denominator if h1 is not None else None
    r1 = h2.denominator if h2 is not None else None
    if r1 is not None and r2 is not None:
        if gcd(r1, r2) != 1:
            raise _Refuted(NO_SOLUTION, f"coefficient denominators {r2} and {r1} are not coprime")
    if n_req is not None and n_req % ((r1 or 1) * (r2 or 1)):
        raise _Refuted(NO_SOLUTION, f"1/width = {n_req} is not a multiple of the coefficient denominators")
    best = None
    for p1, p2 in _rho_pairs(r1, r2, n_req, bound):
        if best is not None and p1 * p2 > best[0]:
            break
        if n_req is not None:
            d_req = n_req // (p1 * p2)
        elif case_id == 2 and third is not None:
            # gamma = h3 delta is integral and delta | 1 - c gamma force delta = den(h3)
            d_req = third.denominator
        else:
            d_req = None
        sol = _solve_pair(case_id, p1, p2, h1, h2, third, d_req, bound)
        if sol is not None and (best is None or sol < best):
            best = sol
    return best


def _solve_case3(hd2, hd3, bound):
    # F = (0, b, c) with b beta + c gamma = 1; coefficients beta/c on D2, gamma/b on D3
    if hd2 is not None and hd3 is not None:
        c, be, b, ga = hd2.denominator, hd2.numerator, hd3.denominator, hd3.numerator
        return (b, c, be, ga) if b * be + c * ga == 1 else None
    if hd2 is not None:
        c, be = hd2.denominator, hd2.numerator
        b = 1 if c == 1 else pow(be, -1, c)
        return (b, c, be, (1 - b * be) // c)
    if hd3 is not None:
        b, ga = hd3.denominator, hd3.numerator
        c = 1 if b == 1 else pow(ga, -1, b)
        return (b, c, (1 - c * ga) // b, ga)
    return (1, 1, 0, 1)


def _candidates(tail: str, ords: list, exc, padded: bool):
    """(case, chart, role assignment) triples for a normalized germ."""
    out = []
    n = len(ords)
    kinds = {f[0] for f in ords}
    if exc is not None:
        if kinds - {"point"}:
            return out
        if padded:
            full = ords + [("point", Fraction(0))] * (2 - n)
            for perm in set(permutations(range(2))):
                order = tuple("D1" if perm[0] == i else "D2" for i in range(n))
                out.append((1, False, {"D1": full[perm[0]], "D2": full[perm[1]], "E": exc}, order))
        else:
            for roles in permutations(("D1", "D2"), n):
                m = dict(zip(roles, ords))
                m["E"] = exc
                out.append((1, False, m, roles))
        return out
    if tail == "zero":
        if n == 0:
            out += [(4, False, {}, ()), (1, False, {}, ()), (2, True, {}, ())]
        elif n == 1 and kinds == {"point"}:
            for r in ("D1", "D2"):
                out.append((1, False, {r: ords[0]}, (r,)))
            for r in ("D1", "D2"):
                out.append((2, True, {r: ords[0]}, (r,)))
        elif n == 1 and kinds == {"interval"}:
            out.append((4, False, {"D2": ords[0]}, ("D2",)))
        elif n == 2 and kinds == {"point"}:
            for roles in permutations(("D1", "D2")):
                out.append((2, True, dict(zip(roles, ords)), roles))
        return out
    if kinds - {"halfline"}:
        return out
    if n == 0:
        out += [(5, False, {}, ()), (3, False, {}, ()), (2, False, {}, ())]
    elif n == 1:
        out += [(3, False, {r: ords[0]}, (r,)) for r in ("D2", "D3")]
        out += [(2, False, {r: ords[0]}, (r,)) for r in ("D1", "D2", "D3")]
    elif n == 2:
        for roles in permutations(("D1", "D2", "D3"), 2):
            out.append((2, False, dict(zip(roles, ords)), roles))
    return out


def _solve_candidate(case_id, chart, roles, bound):
    """(params, section) with the model reproducing ``roles``, or None."""
    if case_id == 5:
        return (0, 0, 1), (0, 0, 1)
    if case_id == 4:
        if "D2" not in roles:
            return (0, 1, 1), (0, 0, -1)
        _, l, r = roles["D2"]
        b, ga, c, be = l.denominator, l.numerator, r.denominator, r.numerator
        if b * be - c * ga != 1:
            raise _Refuted(NO_SOLUTION, f"interval [{l}, {r}] is not of the form [gamma/b, beta/c] with b beta - c gamma = 1")
        return (0, b, c), (0, be, ga)
    if case_id == 3:
        h2 = roles["D2"][1] if "D2" in roles else None
        h3 = roles["D3"][1] if "D3" in roles else None
        sol = _solve_case3(h2, h3, bound)
        if sol is None:
            raise _Refuted(NO_SOLUTION, "half-line coefficients violate b beta + c gamma = 1")
        b, c, be, ga = sol
        return (0, b, c), (0, be, ga)
    h1 = roles["D1"][1] if "D1" in roles else None
    h2 = roles["D2"][1] if "D2" in roles else None
    third = width = None
    if case_id == 1 and "E" in roles:
        _, l, r = roles["E"]
        third, width = l, r - l
    elif case_id == 2 and not chart and "D3" in roles:
        third = roles["D3"][1]
    sol = _solve_family(case_id, h1, h2, third, width, bound)
    if sol is None:
        return None
    c, a, b, al, be, ga = sol
    return (a, b, c), (al, be, ga)


def _verify(case_id, chart, params, section, roles) -> bool:
    a, b, c = params
    f = {1: (a, b, -c), 2: (a, b, c), 3: (0, b, c), 4: (0, b, -c), 5: (0, 0, 1)}[case_id]
    if sum(x * y for x, y in zip(f, section)) != 1:
        return False
    if cokernel_matrix(f, case_id)[1] != 1:
        return False
    model = model_coefficients(case_id, params, section, chart=chart)
    return all(model[r] == form for r, form in roles.items())


def match_local(data: LocalModelData, search_bound: int = 1000) -> MatchResult:
    sid = data.stratum.id
    if search_bound < 1:
        raise DomainError("search_bound must be positive")

    def fail(reason, definitive, note=""):
        return MatchResult(sid, False, reason=reason, definitive=definitive, note=note)

    if data.crossing == "non_normal":
        return fail(NON_NORMAL, True, "divisors through the stratum do not cross normally")
    tail = data.tail
    entries = list(data.entries)
    note = ""
    if tail == "neg_ray":
        entries = [GermEntry(e.divisor, e.flavor, _negate(e.form)) for e in entries]
        tail = "ray"
        note = "matched for the inverse action"
    ords = [e for e in entries if e.flavor == "ordinary"]
    excs = [e for e in entries if e.flavor == "exceptional"]
    if len(excs) > 1 or len(ords) > 2:
        return fail(UNSUPPORTED, False, f"{len(ords)} ordinary and {len(excs)} exceptional divisors")
    exc = None
    if excs:
        form = excs[0].form
        if tail != "zero" or form[0] != "interval":
            return fail(UNSUPPORTED, False, "exceptional coefficient is not a segment over a zero tail")
        if form[2] - form[1] > 1:
            return fail(WIDTH, True, f"exceptional width {form[2] - form[1]} exceeds 1")
        exc = form
    padded = data.stratum.includes_exceptional_image and exc is not None
    cands = _candidates(tail, [e.form for e in ords], exc, padded)
    if not cands:
        return fail(UNSUPPORTED, False, "germ shape matches no linear model")

    found = {}  # case id -> (key, params, section, roles)
    refutations, exhausted = [], False
    for case_id, chart, roles, order in cands:
        try:
            sol = _solve_candidate(case_id, chart, roles, search_bound)
        except _Refuted as r:
            refutations.append(r)
            continue
        if sol is None:
            exhausted = True
            continue
        params, section = sol
        assert _verify(case_id, chart, params, section, roles), (case_id, params, section, roles)
        key = (params[2], params[0], params[1]) + tuple(section)
        role_map = tuple((e.divisor, r) for e, r in zip(ords, order)) + tuple((e.divisor, "E") for e in excs)
        if case_id not in found or key < found[case_id][0]:
            found[case_id] = (key, params, section, role_map)
    if found:
        order = list(dict.fromkeys(c for c, *_ in cands))
        primary = next(c for c in order if c in found)
        _, params, section, role_map = found[primary]
        cases = tuple(c for c in order if c in found)
        return MatchResult(sid, True, primary, params, section, role_map, cases=cases, note=note)
    if exhausted:
        return fail(NO_SOLUTION, False, f"no solution with parameters up to {search_bound}")
    return fail(refutations[0].reason, True, refutations[0].note)


# ---------------------------------------------------------------- certificate


@dataclass(frozen=True)
class SmoothnessCertificate:
    results: tuple[tuple[Stratum, MatchResult], ...]
    verdict: Verdict
    notes: tuple[str, ...] = field(default=())

    @staticmethod
    def aggregate(results: Iterable[tuple[Stratum, MatchResult]], notes=()) -> SmoothnessCertificate:
        results = tuple(results)
        ms = [m for _, m in results]
        if any(not m.matched and m.definitive for m in ms):
            v = Verdict.SINGULAR
        elif all(m.matched for m in ms):
            v = Verdict.SMOOTH
        else:
            v = Verdict.INCONCLUSIVE
        return SmoothnessCertificate(results, v, tuple(notes))

    def refutation(self) -> MatchResult | None:
        return next((m for _, m in self.results if not m.matched and m.definitive), None)


def _minimality_decidable(d: PolyhedralDivisor) -> bool:
    if d.base.kind == BLOWUP:
        return True
    return d.origin_multiplicities is not None and sum(x.exceptional for x in d.base.divisors) == 1


def check_gm_threefold(
    d: PolyhedralDivisor,
    strata: Sequence[Stratum] | None = None,
    search_bound: int = 1000,
) -> SmoothnessCertificate:
    if d.rank != 1:
        raise DomainError("the threefold matcher handles rank-one tails only")
    if d.base.is_curve:
        raise DomainError("use check_complexity1 for curve bases")
    notes = []
    if _minimality_decidable(d):
        if not is_minimal_on_blowup(d):
            raise MinimalityError("D is the total transform of a divisor before blowing up")
    else:
        notes.append("minimality not decidable for this base; assumed")
    data = extract_local_data(d, strata)
    return SmoothnessCertificate.aggregate(((x.stratum, match_local(x, search_bound)) for x in data), notes)


def chart_smooth_closed_form(a: int, b: int, c: int) -> bool:
    """lcm(gcd(c, a), gcd(c, b)) == c, equivalent to chart_smooth_wps."""
    r1, r2 = rho(c, a), rho(c, b)
    return r1 * r2 // gcd(r1, r2) == c
