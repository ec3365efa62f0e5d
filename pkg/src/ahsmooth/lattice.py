"""Exact integer linear algebra for the downgrading exact sequence.

Everything here works over Python integers (arbitrary precision) and
``fractions.Fraction``; no floating point is used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, prod
from typing import Iterable, Sequence

from .errors import CaseMismatchError, DimensionError, DomainError, NoSectionError

Rational = Fraction


def rho(i: int, j: int) -> int:
    """gcd(|i|, |j|); undefined when both arguments vanish."""
    if i == 0 and j == 0:
        raise DomainError("rho(0, 0) is undefined")
    return gcd(i, j)


def delta(a: int, b: int, c: int) -> int:
    """gcd(a / rho(a, c), b / rho(b, c)) for positive a, b, c."""
    if min(a, b, c) < 1:
        raise DomainError(f"delta needs positive arguments, got {(a, b, c)}")
    return gcd(a // rho(a, c), b // rho(b, c))


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("cannot infer the column count of an empty matrix")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def column(cls, entries: Sequence[int]) -> IntMatrix:
        return cls([[x] for x in entries], 1)

    @classmethod
    def row(cls, entries: Sequence[int]) -> IntMatrix:
        return cls([list(entries)], len(entries))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        return IntMatrix(
            [[sum(x * y for x, y in zip(r, col)) for col in cols] for r in self.rows],
            other.ncols,
        )

    @property
    def T(self) -> IntMatrix:
        return IntMatrix([list(c) for c in zip(*self.rows)], self.nrows) if self.rows else IntMatrix([], 0)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def flat(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise DimensionError("determinant of a non-square matrix")
        return bareiss_det(self.tolist())

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U, V unimodular and U @ m @ V == S in Smith form.

    The diagonal of S is non-negative and satisfies d1 | d2 | ...
    """
    rows, cols = m.shape
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    v = IntMatrix.identity(cols).tolist()

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            a[t], a[pi] = a[pi], a[t]
            u[t], u[pi] = u[pi], u[t]
            for r in a:
                r[t], r[pj] = r[pj], r[t]
            for r in v:
                r[t], r[pj] = r[pj], r[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < rows and t < cols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix(u, rows), IntMatrix(a, cols), IntMatrix(v, cols)


def smith_diagonal(m: IntMatrix) -> tuple[int, ...]:
    _, s, _ = smith_normal_form(m)
    return tuple(s[i, i] for i in range(min(s.shape)))


def lattice_index(m: IntMatrix) -> int:
    """Index of the image m(Z^cols) in Z^rows; 0 when the image has lower rank."""
    return prod(smith_diagonal(m)) if m.nrows <= m.ncols else 0


def _bezout(f: Sequence[int]) -> tuple[int, ...]:
    # iterated extended Euclid: returns s with s.f = gcd(f)
    g, s = 0, [0] * len(f)
    for k, x in enumerate(f):
        if x == 0:
            continue
        if g == 0:
            g, s[k] = abs(x), (1 if x > 0 else -1)
            continue
        r0, r1, p0, p1, q0, q1 = g, x, 1, 0, 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            p0, p1 = p1, p0 - q * p1
            q0, q1 = q1, q0 - q * q1
        if r0 < 0:
            r0, p0, q0 = -r0, -p0, -q0
        s = [p0 * y for y in s]
        s[k] = q0
        g = r0
    return tuple(s)


def section_key(s: Sequence[int]) -> tuple:
    """Ordering used to pick the canonical section: sup norm, then l1 norm, then lexicographic."""
    return (max((abs(x) for x in s), default=0), sum(abs(x) for x in s), tuple(s))


def section_of(f: IntMatrix | Sequence[int], max_radius: int = 64) -> tuple[int, ...]:
    """Canonical integer row s with s.f = 1.

    Among all solutions the one minimising ``section_key`` is returned; the
    search covers sup norm up to ``max_radius`` and otherwise falls back to the
    extended-Euclid solution.
    """
    f = _as_vector(f)
    if all(x == 0 for x in f) or gcd(*f) != 1:
        raise NoSectionError(f"entries {f} have gcd != 1; divide out the kernel of the action first")
    k = max(range(len(f)), key=lambda i: (abs(f[i]) == 1, f[i] != 0, -i))
    others = [i for i in range(len(f)) if i != k]
    for r in range(min(max_radius, max(abs(x) for x in f)) + 1):
        found = []
        for vals in product(range(-r, r + 1), repeat=len(others)):
            rest = 1 - sum(v * f[i] for v, i in zip(vals, others))
            if rest % f[k]:
                continue
            sk = rest // f[k]
            s = [0] * len(f)
            s[k] = sk
            for v, i in zip(vals, others):
                s[i] = v
            if max(abs(x) for x in s) == r:
                found.append(tuple(s))
        if found:
            return min(found, key=section_key)
    return _bezout(f)


def is_section(s: Sequence[int], f: IntMatrix | Sequence[int]) -> bool:
    f = _as_vector(f)
    return len(s) == len(f) and sum(x * y for x, y in zip(s, f)) == 1


def _as_vector(f) -> tuple[int, ...]:
    if isinstance(f, IntMatrix):
        if f.ncols == 1:
            return tuple(r[0] for r in f.rows)
        if f.nrows == 1:
            return f.rows[0]
        raise DimensionError(f"expected a row or column, got shape {f.shape}")
    return tuple(int(x) for x in f)


CASE_PATTERNS = {
    1: "(a, b, -c)",
    2: "(a, b, c)",
    3: "(0, b, c)",
    4: "(0, b, -c)",
    5: "(0, 0, 1)",
}


def case_parameters(f: Sequence[int], case_id: int) -> tuple[int, int, int]:
    """Positive (a, b, c) of a normalized weight vector, checking its sign pattern."""
    if len(f) != 3:
        raise DimensionError("weight vectors on A^3 have three entries")
    x, y, z = f
    ok = {
        1: x > 0 and y > 0 and z < 0,
        2: x > 0 and y > 0 and z > 0,
        3: x == 0 and y > 0 and z > 0,
        4: x == 0 and y > 0 and z < 0,
        5: (x, y, z) == (0, 0, 1),
    }.get(case_id)
    if ok is None:
        raise DomainError(f"unknown case {case_id}")
    if not ok:
        raise CaseMismatchError(f"{tuple(f)} does not have the case-{case_id} pattern {CASE_PATTERNS[case_id]}")
    return abs(x), abs(y), abs(z)


def cokernel_matrix(f: IntMatrix | Sequence[int], case_id: int) -> tuple[IntMatrix, int]:
    """The listed 2x3 matrix P for the case together with its cover order [Z^2 : P(Z^3)]."""
    f = _as_vector(f)
    a, b, c = case_parameters(f, case_id)
    if case_id in (1, 2):
        sign = 1 if case_id == 1 else -1
        ra, rb = rho(a, c), rho(b, c)
        p = [[c // ra, 0, sign * a // ra], [0, c // rb, sign * b // rb]]
    elif case_id in (3, 4):
        sign = -1 if case_id == 3 else 1
        r = rho(b, c)
        p = [[1, 0, 0], [0, c // r, sign * b // r]]
    else:
        p = [[1, 0, 0], [0, 1, 0]]
    pm = IntMatrix(p)
    return pm, lattice_index(pm)


@dataclass(frozen=True)
class WeightData:
    """F, a section s and a cokernel P of the sequence 0 -> Z -> Z^3 -> Z^2."""

    F: IntMatrix
    s: IntMatrix
    P: IntMatrix
    cover_order: int

    def __post_init__(self):
        if (self.s @ self.F).rows != ((1,),):
            raise DomainError("s.F must be 1")
        if not (self.P @ self.F).is_zero():
            raise DomainError("P.F must vanish")
        if self.cover_order != lattice_index(self.P):
            raise DomainError("cover order must equal the index of P(Z^3) in Z^2")


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                q = m[i][col] / m[rank][col]
                m[i] = [x - q * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def solve_exact(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Unique solution x of sum x_i * columns[i] == target, or None.

    The columns must be linearly independent; None is returned if the target
    is not in their span.
    """
    n = len(columns)
    dim = len(target)
    aug = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(dim)]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((i for i in range(row, dim) if aug[i][col] != 0), None)
        if piv is None:
            return None
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(dim):
            if i != row and aug[i][col] != 0:
                q = aug[i][col]
                aug[i] = [x - q * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    if any(aug[i][n] != 0 for i in range(row, dim)):
        return None
    return [aug[i][n] for i in range(n)]
