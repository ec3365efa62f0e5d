"""Exact multivariate polynomials over Q and Jacobian point checks."""
from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionError, DomainError, PointNotOnVarietyError
from .lattice import rational_rank

DEFAULT_VARIABLES = ("x", "y", "z", "t")


@dataclass(frozen=True)
class MultiPoly:
    variables: tuple[str, ...]
    terms: Mapping[tuple[int, ...], Fraction]

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], object] = ()):
        variables = tuple(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise DimensionError(f"exponent vector {exps} does not match {len(variables)} variables")
            if any(e < 0 for e in exps):
                raise DomainError("negative exponents are not polynomial")
            c = clean.get(exps, Fraction(0)) + Fraction(coeff)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, variables, c) -> MultiPoly:
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> MultiPoly:
        variables = tuple(variables)
        i = variables.index(name)
        return cls(variables, {tuple(int(j == i) for j in range(len(variables))): 1})

    def _check(self, other: MultiPoly):
        if other.variables != self.variables:
            raise DimensionError("polynomials in different variable lists")

    def _lift(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("only non-negative integer powers")
        out = MultiPoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def derivative(self, var: str | int) -> MultiPoly:
        i = self.variables.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return MultiPoly(self.variables, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


_BINOPS = {ast.Add: "__add__", ast.Sub: "__sub__", ast.Mult: "__mul__"}


def parse_poly(text: str, variables: Sequence[str] | None = None) -> MultiPoly:
    """Parse ``x^3 + y*(1 - y*z)^2 - t^2`` style input; ``^`` and ``**`` both mean power.

    Division is allowed by non-zero rational constants only.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
    names = sorted({n.id for n in ast.walk(tree) if isinstance(n, ast.Name)})
    if variables is None:
        if set(names) - set(DEFAULT_VARIABLES):
            raise DomainError(f"unknown variables {sorted(set(names) - set(DEFAULT_VARIABLES))}; declare them")
        variables = DEFAULT_VARIABLES
    variables = tuple(variables)
    unknown = set(names) - set(variables)
    if unknown:
        raise DomainError(f"undeclared variables {sorted(unknown)}")

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return MultiPoly.constant(variables, node.value)
        if isinstance(node, ast.Name):
            return MultiPoly.var(variables, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = build(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            left, right = build(node.left), build(node.right)
            if type(node.op) in _BINOPS:
                return getattr(left, _BINOPS[type(node.op)])(right)
            if isinstance(node.op, ast.Pow):
                if right.degree() > 0 or not right.terms or right.terms.get((0,) * len(variables), 0).denominator != 1:
                    raise DomainError("exponents must be non-negative integer constants")
                return left ** int(right.terms[(0,) * len(variables)])
            if isinstance(node.op, ast.Div):
                if right.degree() != 0:
                    raise DomainError("division by a non-constant")
                return left * MultiPoly.constant(variables, 1 / right.terms[(0,) * len(variables)])
        raise DomainError(f"unsupported syntax in polynomial: {ast.dump(node)[:40]}")

    return build(tree)


def parse_point(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except ValueError:
        raise DomainError(f"cannot parse point {text!r}") from None


def eval_at(f: MultiPoly, point: Sequence) -> Fraction:
    if len(point) != len(f.variables):
        raise DimensionError(f"point has {len(point)} coordinates, expected {len(f.variables)}")
    pt = [Fraction(x) for x in point]
    total = Fraction(0)
    for e, c in f.terms.items():
        m = c
        for x, k in zip(pt, e):
            if k:
                m *= x**k
        total += m
    return total


def jacobian_at(fs: Sequence[MultiPoly], point: Sequence) -> tuple[list[list[Fraction]], int]:
    """Exact Jacobian matrix at a point of the common zero locus, and its rank."""
    for i, f in enumerate(fs):
        v = eval_at(f, point)
        if v != 0:
            pt = ",".join(str(Fraction(x)) for x in point)
            raise PointNotOnVarietyError(f"equation {i} evaluates to {v} at ({pt})")
    rows = [[eval_at(f.derivative(j), point) for j in range(len(f.variables))] for f in fs]
    return rows, rational_rank(rows)


def is_singular_point(fs: Sequence[MultiPoly], point: Sequence) -> bool:
    """Jacobian criterion for a complete intersection cut out by ``fs``."""
    _, rank = jacobian_at(fs, point)
    return rank < len(fs)
