"""Integer-valued polynomials in the binomial basis.

Every polynomial taking integer values on the integers can be written as
``p(n) = sum_i c_i * C(n, i)`` with integer ``c_i``.  That form is the
canonical one here; standard-basis coefficients are derived on demand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)


class NotIntegerValued(ValueError):
    """Raised when a rational polynomial does not map Z into Z."""


def binom(n: int, i: int) -> int:
    """C(n, i) for any integer n, via the falling factorial n(n-1)...(n-i+1)/i!."""
    if i < 0:
        return 0
    num = 1
    for j in range(i):
        num *= n - j
    return num // math.factorial(i)


def _forward_differences(values: Sequence[Fraction]) -> list[Fraction]:
    # c_i = (Delta^i p)(0)
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return out


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (0,)


def _eval_standard(coeffs: Sequence[Fraction], n: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial stored by binomial-basis coefficients ``c_0..c_d``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, n: int) -> int:
        return evaluate(self, n)

    def standard_coeffs(self) -> tuple[Fraction, ...]:
        """Rational coefficients ``a_0..a_d`` of ``sum a_j n**j``."""
        out = [Fraction(0)] * (self.degree + 1)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            # falling factorial n(n-1)...(n-i+1), expanded
            ff = [Fraction(1)]
            for j in range(i):
                ff = [Fraction(0)] + ff
                for t in range(len(ff) - 1):
                    ff[t] -= j * ff[t + 1]
            scale = Fraction(c, math.factorial(i))
            for t, v in enumerate(ff):
                out[t] += scale * v
        return tuple(out)

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


def from_rational_coeffs(coeffs: Sequence) -> IntPolynomial:
    """Binomial form of ``sum coeffs[j] * n**j``.

    Raises NotIntegerValued when some forward difference at 0 is not an
    integer, which happens exactly when the polynomial misses Z somewhere.
    """
    std = [Fraction(c) for c in coeffs] or [Fraction(0)]
    d = len(std) - 1
    diffs = _forward_differences([_eval_standard(std, j) for j in range(d + 1)])
    bad = [c for c in diffs if c.denominator != 1]
    if bad:
        raise NotIntegerValued(f"forward difference {bad[0]} is not an integer")
    return IntPolynomial(tuple(int(c) for c in diffs))


def from_values(values: Sequence[int]) -> IntPolynomial:
    """Polynomial of degree < len(values) interpolating ``p(j) = values[j]``."""
    diffs = _forward_differences([Fraction(v) for v in values])
    return IntPolynomial(tuple(int(c) for c in diffs))


def evaluate(p: IntPolynomial, n: int) -> int:
    # Python ints are unbounded, so there is nothing to overflow.
    return sum(c * binom(n, i) for i, c in enumerate(p.coeffs))


def compose_affine(p: IntPolynomial, s: int, r: int) -> IntPolynomial:
    """The polynomial ``n -> p(s*n + r)``."""
    return from_values([evaluate(p, s * j + r) for j in range(p.degree + 1)])


def shift(p: IntPolynomial, h: int) -> IntPolynomial:
    """``n -> p(n + h)``."""
    return compose_affine(p, 1, h)


@dataclass(frozen=True)
class PolyFamily:
    polys: tuple[IntPolynomial, ...]

    def __post_init__(self):
        polys = tuple(self.polys)
        if not polys:
            raise ValueError("a polynomial family needs at least one member")
        object.__setattr__(self, "polys", polys)

    @classmethod
    def of(cls, *items) -> "PolyFamily":
        """Build from IntPolynomials or binomial coefficient sequences."""
        return cls(tuple(p if isinstance(p, IntPolynomial) else IntPolynomial(tuple(p)) for p in items))

    @property
    def k(self) -> int:
        return len(self.polys)

    @property
    def d(self) -> int:
        return max(p.degree for p in self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def values(self, n: int) -> tuple[int, ...]:
        return tuple(evaluate(p, n) for p in self.polys)

    def compose_affine(self, s: int, r: int) -> "PolyFamily":
        return PolyFamily(tuple(compose_affine(p, s, r) for p in self.polys))

    def coeff_table(self) -> tuple[tuple[int, ...], ...]:
        """Rows ``(c_{i,0}, ..., c_{i,d})`` padded to the family degree."""
        d = self.d
        return tuple(p.coeffs + (0,) * (d - p.degree) for p in self.polys)

    def __str__(self) -> str:
        return "{" + ";".join(str(p) for p in self.polys) + "}"


def _nonconstant_matrix(fam: PolyFamily) -> sympy.Matrix:
    d = max(fam.d, 1)
    rows = [list(row[1:]) + [0] * (d - len(row) + 1) for row in fam.coeff_table()]
    return sympy.Matrix(rows)


def is_rationally_independent(fam: PolyFamily) -> bool:
    """No nontrivial integer combination of the family is constant."""
    return _nonconstant_matrix(fam).rank() == fam.k


def dependence_witness(fam: PolyFamily) -> tuple[int, ...] | None:
    """Primitive integer vector ``w`` with ``sum w_i p_i`` constant, or None."""
    null = _nonconstant_matrix(fam).T.nullspace()
    if not null:
        return None
    v = null[0]
    den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def vanishes_at_zero(fam: PolyFamily) -> bool:
    return all(p.coeffs[0] == 0 for p in fam.polys)


# -- text forms -------------------------------------------------------------

_N = sympy.Symbol("n")
_TRANSFORMS = standard_transformations + (implicit_multiplication_application, convert_xor)


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse ``[c0,c1,...]`` (binomial), ``c0,c1/2,...`` (standard) or an expression in n."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"unbalanced brackets in {text!r}")
        body = text[1:-1].strip()
        return IntPolynomial(tuple(int(x) for x in body.split(",")) if body else (0,))
    if "n" in text:
        expr = parse_expr(text, local_dict={"n": _N, "C": sympy.binomial}, transformations=_TRANSFORMS)
        expr = sympy.expand_func(expr)
        poly = sympy.Poly(sympy.expand(expr), _N)
        std = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(poly.all_coeffs())]
        return from_rational_coeffs(std)
    return from_rational_coeffs([Fraction(x.strip()) for x in text.split(",")])


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in (s.strip() for s in parts) if p]


def parse_family(text: str) -> PolyFamily:
    """Parse ``{p1, p2}`` or ``p1; p2``.

    Inside braces, items are split on top-level commas, so standard-basis
    coefficient lists must use the semicolon form.
    """
    text = text.strip()
    if text.startswith("{"):
        if not text.endswith("}"):
            raise ValueError(f"unbalanced braces in {text!r}")
        body = text[1:-1]
        items = _split_top(body, ";") if ";" in body else _split_top(body, ",")
    else:
        items = _split_top(text, ";")
    if not items:
        raise ValueError("empty family")
    return PolyFamily(tuple(parse_polynomial(it) for it in items))
