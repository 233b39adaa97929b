"""Compact abelian groups ``Z_m1 x ... x Z_mr x T^d`` and exact character sums.

Torus coordinates are exact: a rational part modulo 1 plus integer multiples
of named irrationals.  The irrationals are assumed irrational and rationally
independent together with 1, so equality of phases is a syntactic test.

Functions on a group are finite character sums.  Their coefficients are
exact complex numbers: finite rational combinations of ``e(phase)``, where
``e(x) = exp(2 pi i x)``.  Zero tests on such numbers reduce the rational
part modulo the relevant cyclotomic polynomial.
"""
from __future__ import annotations

import cmath
import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import mpmath
import numpy as np
import sympy

_HALF = Fraction(1, 2)


class MissingAssignment(KeyError):
    """A formal irrational has no numeric value for floating evaluation."""


class Phase:
    """Exact element ``q + sum t_i * alpha_i`` of R/Z with q rational.

    ``irr`` is a sorted tuple of ``(name, coefficient)`` with no zero entries.
    """

    __slots__ = ("q", "irr", "_hash")

    def __init__(self, q=0, irr: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        q = Fraction(q)
        self.q = q - math.floor(q)
        items = irr.items() if isinstance(irr, Mapping) else irr
        merged: dict[str, int] = {}
        for name, t in items:
            merged[name] = merged.get(name, 0) + int(t)
        self.irr = tuple(sorted((k, v) for k, v in merged.items() if v))
        self._hash = None

    @classmethod
    def _raw(cls, q: Fraction, irr: tuple) -> "Phase":
        p = object.__new__(cls)
        p.q = q
        p.irr = irr
        p._hash = None
        return p

    @classmethod
    def of(cls, name: str, t: int = 1) -> "Phase":
        return cls(0, {name: t})

    def __add__(self, other: "Phase") -> "Phase":
        q = self.q + other.q
        if q >= 1:
            q -= 1
        if not other.irr:
            return Phase._raw(q, self.irr)
        if not self.irr:
            return Phase._raw(q, other.irr)
        return Phase(q, self.irr + other.irr)

    def __neg__(self) -> "Phase":
        q = -self.q
        if q < 0:
            q += 1
        return Phase._raw(q, tuple((k, -v) for k, v in self.irr))

    def __sub__(self, other: "Phase") -> "Phase":
        return self + (-other)

    def __mul__(self, n: int) -> "Phase":
        n = int(n)
        if n == 0:
            return ZERO_PHASE
        q = self.q * n
        q -= math.floor(q)
        return Phase._raw(q, tuple((k, v * n) for k, v in self.irr))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        return self.q == other.q and self.irr == other.irr

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.q, self.irr))
        return self._hash

    def is_zero(self) -> bool:
        return self.q == 0 and not self.irr

    def is_rational(self) -> bool:
        return not self.irr

    def names(self) -> set[str]:
        return {k for k, _ in self.irr}

    def value(self, alphas: Mapping[str, float] | None = None) -> float:
        """Real representative in [0, 1)."""
        x = float(self.q)
        for name, t in self.irr:
            try:
                a = alphas[name]  # type: ignore[index]
            except (KeyError, TypeError):
                raise MissingAssignment(name) from None
            x += t * float(a)
        return x % 1.0

    def __repr__(self) -> str:
        return f"Phase({self})"

    def __str__(self) -> str:
        parts = [str(self.q)] if self.q or not self.irr else []
        for name, t in self.irr:
            parts.append(name if t == 1 else f"-{name}" if t == -1 else f"{t}*{name}")
        s = "+".join(parts)
        return s.replace("+-", "-")


ZERO_PHASE = Phase._raw(Fraction(0), ())

_TERM = re.compile(r"([+-]?)\s*([^+-]+)")


def parse_phase(text) -> Phase:
    """Parse ``"1/3 + 5*alpha - beta"``; numbers are taken as exact rationals."""
    if isinstance(text, Phase):
        return text
    if isinstance(text, (int, Fraction)):
        return Phase(text)
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty phase")
    q = Fraction(0)
    irr: dict[str, int] = {}
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise ValueError(f"cannot parse phase {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2)
        if "*" in body:
            coef, name = body.split("*", 1)
            irr[name] = irr.get(name, 0) + sign * int(coef)
        elif re.fullmatch(r"[A-Za-z_]\w*", body):
            irr[body] = irr.get(body, 0) + sign
        else:
            q += sign * Fraction(body)
    if pos != len(s):
        raise ValueError(f"cannot parse phase {text!r}")
    return Phase(q, irr)


# -- exact complex numbers ----------------------------------------------------


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    x = sympy.Symbol("x")
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()))


def _reduce_cyclotomic(terms: Mapping[Fraction, Fraction]) -> tuple[int, list[Fraction]]:
    """Coordinates of ``sum c * e(q)`` in the power basis of Q(zeta_L)."""
    L = 1
    for q in terms:
        L = L * q.denominator // math.gcd(L, q.denominator)
    poly = [Fraction(0)] * L
    for q, c in terms.items():
        poly[int(q * L) % L] += c
    phi = _cyclotomic(L)
    deg = len(phi) - 1
    for top in range(L - 1, deg - 1, -1):
        c = poly[top]
        if c:
            poly[top] = Fraction(0)
            # phi is monic
            for j in range(deg):
                poly[top - deg + j] -= c * phi[j]
    return L, poly[:deg]


class ExactComplex:
    """Finite sum ``sum_j c_j * e(phase_j)`` with rational ``c_j``.

    Terms are kept with rational phase part in [0, 1/2) by folding
    ``e(q + 1/2) = -e(q)``; remaining coincidences (for instance
    ``1 + e(1/3) + e(2/3) = 0``) are detected by cyclotomic reduction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Phase, Fraction] | None = None):
        self.terms: dict[Phase, Fraction] = {}
        if terms:
            for p, c in terms.items():
                _accumulate(self.terms, p, Fraction(c))

    @classmethod
    def _wrap(cls, terms: dict[Phase, Fraction]) -> "ExactComplex":
        z = object.__new__(cls)
        z.terms = terms
        return z

    @classmethod
    def rational(cls, c) -> "ExactComplex":
        c = Fraction(c)
        return cls._wrap({ZERO_PHASE: c} if c else {})

    @classmethod
    def gaussian(cls, re_part, im_part=0) -> "ExactComplex":
        d: dict[Phase, Fraction] = {}
        _accumulate(d, ZERO_PHASE, Fraction(re_part))
        _accumulate(d, Phase(Fraction(1, 4)), Fraction(im_part))
        return cls._wrap(d)

    @classmethod
    def phase(cls, p: Phase, c=1) -> "ExactComplex":
        d: dict[Phase, Fraction] = {}
        _accumulate(d, p, Fraction(c))
        return cls._wrap(d)

    # arithmetic

    def __add__(self, other) -> "ExactComplex":
        other = exact(other)
        d = dict(self.terms)
        for p, c in other.terms.items():
            _accumulate(d, p, c)
        return ExactComplex._wrap(d)

    __radd__ = __add__

    def __neg__(self) -> "ExactComplex":
        return ExactComplex._wrap({p: -c for p, c in self.terms.items()})

    def __sub__(self, other) -> "ExactComplex":
        return self + (-exact(other))

    def __rsub__(self, other) -> "ExactComplex":
        return exact(other) - self

    def __mul__(self, other) -> "ExactComplex":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return ExactComplex._wrap({p: c * other for p, c in self.terms.items()})
        other = exact(other)
        d: dict[Phase, Fraction] = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                _accumulate(d, p1 + p2, c1 * c2)
        return ExactComplex._wrap(d)

    __rmul__ = __mul__

    def __truediv__(self, n) -> "ExactComplex":
        n = Fraction(n)
        return ExactComplex._wrap({p: c / n for p, c in self.terms.items()})

    def rotate(self, p: Phase) -> "ExactComplex":
        """Multiply by ``e(p)``."""
        if p.is_zero():
            return self
        d: dict[Phase, Fraction] = {}
        for p1, c in self.terms.items():
            _accumulate(d, p1 + p, c)
        return ExactComplex._wrap(d)

    def conjugate(self) -> "ExactComplex":
        d: dict[Phase, Fraction] = {}
        for p, c in self.terms.items():
            _accumulate(d, -p, c)
        return ExactComplex._wrap(d)

    conj = conjugate

    def abs2(self) -> "ExactComplex":
        return self * self.conjugate()

    @property
    def real(self) -> "ExactComplex":
        return (self + self.conjugate()) / 2

    @property
    def imag(self) -> "ExactComplex":
        # (z - conj z) / (2i), and 1/i = e(3/4)
        return (self - self.conjugate()).rotate(Phase(Fraction(3, 4))) / 2

    # exact predicates

    def _by_irrational_part(self) -> dict[tuple, dict[Fraction, Fraction]]:
        groups: dict[tuple, dict[Fraction, Fraction]] = {}
        for p, c in self.terms.items():
            g = groups.setdefault(p.irr, {})
            g[p.q] = g.get(p.q, Fraction(0)) + c
        return groups

    def is_zero(self) -> bool:
        if not self.terms:
            return True
        for group in self._by_irrational_part().values():
            _, coords = _reduce_cyclotomic(group)
            if any(coords):
                return False
        return True

    def __eq__(self, other) -> bool:
        try:
            other = exact(other)
        except TypeError:
            return NotImplemented
        if self.terms == other.terms:
            return True
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational_phase_only(self) -> bool:
        return all(not p.irr for p in self.terms)

    def to_fraction(self) -> Fraction | None:
        """The value as a rational number, or None when it is not rational."""
        groups = self._by_irrational_part()
        value = Fraction(0)
        for irr, group in groups.items():
            _, coords = _reduce_cyclotomic(group)
            if irr:
                if any(coords):
                    return None
                continue
            if any(coords[1:]):
                return None
            value = coords[0] if coords else Fraction(0)
        return value

    def simplified(self) -> "ExactComplex":
        """Replace the rational-phase part by its cyclotomic normal form when shorter."""
        groups = self._by_irrational_part()
        d: dict[Phase, Fraction] = {}
        for irr, group in groups.items():
            L, coords = _reduce_cyclotomic(group)
            candidate = {Fraction(j, L): c for j, c in enumerate(coords) if c}
            src = candidate if len(candidate) <= len(group) else group
            for q, c in src.items():
                _accumulate(d, Phase(q, irr), c)
        return ExactComplex._wrap(d)

    # numerics

    def names(self) -> set[str]:
        out: set[str] = set()
        for p in self.terms:
            out |= p.names()
        return out

    def numeric(self, alphas: Mapping[str, float] | None = None) -> complex:
        total = 0j
        for p, c in self.terms.items():
            total += float(c) * cmath.exp(2j * math.pi * p.value(alphas))
        return total

    def numeric_mp(self, alphas: Mapping[str, object] | None = None, dps: int = 50) -> mpmath.mpc:
        with mpmath.workdps(dps):
            total = mpmath.mpc(0)
            for p, c in self.terms.items():
                x = mpmath.mpf(p.q.numerator) / p.q.denominator
                for name, t in p.irr:
                    if alphas is None or name not in alphas:
                        raise MissingAssignment(name)
                    v = alphas[name]
                    # callables produce the value at the working precision
                    x += t * mpmath.mpf(v() if callable(v) else v)
                total += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(2 * x)
            return +total

    def __complex__(self) -> complex:
        return self.numeric()

    def __repr__(self) -> str:
        if not self.terms:
            return "ExactComplex(0)"
        body = " + ".join(f"{c}*e({p})" for p, c in self.terms.items())
        return f"ExactComplex({body})"

    def to_json(self) -> list:
        return [[str(p), str(c)] for p, c in sorted(self.terms.items(), key=lambda t: (t[0].irr, t[0].q))]


def _accumulate(d: dict, p: Phase, c: Fraction) -> None:
    if not c:
        return
    if p.q >= _HALF:
        p = Phase._raw(p.q - _HALF, p.irr)
        c = -c
    v = d.get(p, 0) + c
    if v:
        d[p] = v
    else:
        d.pop(p, None)


ZERO = ExactComplex._wrap({})
ONE = ExactComplex.rational(1)


def exact(x) -> ExactComplex:
    """Coerce ints, Fractions, rational strings, Phases and complex numbers."""
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactComplex.rational(x)
    if isinstance(x, Phase):
        return ExactComplex.phase(x)
    if isinstance(x, complex):
        return ExactComplex.gaussian(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, str):
        return ExactComplex.rational(Fraction(x))
    if isinstance(x, float):
        return ExactComplex.rational(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to ExactComplex")


def exact_sign(x: ExactComplex, alphas: Mapping[str, object] | None = None) -> int:
    """Sign of a real exact number: exact zero test, then 50-digit evaluation."""
    if x.is_zero():
        return 0
    r = x.to_fraction()
    if r is not None:
        return (r > 0) - (r < 0)
    v = x.numeric_mp(alphas)
    if abs(v.imag) > mpmath.mpf(10) ** -30:
        raise ValueError("value is not real")
    if abs(v.real) < mpmath.mpf(10) ** -40:
        raise ArithmeticError("sign undecided at working precision")
    return 1 if v.real > 0 else -1


# -- groups and points --------------------------------------------------------


@dataclass(frozen=True)
class AbGroup:
    """``Z_{m_1} x ... x Z_{m_r} x T^{torus_dim}``."""

    finite_orders: tuple[int, ...] = ()
    torus_dim: int = 0
    irrationals: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "finite_orders", tuple(int(m) for m in self.finite_orders))
        object.__setattr__(self, "irrationals", tuple(self.irrationals))
        if any(m < 1 for m in self.finite_orders) or self.torus_dim < 0:
            raise ValueError("cyclic orders must be positive and torus_dim nonnegative")

    @classmethod
    def cyclic(cls, *orders: int) -> "AbGroup":
        return cls(tuple(orders))

    @classmethod
    def torus(cls, dim: int = 1, irrationals: Sequence[str] = ("alpha",)) -> "AbGroup":
        return cls((), dim, tuple(irrationals))

    @property
    def rank(self) -> int:
        """Number of coordinates (cyclic then torus)."""
        return len(self.finite_orders) + self.torus_dim

    @property
    def is_finite(self) -> bool:
        return self.torus_dim == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("group has torus factors")
        return math.prod(self.finite_orders)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.finite_orders) if self.finite_orders else 1

    def zero(self) -> "GroupPoint":
        return GroupPoint(self, (0,) * len(self.finite_orders), (ZERO_PHASE,) * self.torus_dim)

    def point(self, cyclic: Sequence[int] = (), torus: Sequence = ()) -> "GroupPoint":
        cyclic = tuple(cyclic) or (0,) * len(self.finite_orders)
        torus = tuple(parse_phase(t) for t in torus) or (ZERO_PHASE,) * self.torus_dim
        return GroupPoint(self, cyclic, torus)

    def elements(self) -> Iterator["GroupPoint"]:
        if not self.is_finite:
            raise ValueError("cannot enumerate a group with torus factors")
        for c in itertools.product(*(range(m) for m in self.finite_orders)):
            yield GroupPoint(self, c, ())

    def index(self, chi: Sequence[int]) -> tuple[int, ...]:
        """Normalize a character index: cyclic entries mod m, torus entries as given."""
        chi = tuple(int(x) for x in chi)
        if len(chi) != self.rank:
            raise ValueError(f"character index {chi} has wrong length for rank {self.rank}")
        r = len(self.finite_orders)
        return tuple(x % m for x, m in zip(chi[:r], self.finite_orders)) + chi[r:]

    def characters(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite:
            raise ValueError("infinitely many characters")
        return itertools.product(*(range(m) for m in self.finite_orders))

    def neg_index(self, chi: tuple[int, ...]) -> tuple[int, ...]:
        return self.index(tuple(-x for x in chi))

    def add_index(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        r = len(self.finite_orders)
        out = [(x + y) % m for x, y, m in zip(a[:r], b[:r], self.finite_orders)]
        out.extend(x + y for x, y in zip(a[r:], b[r:]))
        return tuple(out)

    def scale_index(self, chi: tuple[int, ...], c: int) -> tuple[int, ...]:
        r = len(self.finite_orders)
        out = [(x * c) % m for x, m in zip(chi[:r], self.finite_orders)]
        out.extend(x * c for x in chi[r:])
        return tuple(out)

    def trivial_index(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def product(self, other: "AbGroup") -> "AbGroup":
        """Direct product; coordinates ordered cyclic(self), cyclic(other), torus(self), torus(other)."""
        names = list(self.irrationals) + [n for n in other.irrationals if n not in self.irrationals]
        return AbGroup(self.finite_orders + other.finite_orders, self.torus_dim + other.torus_dim, tuple(names))

    def power(self, d: int) -> "AbGroup":
        return AbGroup(self.finite_orders * d, self.torus_dim * d, self.irrationals)

    def to_json(self) -> dict:
        return {"cyclic": list(self.finite_orders), "torus": self.torus_dim, "irrationals": list(self.irrationals)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "AbGroup":
        return cls(tuple(obj.get("cyclic", ())), int(obj.get("torus", 0)), tuple(obj.get("irrationals", ())))


@dataclass(frozen=True)
class GroupPoint:
    group: AbGroup
    cyclic: tuple[int, ...]
    torus: tuple[Phase, ...] = field(default=())

    def __post_init__(self):
        g = self.group
        if len(self.cyclic) != len(g.finite_orders) or len(self.torus) != g.torus_dim:
            raise ValueError("point does not match group shape")
        object.__setattr__(self, "cyclic", tuple(int(x) % m for x, m in zip(self.cyclic, g.finite_orders)))
        for t in self.torus:
            unknown = t.names() - set(g.irrationals)
            if unknown:
                raise ValueError(f"undeclared irrationals {sorted(unknown)}")

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return GroupPoint(
            self.group,
            tuple(x + y for x, y in zip(self.cyclic, other.cyclic)),
            tuple(x + y for x, y in zip(self.torus, other.torus)),
        )

    def __neg__(self) -> "GroupPoint":
        return GroupPoint(self.group, tuple(-x for x in self.cyclic), tuple(-t for t in self.torus))

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        return self + (-other)

    def __mul__(self, n: int) -> "GroupPoint":
        return GroupPoint(self.group, tuple(x * n for x in self.cyclic), tuple(t * n for t in self.torus))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"cyclic": list(self.cyclic), "torus": [str(t) for t in self.torus]}

    @classmethod
    def from_json(cls, group: AbGroup, obj) -> "GroupPoint":
        if isinstance(obj, (int, str)) and group.rank == 1:
            obj = {"cyclic": [obj]} if group.finite_orders else {"torus": [obj]}
        return group.point(obj.get("cyclic", ()), obj.get("torus", ()))

    def __str__(self) -> str:
        return "(" + ", ".join([str(c) for c in self.cyclic] + [str(t) for t in self.torus]) + ")"


def point_tuple(points: Sequence[GroupPoint], group: AbGroup) -> GroupPoint:
    """Concatenate points of ``group`` into a point of ``group.power(len(points))``."""
    big = group.power(len(points))
    return GroupPoint(big, tuple(c for p in points for c in p.cyclic), tuple(t for p in points for t in p.torus))


def char_eval(group: AbGroup, chi: Sequence[int], x: GroupPoint) -> Phase:
    """Phase of ``chi(x)``, so that ``chi(x) = e(char_eval(...))``."""
    r = len(group.finite_orders)
    q = Fraction(0)
    for j, xj, m in zip(chi[:r], x.cyclic, group.finite_orders):
        if j and xj:
            q += Fraction(j * xj, m)
    out = Phase(q)
    for j, t in zip(chi[r:], x.torus):
        if j:
            out = out + t * j
    return out


# -- character sums -----------------------------------------------------------


class CharSum:
    """Function ``sum_chi coef_chi * chi`` on an AbGroup, with exact coefficients."""

    __slots__ = ("group", "terms")

    def __init__(self, group: AbGroup, terms: Mapping[Sequence[int], object] | None = None):
        self.group = group
        self.terms: dict[tuple[int, ...], ExactComplex] = {}
        for chi, c in (terms or {}).items():
            c = exact(c)
            idx = group.index(chi)
            prev = self.terms.get(idx)
            c = c if prev is None else prev + c
            if c.terms:
                self.terms[idx] = c
            else:
                self.terms.pop(idx, None)

    @classmethod
    def _wrap(cls, group: AbGroup, terms: dict) -> "CharSum":
        f = object.__new__(cls)
        f.group = group
        f.terms = terms
        return f

    @classmethod
    def constant(cls, group: AbGroup, c=1) -> "CharSum":
        return cls(group, {group.trivial_index(): c})

    @classmethod
    def character(cls, group: AbGroup, chi: Sequence[int], c=1) -> "CharSum":
        return cls(group, {tuple(chi): c})

    @classmethod
    def zero(cls, group: AbGroup) -> "CharSum":
        return cls._wrap(group, {})

    def _check(self, other: "CharSum") -> None:
        if other.group != self.group:
            raise ValueError("character sums live on different groups")

    def __add__(self, other: "CharSum") -> "CharSum":
        self._check(other)
        d = dict(self.terms)
        for chi, c in other.terms.items():
            v = d[chi] + c if chi in d else c
            if v.terms:
                d[chi] = v
            else:
                d.pop(chi, None)
        return CharSum._wrap(self.group, d)

    def __neg__(self) -> "CharSum":
        return CharSum._wrap(self.group, {chi: -c for chi, c in self.terms.items()})

    def __sub__(self, other: "CharSum") -> "CharSum":
        return self + (-other)

    def scale(self, c) -> "CharSum":
        c = c if isinstance(c, (int, Fraction)) else exact(c)
        d = {}
        for chi, v in self.terms.items():
            w = v * c
            if w.terms:
                d[chi] = w
        return CharSum._wrap(self.group, d)

    def __mul__(self, other) -> "CharSum":
        if isinstance(other, CharSum):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "CharSum":
        return self.scale(other)

    def conjugate(self) -> "CharSum":
        g = self.group
        return CharSum._wrap(g, {g.neg_index(chi): c.conjugate() for chi, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharSum):
            return NotImplemented
        if other.group != self.group:
            return False
        for chi in set(self.terms) | set(other.terms):
            if self.terms.get(chi, ZERO) != other.terms.get(chi, ZERO):
                return False
        return True

    __hash__ = None  # type: ignore[assignment]

    def coefficient(self, chi: Sequence[int]) -> ExactComplex:
        return self.terms.get(self.group.index(chi), ZERO)

    def support(self) -> list[tuple[int, ...]]:
        return sorted(chi for chi, c in self.terms.items() if not c.is_zero())

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def l2_norm_sq(self) -> ExactComplex:
        """``||f||_2^2`` by Parseval."""
        total = ZERO
        for c in self.terms.values():
            total = total + c.abs2()
        return total

    def l2_norm(self, alphas: Mapping[str, float] | None = None) -> float:
        return math.sqrt(sum(abs(c.numeric(alphas)) ** 2 for c in self.terms.values()))

    def sup_bound(self, alphas: Mapping[str, float] | None = None) -> float:
        """Upper bound ``sum |coef|`` for the sup norm."""
        return sum(abs(c.numeric(alphas)) for c in self.terms.values())

    def __call__(self, x: GroupPoint) -> ExactComplex:
        return evaluate(self, x)

    def __repr__(self) -> str:
        body = ", ".join(f"{chi}: {c!r}" for chi, c in sorted(self.terms.items()))
        return f"CharSum({body})"

    def to_json(self) -> dict:
        return {"terms": [{"chi": list(chi), "coef": c.to_json()} for chi, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, group: AbGroup, obj) -> "CharSum":
        """Accepts ``{"terms": [{"chi": [..], "coef": ...}]}`` or a bare number.

        ``coef`` is a rational string, a ``[re, im]`` pair, or a list of
        ``[phase, rational]`` pairs as produced by ``to_json``.  An optional
        ``"phase"`` entry multiplies the coefficient by ``e(phase)``.
        """
        if isinstance(obj, (int, str)):
            return cls.constant(group, Fraction(obj))
        terms: dict = {}
        for t in obj["terms"]:
            c = _coef_from_json(t.get("coef", "1"))
            if "phase" in t:
                c = c.rotate(parse_phase(t["phase"]))
            chi = group.index(t["chi"])
            terms[chi] = terms[chi] + c if chi in terms else c
        return cls(group, terms)


def _coef_from_json(obj) -> ExactComplex:
    if isinstance(obj, (int, str)):
        return ExactComplex.rational(Fraction(obj))
    if len(obj) == 2 and not isinstance(obj[0], list):
        return ExactComplex.gaussian(Fraction(obj[0]), Fraction(obj[1]))
    out = ZERO
    for phase, c in obj:
        out = out + ExactComplex.phase(parse_phase(phase), Fraction(c))
    return out


def translate(f: CharSum, a: GroupPoint) -> CharSum:
    """``(T_a f)(g) = f(g + a)``: each coefficient picks up ``chi(a)``."""
    g = f.group
    return CharSum._wrap(g, {chi: c.rotate(char_eval(g, chi, a)) for chi, c in f.terms.items()})


def multiply(f: CharSum, h: CharSum) -> CharSum:
    f._check(h)
    g = f.group
    d: dict[tuple[int, ...], ExactComplex] = {}
    for chi1, c1 in f.terms.items():
        for chi2, c2 in h.terms.items():
            chi = g.add_index(chi1, chi2)
            v = c1 * c2
            if chi in d:
                v = d[chi] + v
            if v.terms:
                d[chi] = v
            else:
                d.pop(chi, None)
    return CharSum._wrap(g, d)


def integrate(f: CharSum) -> ExactComplex:
    """Haar integral: the coefficient of the trivial character."""
    return f.terms.get(f.group.trivial_index(), ZERO)


def evaluate(f: CharSum, x: GroupPoint) -> ExactComplex:
    """Exact value ``f(x)``."""
    d: dict[Phase, Fraction] = {}
    for chi, c in f.terms.items():
        ph = char_eval(f.group, chi, x)
        for p, v in c.terms.items():
            _accumulate(d, p + ph, v)
    return ExactComplex._wrap(d)


def numeric_eval(f: CharSum, x: GroupPoint, alphas: Mapping[str, float] | None = None) -> complex:
    total = 0j
    for chi, c in f.terms.items():
        ph = char_eval(f.group, chi, x).value(alphas)
        total += c.numeric(alphas) * cmath.exp(2j * math.pi * ph)
    return total


def tensor(f: CharSum, h: CharSum) -> CharSum:
    """``(f (x) h)(x, y) = f(x) h(y)`` on ``f.group.product(h.group)``."""
    G, H = f.group, h.group
    P = G.product(H)
    rg, rh = len(G.finite_orders), len(H.finite_orders)
    d = {}
    for chi1, c1 in f.terms.items():
        for chi2, c2 in h.terms.items():
            idx = chi1[:rg] + chi2[:rh] + chi1[rg:] + chi2[rh:]
            v = c1 * c2
            if v.terms:
                d[idx] = v
    return CharSum._wrap(P, d)


def indicator(group: AbGroup, support: Iterable[Sequence[int]]) -> CharSum:
    """Fourier expansion of the indicator of a subset of a finite group."""
    pts = [group.point(tuple(s) if not isinstance(s, int) else (s,)) for s in support]
    n = group.order
    terms = {}
    for chi in group.characters():
        d: dict[Phase, Fraction] = {}
        for x in pts:
            _accumulate(d, -char_eval(group, chi, x), Fraction(1, n))
        if d:
            terms[chi] = ExactComplex._wrap(d)
    return CharSum._wrap(group, terms)


def pointwise_values(f: CharSum) -> list[ExactComplex]:
    """Exact values of ``f`` at every element of a finite group, in ``elements()`` order."""
    return [evaluate(f, x) for x in f.group.elements()]


def indicator_table(f: CharSum) -> np.ndarray | None:
    """0/1 table of ``f`` over a finite group in ``elements()`` order, or None.

    A floating evaluation proposes the support; the answer is then confirmed
    exactly by comparing ``f`` with the Fourier expansion of that support.
    """
    G = f.group
    if not G.is_finite:
        raise ValueError("pointwise tables need a finite group")
    pts = np.array([x.cyclic for x in G.elements()], dtype=np.int64).reshape(G.order, -1)
    vals = np.zeros(G.order, dtype=complex)
    orders = np.array(G.finite_orders, dtype=np.float64)
    for chi, c in f.terms.items():
        ph = pts @ (np.array(chi, dtype=np.float64) / orders) if G.finite_orders else np.zeros(G.order)
        vals += c.numeric() * np.exp(2j * np.pi * ph)
    table = np.abs(vals - 1) < 0.5
    if not np.all(np.minimum(np.abs(vals), np.abs(vals - 1)) < 1e-6):
        return None
    support = [tuple(int(v) for v in row) for row in pts[table]]
    if indicator(G, support) != f:
        return None
    return table


def is_indicator(f: CharSum) -> bool:
    """Whether ``f`` is 0/1 valued, i.e. ``f * f == f``."""
    if f.group.is_finite:
        return indicator_table(f) is not None
    return multiply(f, f) == f
