"""Group rotations, the unipotent skew map on G^d, and their factors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np
import sympy

from .groups import (
    ZERO,
    AbGroup,
    CharSum,
    ExactComplex,
    GroupPoint,
    Phase,
    char_eval,
    translate,
)
from .polyalg import binom


class TorusPresent(ValueError):
    """Operation needs a purely finite group."""


@dataclass(frozen=True)
class RotationSystem:
    """``x -> x + a`` on ``group`` with Haar measure."""

    group: AbGroup
    a: GroupPoint

    def __post_init__(self):
        if self.a.group != self.group:
            raise ValueError("rotation is not a point of the group")

    def iterate(self, x: GroupPoint, n: int) -> GroupPoint:
        return rotation_iterate(self, x, n)

    def to_json(self) -> dict:
        return {"type": "rotation", "group": self.group.to_json(), "a": self.a.to_json()}

    def irrational_matrix(self) -> sympy.Matrix:
        """Integer coefficients of the torus coordinates of ``a`` on the irrationals."""
        names = self.group.irrationals
        rows = [[dict(t.irr).get(n, 0) for n in names] for t in self.a.torus]
        return sympy.Matrix(rows) if rows else sympy.zeros(0, len(names))

    def _torus_generic(self) -> bool:
        d = self.group.torus_dim
        return d == 0 or self.irrational_matrix().rank() == d

    def is_ergodic(self) -> bool:
        # chi = (j, t) has chi(a) = 0 only if t M = 0; with M of full row rank only
        # cyclic characters remain, and those see a only through its cyclic part.
        return self._torus_generic() and _cyclic_order(self.group, self.a) == math.prod(self.group.finite_orders)

    def is_totally_ergodic(self) -> bool:
        return self._torus_generic() and math.prod(self.group.finite_orders) == 1


def _cyclic_order(group: AbGroup, a: GroupPoint) -> int:
    return math.lcm(*(m // math.gcd(x, m) for x, m in zip(a.cyclic, group.finite_orders))) if group.finite_orders else 1


def rotation_iterate(sys: RotationSystem, x: GroupPoint, n: int) -> GroupPoint:
    """``x + n a``; negative n allowed."""
    return x + sys.a * n


def product_system(s1: RotationSystem, s2: RotationSystem) -> RotationSystem:
    """Rotation by ``(a1, a2)`` on ``G1 x G2`` (coordinate order as in AbGroup.product)."""
    G = s1.group.product(s2.group)
    a = GroupPoint(G, s1.a.cyclic + s2.a.cyclic, s1.a.torus + s2.a.torus)
    return RotationSystem(G, a)


# -- the unipotent skew map ---------------------------------------------------


@dataclass(frozen=True)
class UnipotentSystem:
    """``S(g_1..g_d) = (g_1 + a, g_2 + g_1, ..., g_d + g_{d-1})`` on ``G^d``."""

    group: AbGroup
    d: int
    a: GroupPoint

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")

    @property
    def state_group(self) -> AbGroup:
        return self.group.power(self.d)

    def identity(self) -> tuple[GroupPoint, ...]:
        return (self.group.zero(),) * self.d

    def step(self, g: tuple[GroupPoint, ...]) -> tuple[GroupPoint, ...]:
        return (g[0] + self.a,) + tuple(g[j] + g[j - 1] for j in range(1, self.d))

    def iterate_stepwise(self, n: int, start: tuple[GroupPoint, ...] | None = None) -> tuple[GroupPoint, ...]:
        g = self.identity() if start is None else tuple(start)
        for _ in range(n):
            g = self.step(g)
        return g

    def to_json(self) -> dict:
        return {"type": "unipotent", "group": self.group.to_json(), "a": self.a.to_json(), "d": self.d}


def unipotent_iterate(sys: UnipotentSystem, n: int) -> tuple[GroupPoint, ...]:
    """``S^n(e) = (C(n,1) a, ..., C(n,d) a)``."""
    if n < 0:
        raise ValueError("closed form is stated for n >= 0")
    return tuple(sys.a * binom(n, j) for j in range(1, sys.d + 1))


def linear_part(d: int) -> np.ndarray:
    """Integer matrix of the linear part of S acting on exponent vectors."""
    return np.eye(d, dtype=np.int64) + np.eye(d, k=-1, dtype=np.int64)


def dual_action(sys: UnipotentSystem, chis: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    """Character ``psi`` on G^d mapped to ``psi o L`` (L the linear part of S)."""
    G = sys.group
    out = []
    for j in range(sys.d):
        idx = chis[j]
        if j + 1 < sys.d:
            idx = G.add_index(idx, chis[j + 1])
        out.append(idx)
    return tuple(out)


# -- factors ------------------------------------------------------------------

KINDS = ("K_r", "K_rat", "kronecker")


@dataclass(frozen=True)
class FactorProjector:
    """Conditional expectation onto K_r, K_rat or the Kronecker factor of a rotation."""

    kind: str
    system: RotationSystem
    r: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == "K_r" and (self.r is None or self.r < 1):
            raise ValueError("K_r needs a positive r")

    def keeps(self, chi: tuple[int, ...]) -> bool:
        ph = char_eval(self.system.group, chi, self.system.a)
        if self.kind == "K_r":
            return (ph * self.r).is_zero()
        if self.kind == "K_rat":
            return ph.is_rational()
        # every character is an eigenfunction of a rotation
        return True


def project(P: FactorProjector, f: CharSum) -> CharSum:
    if f.group != P.system.group:
        raise ValueError("function and system live on different groups")
    return CharSum._wrap(f.group, {chi: c for chi, c in f.terms.items() if P.keeps(chi)})


def K_r(sys: RotationSystem, r: int) -> FactorProjector:
    return FactorProjector("K_r", sys, r)


def K_rat(sys: RotationSystem) -> FactorProjector:
    return FactorProjector("K_rat", sys)


def kronecker(sys: RotationSystem) -> FactorProjector:
    return FactorProjector("kronecker", sys)


# -- spectral data ------------------------------------------------------------


@dataclass(frozen=True)
class SpectralAtom:
    frequency: Phase
    mass: ExactComplex


def spectral_measure(sys: RotationSystem, f: CharSum) -> list[SpectralAtom]:
    """Atoms ``(chi(a), |coef_chi|^2)``, merged at equal frequencies."""
    masses: dict[Phase, ExactComplex] = {}
    for chi, c in f.terms.items():
        if c.is_zero():
            continue
        ph = char_eval(sys.group, chi, sys.a)
        masses[ph] = masses.get(ph, ZERO) + c.abs2()
    atoms = [SpectralAtom(p, m) for p, m in masses.items() if not m.is_zero()]
    return sorted(atoms, key=lambda at: (at.frequency.irr, at.frequency.q))


def atoms_as_dict(atoms: list[SpectralAtom]) -> dict[Phase, ExactComplex]:
    return {at.frequency: at.mass for at in atoms}


# -- ergodic decomposition ----------------------------------------------------


@dataclass(frozen=True)
class ErgodicComponent:
    """Orbit closure ``x0 + <a>``, identified with ``Z_h`` via ``j -> x0 + j a``."""

    representative: GroupPoint
    elements: tuple[GroupPoint, ...]
    system: RotationSystem
    weight: Fraction
    parent: RotationSystem

    def restrict(self, f: CharSum) -> CharSum:
        """``j -> f(x0 + j a)`` as a character sum on ``Z_h``."""
        h = len(self.elements)
        G = self.parent.group
        terms: dict[tuple[int, ...], ExactComplex] = {}
        for chi, c in f.terms.items():
            step = char_eval(G, chi, self.parent.a)
            s = int(step.q * h) % h
            v = c.rotate(char_eval(G, chi, self.representative))
            terms[(s,)] = terms[(s,)] + v if (s,) in terms else v
        return CharSum(self.system.group, terms)


def ergodic_components(sys: RotationSystem) -> list[ErgodicComponent]:
    G = sys.group
    if not G.is_finite:
        raise TorusPresent("ergodic decomposition is only implemented for finite groups")
    h = _cyclic_order(G, sys.a)
    Zh = AbGroup((h,))
    comp_sys = RotationSystem(Zh, Zh.point((1,)))
    seen: set[GroupPoint] = set()
    out = []
    weight = Fraction(h, G.order)
    for x in G.elements():
        if x in seen:
            continue
        orbit = tuple(x + sys.a * j for j in range(h))
        seen.update(orbit)
        out.append(ErgodicComponent(x, orbit, comp_sys, weight, sys))
    return out


def birkhoff_average(sys: RotationSystem, f: CharSum, N: int, M: int = 0) -> CharSum:
    """``(1/(N-M)) sum_{n=M}^{N-1} f(x + n a)`` as a character sum."""
    if N <= M:
        raise ValueError("empty window")
    total = CharSum.zero(f.group)
    for n in range(M, N):
        total = total + translate(f, sys.a * n)
    return total.scale(Fraction(1, N - M))


def system_from_json(obj: Mapping):
    group = AbGroup.from_json(obj["group"])
    a = GroupPoint.from_json(group, obj["a"])
    kind = obj.get("type", "rotation")
    if kind == "rotation":
        return RotationSystem(group, a)
    if kind == "unipotent":
        return UnipotentSystem(group, int(obj["d"]), a)
    raise ValueError(f"unknown system type {kind!r}")
