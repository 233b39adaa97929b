"""Multicorrelation sequences and polynomial ergodic averages on group rotations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .config import WINDOW_STARTS
from .dynsys import FactorProjector, K_r, K_rat, RotationSystem, TorusPresent, project
from .groups import (
    ONE,
    ZERO,
    CharSum,
    ExactComplex,
    _accumulate,
    exact_sign,
    indicator_table,
    translate,
)
from .polyalg import PolyFamily, vanishes_at_zero


class ArityMismatch(ValueError):
    pass


class NotTotallyErgodic(ValueError):
    pass


class NotIndicator(ValueError):
    pass


def _pair_integral(f: CharSum, h: CharSum) -> ExactComplex:
    """``int f h`` = sum over chi of ``f[chi] * h[-chi]``."""
    g = f.group
    total = ZERO
    if len(h.terms) < len(f.terms):
        f, h = h, f
    for chi, c in f.terms.items():
        other = h.terms.get(g.neg_index(chi))
        if other is not None:
            total = total + c * other
    return total


def multicorrelation(sys: RotationSystem, fs: Sequence[CharSum], fam: PolyFamily, n: int) -> ExactComplex:
    """``a_n = int f_0 * T^{p_1(n)} f_1 * ... * T^{p_k(n)} f_k``."""
    if len(fs) != fam.k + 1:
        raise ArityMismatch(f"expected {fam.k + 1} functions, got {len(fs)}")
    prod = fs[0]
    shifted = [translate(f, sys.a * p(n)) for f, p in zip(fs[1:], fam)]
    for f in shifted[:-1]:
        prod = prod * f
    return _pair_integral(prod, shifted[-1])


@dataclass
class CorrelationSeq:
    start: int
    terms: list[ExactComplex]
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def stop(self) -> int:
        return self.start + len(self.terms)

    def __getitem__(self, n: int) -> ExactComplex:
        return self.terms[n - self.start]

    def numeric(self, alphas: Mapping[str, float] | None = None) -> np.ndarray:
        return np.array([0j if not t.terms else t.numeric(alphas) for t in self.terms])

    def abs_values(self, alphas: Mapping[str, float] | None = None) -> np.ndarray:
        return np.abs(self.numeric(alphas))


def correlation_sequence(sys: RotationSystem, fs: Sequence[CharSum], fam: PolyFamily, n_range: range) -> CorrelationSeq:
    terms = [multicorrelation(sys, fs, fam, n) for n in n_range]
    return CorrelationSeq(n_range.start, terms, {"system": sys.to_json(), "family": str(fam)})


def ergodic_average_fn(sys: RotationSystem, fs: Sequence[CharSum], fam: PolyFamily, M: int, N: int) -> CharSum:
    """``(1/(N-M)) sum_{n=M}^{N-1} T^{p_1(n)} f_1 * ... * T^{p_k(n)} f_k`` exactly."""
    if N <= M:
        raise ValueError("window [M, N) is empty")
    if len(fs) != fam.k:
        raise ArityMismatch(f"expected {fam.k} functions, got {len(fs)}")
    G = sys.group
    acc: dict[tuple[int, ...], dict] = {}
    for n in range(M, N):
        prod = translate(fs[0], sys.a * fam[0](n))
        for f, p in zip(fs[1:], fam.polys[1:]):
            prod = prod * translate(f, sys.a * p(n))
        for chi, c in prod.terms.items():
            d = acc.setdefault(chi, {})
            for ph, v in c.terms.items():
                _accumulate(d, ph, v)
    scale = Fraction(1, N - M)
    terms = {}
    for chi, d in acc.items():
        if d:
            terms[chi] = ExactComplex._wrap({ph: v * scale for ph, v in d.items()})
    return CharSum._wrap(G, terms)


def l2_projection_gap(
    sys: RotationSystem,
    fs: Sequence[CharSum],
    fam: PolyFamily,
    M: int,
    N: int,
    alphas: Mapping[str, float] | None = None,
) -> float:
    """L2 distance between the averages of ``f_i`` and of ``E(f_i | K_rat)``."""
    P = K_rat(sys)
    diff = ergodic_average_fn(sys, fs, fam, M, N) - ergodic_average_fn(sys, [project(P, f) for f in fs], fam, M, N)
    if diff.is_zero():
        return 0.0
    return diff.l2_norm(alphas)


def total_ergodic_gap(
    sys: RotationSystem,
    fs: Sequence[CharSum],
    fam: PolyFamily,
    M: int,
    N: int,
    alphas: Mapping[str, float] | None = None,
) -> float:
    """L2 distance between the average and the constant ``prod int f_i``."""
    if not sys.is_totally_ergodic():
        raise NotTotallyErgodic("K_rat of this rotation is nontrivial")
    const = ONE
    for f in fs:
        const = const * f.coefficient(sys.group.trivial_index())
    diff = ergodic_average_fn(sys, fs, fam, M, N) - CharSum.constant(sys.group, const)
    if diff.is_zero():
        return 0.0
    return diff.l2_norm(alphas)


def uniform_estimate(gap, L: int, starts: Sequence[int] = WINDOW_STARTS) -> float:
    """``max_M gap(M, M + L)``: finite stand-in for a limit as N - M grows."""
    return max(gap(M, M + L) for M in starts)


def ud_norm_estimate(seq: CorrelationSeq | Sequence, L: int, alphas: Mapping[str, float] | None = None) -> float:
    """``max_M (1/L) sum_{n=M}^{M+L-1} |a_n|`` over all windows inside the computed range."""
    vals = seq.abs_values(alphas) if isinstance(seq, CorrelationSeq) else np.abs(np.asarray(seq, dtype=complex))
    if len(vals) < L or L < 1:
        raise ValueError(f"range of length {len(vals)} does not cover a window of length {L}")
    csum = np.concatenate([[0.0], np.cumsum(vals)])
    return float(np.max(csum[L:] - csum[:-L]) / L)


def window_average_estimate(values: Sequence[complex], L: int) -> float:
    """``max_M |(1/L) sum_{n=M}^{M+L-1} a_n|`` (signed averages, unlike the UD norm)."""
    vals = np.asarray(values, dtype=complex)
    if len(vals) < L or L < 1:
        raise ValueError(f"range of length {len(vals)} does not cover a window of length {L}")
    csum = np.concatenate([[0j], np.cumsum(vals)])
    return float(np.max(np.abs(csum[L:] - csum[:-L])) / L)


# -- multiple recurrence ------------------------------------------------------


@dataclass
class KhintchineReport:
    good: list[int]
    max_gap: int | None
    measure_A: Fraction
    threshold: Fraction
    measures: dict[int, Fraction]


def indicator_support(A: CharSum) -> np.ndarray:
    """0/1 table of ``A`` over a finite group, shaped by its cyclic orders."""
    table = indicator_table(A)
    if table is None:
        raise NotIndicator("function takes a value other than 0 and 1")
    return table.reshape(A.group.finite_orders or (1,))


def khintchine_scan(
    sys: RotationSystem,
    A: CharSum,
    fam: PolyFamily,
    eps,
    n_range: range,
) -> KhintchineReport:
    """All n with ``mu(A ∩ T^{p_1(n)}A ∩ ...) >= mu(A)^{k+1} - eps``.

    The measure is ``multicorrelation(1_A, ..., 1_A)``; on finite groups it is
    evaluated by counting on the support table, cached by shift residues.
    """
    G = sys.group
    if not G.is_finite:
        raise TorusPresent("exact scans need a finite group")
    if not vanishes_at_zero(fam):
        raise ValueError("family must vanish at 0")
    table = indicator_support(A)
    size = G.order
    mu = Fraction(int(table.sum()), size)
    eps = Fraction(str(eps)) if isinstance(eps, float) else Fraction(eps)
    threshold = mu ** (fam.k + 1) - eps
    cache: dict[tuple, Fraction] = {}
    good, measures = [], {}
    axes = tuple(range(len(G.finite_orders)))
    pairs = tuple(zip(sys.a.cyclic, G.finite_orders))
    for n in n_range:
        shifts = tuple(tuple(v * x % m for x, m in pairs) for v in fam.values(n))
        m = cache.get(shifts)
        if m is None:
            inter = table.copy()
            for s in shifts:
                # 1_A(x + s) as a table
                inter &= np.roll(table, tuple(-x for x in s), axis=axes) if axes else table
            m = cache[shifts] = Fraction(int(inter.sum()), size)
        measures[n] = m
        if m >= threshold:
            good.append(n)
    gaps = [b - a for a, b in zip(good, good[1:])]
    return KhintchineReport(good, max(gaps) if gaps else None, mu, threshold, measures)


@dataclass
class ProjectionBound:
    r: int
    k: int
    diff_norm_sq: ExactComplex
    diff_norm: float
    bound: float


def projection_approx_bound(sys: RotationSystem, A: CharSum, r: int, k: int) -> ProjectionBound:
    """``||E(1_A|K_r) - E(1_A|K_rat)||_2`` and the ``(k+1)``-term bound it implies."""
    diff = project(K_r(sys, r), A) - project(K_rat(sys), A)
    sq = diff.l2_norm_sq()
    norm = 0.0 if sq.is_zero() else math.sqrt(max(sq.numeric().real, 0.0))
    return ProjectionBound(r, k, sq, norm, (k + 1) * norm)


@dataclass
class ChainCheck:
    shifts: tuple[int, ...]
    integral_difference: ExactComplex
    bound_sq: ExactComplex
    holds: bool


def _shifted_product_integral(sys: RotationSystem, f: CharSum, shifts: Sequence[int]) -> ExactComplex:
    prod = translate(f, sys.a * shifts[0])
    for s in shifts[1:-1]:
        prod = prod * translate(f, sys.a * s)
    if len(shifts) == 1:
        return prod.coefficient(sys.group.trivial_index())
    return _pair_integral(prod, translate(f, sys.a * shifts[-1]))


def check_projection_chain(
    sys: RotationSystem,
    A: CharSum,
    r: int,
    shifts: Sequence[int],
    alphas: Mapping[str, object] | None = None,
) -> ChainCheck:
    """Exact check of ``|int prod T^{a_i} E(1_A|K_rat) - int prod T^{a_i} E(1_A|K_r)| <= (k+1) ||diff||``.

    Compared in squared form, ``|D|^2 <= (k+1)^2 ||diff||^2``, with an exact
    zero test followed by a 50-digit sign evaluation.
    """
    k = len(shifts) - 1
    f_rat = project(K_rat(sys), A)
    f_r = project(K_r(sys, r), A)
    D = _shifted_product_integral(sys, f_rat, shifts) - _shifted_product_integral(sys, f_r, shifts)
    bound_sq = (f_r - f_rat).l2_norm_sq() * ((k + 1) ** 2)
    slack = bound_sq - D.abs2()
    return ChainCheck(tuple(shifts), D, bound_sq, exact_sign(slack, alphas) >= 0)


def is_k_rat_measurable(sys: RotationSystem, f: CharSum) -> bool:
    return project(FactorProjector("K_rat", sys), f) == f
