"""Multicorrelations along independent polynomials as sequences ``phi(S^n e)``.

For a rotation ``T g = g + a`` on a compact abelian group G and polynomials
``p_i(n) = sum_j c_{i,j} C(n, j)``, put

    S(g_1, ..., g_d) = (g_1 + a, g_2 + g_1, ..., g_d + g_{d-1})
    phi(g_1, ..., g_d) = int f_0(g) prod_i f_i(g + c_{i,0} a + sum_j c_{i,j} g_j) dm(g).

Since ``S^n(0, ..., 0) = (C(n,1) a, ..., C(n,d) a)``, ``phi(S^n e)`` is the
multicorrelation ``a_n``.  With character-sum data the g-integral is done by
orthogonality, so ``phi`` is itself an exact character sum on ``G^d``.

The system ``(G^d, S)`` is conjugate to a genuine nilsystem; that conjugacy
is not built here, the identity is checked on ``G^d`` directly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .averages import ArityMismatch, multicorrelation, ud_norm_estimate
from .dynsys import RotationSystem, UnipotentSystem, unipotent_iterate
from .groups import ONE, AbGroup, CharSum, ExactComplex, GroupPoint, char_eval, evaluate, point_tuple
from .polyalg import PolyFamily, is_rationally_independent


class DependentFamily(ValueError):
    pass


@dataclass(frozen=True)
class NilRealization:
    system: UnipotentSystem
    phi: CharSum
    coeff_table: tuple[tuple[int, ...], ...]

    @property
    def d(self) -> int:
        return self.system.d


def build_realization(
    G: AbGroup,
    a: GroupPoint,
    fs: Sequence[CharSum],
    fam: PolyFamily | None = None,
    coeff_table: Sequence[Sequence[int]] | None = None,
) -> NilRealization:
    """Construct S and phi from the binomial coefficient rows of the family.

    ``coeff_table`` overrides the rows taken from ``fam`` (useful for negative
    controls); when only rows are given, the family they define is used for
    the independence check.
    """
    if coeff_table is None:
        if fam is None:
            raise ValueError("need a family or a coefficient table")
        rows = fam.coeff_table()
    else:
        width = max(len(r) for r in coeff_table)
        rows = tuple(tuple(r) + (0,) * (width - len(r)) for r in coeff_table)
        if fam is None:
            fam = PolyFamily.of(*rows)
    if not is_rationally_independent(fam):
        raise DependentFamily(f"family {fam} is not rationally independent")
    k = len(rows)
    if len(fs) != k + 1:
        raise ArityMismatch(f"expected {k + 1} functions, got {len(fs)}")
    d = max(1, len(rows[0]) - 1)
    rows = tuple(r + (0,) * (d + 1 - len(r)) for r in rows)
    Gd = G.power(d)
    r_c = len(G.finite_orders)
    trivial = G.trivial_index()

    terms: dict[tuple[int, ...], ExactComplex] = {}
    for combo in itertools.product(*(f.terms.items() for f in fs)):
        chis = [chi for chi, _ in combo]
        total = chis[0]
        for chi in chis[1:]:
            total = G.add_index(total, chi)
        if total != trivial:
            continue  # killed by the g-integral
        coef = ONE
        for _, c in combo:
            coef = coef * c
        for i, chi in enumerate(chis[1:]):
            coef = coef.rotate(char_eval(G, chi, a * rows[i][0]))
        psis = []
        for j in range(1, d + 1):
            psi = trivial
            for i, chi in enumerate(chis[1:]):
                if rows[i][j]:
                    psi = G.add_index(psi, G.scale_index(chi, rows[i][j]))
            psis.append(psi)
        idx = tuple(x for psi in psis for x in psi[:r_c]) + tuple(x for psi in psis for x in psi[r_c:])
        prev = terms.get(idx)
        coef = coef if prev is None else prev + coef
        if coef.terms:
            terms[idx] = coef
        else:
            terms.pop(idx, None)
    phi = CharSum._wrap(Gd, terms)
    return NilRealization(UnipotentSystem(G, d, a), phi, rows)


def phi_at(R: NilRealization, g: Sequence[GroupPoint]) -> ExactComplex:
    return evaluate(R.phi, point_tuple(list(g), R.system.group))


def nilsequence_term(R: NilRealization, n: int) -> ExactComplex:
    """``phi(S^n e)`` using the closed form of the orbit."""
    return phi_at(R, unipotent_iterate(R.system, n))


@dataclass
class IdentityReport:
    n_values: list[int]
    correlations: list[ExactComplex]
    nilsequence: list[ExactComplex]
    mismatches: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def verify_identity(
    R: NilRealization,
    sys: RotationSystem,
    fs: Sequence[CharSum],
    fam: PolyFamily,
    n_range: range,
) -> IdentityReport:
    """Compare ``phi(S^n e)`` with the multicorrelation ``a_n``, exactly, for each n."""
    ns, lhs, rhs, bad = [], [], [], []
    for n in n_range:
        a_n = multicorrelation(sys, fs, fam, n)
        b_n = nilsequence_term(R, n)
        ns.append(n)
        lhs.append(a_n)
        rhs.append(b_n)
        if a_n != b_n:
            bad.append(n)
    return IdentityReport(ns, lhs, rhs, bad)


@dataclass
class DecompositionReport:
    residual_abs: np.ndarray
    ud_estimates: dict[int, float]
    exact_zero: bool


def ud_decomposition_check(
    sys: RotationSystem,
    fs: Sequence[CharSum],
    fam: PolyFamily,
    n_range: range,
    schedule: Sequence[int],
    alphas: Mapping[str, float] | None = None,
    realization: NilRealization | None = None,
) -> DecompositionReport:
    """Residual ``a_n - phi(S^n e)`` and its UD-norm estimate per window length.

    A group rotation is its own Kronecker factor, so with the realization
    built from the system itself the residual should vanish identically.
    """
    if not sys.is_ergodic():
        raise ValueError("system is not ergodic")
    R = realization or build_realization(sys.group, sys.a, fs, fam)
    residual = [multicorrelation(sys, fs, fam, n) - nilsequence_term(R, n) for n in n_range]
    zero = [r.is_zero() for r in residual]
    vals = np.array([0.0 if z else abs(r.numeric(alphas)) for r, z in zip(residual, zero)])
    ests = {L: ud_norm_estimate(vals, L) for L in schedule}
    return DecompositionReport(vals, ests, all(zero))
