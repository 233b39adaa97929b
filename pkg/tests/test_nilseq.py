import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_finite_config
from polyrecur.averages import ArityMismatch, multicorrelation
from polyrecur.config import DEFAULT_ALPHAS
from polyrecur.dynsys import RotationSystem
from polyrecur.groups import ONE, ZERO, AbGroup, CharSum, ExactComplex, Phase, evaluate
from polyrecur.nilseq import (
    DependentFamily,
    build_realization,
    nilsequence_term,
    phi_at,
    ud_decomposition_check,
    verify_identity,
)
from polyrecur.polyalg import PolyFamily, binom, parse_family

ALPHA = Phase.of("alpha")
T = AbGroup.torus()
TORUS = RotationSystem(T, T.point(torus=[ALPHA]))
Z4 = AbGroup.cyclic(4)
ROWS = ((1, 2, 0), (0, -1, 1))


def z4_example():
    s = RotationSystem(Z4, Z4.point((1,)))
    fs = [CharSum.character(Z4, (-1,)), CharSum.character(Z4, (1,))]
    fam = parse_family("{n}")
    return s, fs, fam, build_realization(Z4, s.a, fs, fam)


def test_constants_give_constant_phi():
    G = AbGroup.cyclic(5)
    fs = [CharSum.constant(G, 2), CharSum.constant(G, 3), CharSum.constant(G, Fraction(1, 2))]
    R = build_realization(G, G.point((1,)), fs, parse_family("{n, n^2}"))
    assert R.phi == CharSum.constant(G.power(2), 3)
    s = RotationSystem(G, G.point((1,)))
    assert verify_identity(R, s, fs, parse_family("{n, n^2}"), range(20)).passed


def test_z4_realization():
    s, fs, fam, R = z4_example()
    assert R.d == 1
    assert R.phi == CharSum.character(Z4, (1,))
    # brute double sum: phi(g1) = (1/4) sum_g f0(g) f1(g + g1)
    for g1 in Z4.elements():
        total = ZERO
        for g in Z4.elements():
            total = total + evaluate(fs[0], g) * evaluate(fs[1], g + g1)
        assert phi_at(R, [g1]) == total / 4
    assert nilsequence_term(R, 0) == phi_at(R, [Z4.zero()])
    assert nilsequence_term(R, 3) == ExactComplex.phase(Phase(Fraction(3, 4)))
    rep = verify_identity(R, s, fs, fam, range(256))
    assert rep.passed and len(rep.n_values) == 256


@pytest.mark.parametrize("ms", [(-3, 1, 2), (1, -1, 0), (4, -5, 1)])
def test_torus_example(ms):
    fs = [CharSum.character(T, (m,)) for m in ms]
    R = build_realization(T, TORUS.a, fs, coeff_table=ROWS)
    m1, m2 = ms[1], ms[2]
    # phi(t1, t2) = e(m1 (alpha + 2 t1) + m2 (t2 - t1))
    assert R.phi == CharSum.character(T.power(2), (2 * m1 - m2, m2), ExactComplex.phase(ALPHA * m1))
    fam = PolyFamily.of(*ROWS)
    for n in range(60):
        expected = ALPHA * (m1 * (2 * n + 1) + m2 * (binom(n, 2) - n))
        assert nilsequence_term(R, n) == ExactComplex.phase(expected)
    assert verify_identity(R, TORUS, fs, fam, range(1000)).passed


def test_nonzero_index_sum_kills_phi():
    fs = [CharSum.character(T, (m,)) for m in (1, 1, 1)]
    R = build_realization(T, TORUS.a, fs, coeff_table=ROWS)
    assert R.phi.is_zero()
    assert nilsequence_term(R, 7) == ZERO


def test_errors():
    s, fs, fam, _ = z4_example()
    with pytest.raises(DependentFamily):
        build_realization(Z4, s.a, fs + [fs[1]], parse_family("{n, 2n}"))
    with pytest.raises(ArityMismatch):
        build_realization(Z4, s.a, fs[:1], fam)
    with pytest.raises(ValueError):
        build_realization(Z4, s.a, fs)


def test_corrupted_rows_are_flagged():
    fs = [CharSum.character(T, (m,)) for m in (-3, 1, 2)]
    fam = PolyFamily.of(*ROWS)
    bad = build_realization(T, TORUS.a, fs, fam, coeff_table=((1, 2, 0), (0, 1, 1)))
    rep = verify_identity(bad, TORUS, fs, fam, range(50))
    assert not rep.passed and rep.mismatches
    good = build_realization(T, TORUS.a, fs, fam)
    res = ud_decomposition_check(TORUS, fs, fam, range(400), (100, 200), DEFAULT_ALPHAS, realization=bad)
    assert not res.exact_zero and max(res.ud_estimates.values()) > 0.1
    res = ud_decomposition_check(TORUS, fs, fam, range(400), (100, 200), DEFAULT_ALPHAS, realization=good)
    assert res.exact_zero and set(res.ud_estimates.values()) == {0.0}


def test_ud_decomposition_exact_model():
    s = RotationSystem(AbGroup((3,), 1, ("alpha",)), AbGroup((3,), 1, ("alpha",)).point((1,), [ALPHA]))
    G = s.group
    fs = [CharSum(G, {(0, 0): 1, (1, -1): 2}), CharSum(G, {(2, 1): 1}), CharSum(G, {(0, 0): ExactComplex.gaussian(0, 1), (1, 0): 1})]
    rep = ud_decomposition_check(s, fs, parse_family("{n, n^2}"), range(300), (50, 100), DEFAULT_ALPHAS)
    assert rep.exact_zero
    with pytest.raises(ValueError):
        Z6 = AbGroup.cyclic(6)
        ud_decomposition_check(RotationSystem(Z6, Z6.point((2,))), [CharSum.constant(Z6)] * 2, parse_family("{n}"), range(5), (2,))


def test_mean_zero_correlation_vanishes():
    # with f_0 constant and f_1 a nontrivial character, every a_n integrates a character
    fs = [CharSum.constant(T), CharSum.character(T, (1,))]
    fam = parse_family("{n^2}")
    rep = ud_decomposition_check(TORUS, fs, fam, range(500), (100,), DEFAULT_ALPHAS)
    assert all(multicorrelation(TORUS, fs, fam, n) == ZERO for n in range(50))
    assert rep.exact_zero


def test_phi_transforms_under_index_shift():
    rng = random.Random(7)
    G = AbGroup.cyclic(12)
    a = G.point((5,))
    fam = parse_family("{2n+1, C(n,2)-n, n^3}")
    fs = [CharSum(G, {(rng.randrange(12),): 1 for _ in range(3)}) for _ in range(4)]
    R = build_realization(G, a, fs, fam)
    R1 = build_realization(G, a, fs, fam.compose_affine(1, 1))
    for n in range(40):
        assert nilsequence_term(R1, n) == nilsequence_term(R, n + 1)
    for _ in range(30):
        g = tuple(G.point((rng.randrange(12),)) for _ in range(R.d))
        assert phi_at(R1, g) == phi_at(R, R.system.step(g))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_identity_on_random_finite_configs(seed):
    rng = random.Random(seed)
    G, a, fs, fam = random_finite_config(rng)
    R = build_realization(G, a, fs, fam)
    rep = verify_identity(R, RotationSystem(G, a), fs, fam, range(0, 1000))
    assert rep.passed


def test_numeric_residual_vector():
    s, fs, fam, R = z4_example()
    rep = ud_decomposition_check(s, fs, fam, range(64), (8, 16), realization=R)
    assert np.all(rep.residual_abs == 0) and ONE == nilsequence_term(R, 0)
