import math

import numpy as np
import pytest

from qpdgame.equilibrium import (
    BoundaryTieError,
    Profile,
    SpaceKind,
    StrategySpace,
    TableClassification,
    best_response,
    classify_table,
    counter_gains,
    full_su2,
    haar_convergence,
    haar_equilibrium_check,
    is_epsilon_nash,
    pure_nash_scan,
    random_table,
)
from qpdgame.protocol import PayoffTable, TableError, exact_distribution
from qpdgame.qmath import SIGMA_X, SeededRng, equal_up_to_sign, haar_sample, is_su2
from qpdgame.strategies import D, Q, HaarRandom, Mixed, Pure, Role, ewl_unitary

FULL = StrategySpace.full(10, 10, 10)
EWL_SMALL = StrategySpace.ewl(19, 10)


def test_space_validation():
    with pytest.raises(ValueError):
        StrategySpace.ewl(1, 5)
    with pytest.raises(ValueError):
        StrategySpace(SpaceKind.FULL_SU2, (4, 4))


def test_grids_contain_named_moves():
    _, moves = EWL_SMALL.grid()
    assert any(np.allclose(m, Q) for m in moves)
    _, moves = FULL.grid()
    assert any(np.allclose(m, D) for m in moves)
    assert is_su2(moves)


def test_full_su2_parametrization_is_su2():
    rng = SeededRng(0)
    u = full_su2(*rng.uniform(0, 6.3, (3, 100)))
    assert is_su2(u)


def test_best_response_vs_q_full():
    br = best_response(Pure(Q), Role.B, FULL)
    assert equal_up_to_sign(br.move, 1j * SIGMA_X)
    assert br.payoff == pytest.approx(5.0, abs=1e-12)


def test_best_response_vs_q_restricted():
    br = best_response(Pure(Q), Role.B, StrategySpace.ewl())
    assert br.payoff <= 3.0 + 1e-6
    assert br.payoff == pytest.approx(3.0, abs=1e-12)
    assert equal_up_to_sign(br.move, Q, tol=1e-6)


def test_best_response_vs_haar_all_tie():
    br = best_response(HaarRandom(), Role.B, FULL)
    assert br.payoff == 2.25
    grid = best_response(HaarRandom(), Role.B, FULL, analytic=False, refine=False)
    assert grid.payoff == 2.25


def test_best_response_vs_mixture_uses_search():
    mix = Mixed(((0.5, Q), (0.5, D)))
    br = best_response(mix, Role.B, FULL)
    assert br.method == "grid+refine"
    assert 3.0 < br.payoff <= 5.0


def test_best_response_monotone_on_nested_grids():
    x = haar_sample(SeededRng(5))
    vals = [
        best_response(Pure(x), Role.B, StrategySpace.full(*res), analytic=False,
                      refine=False).payoff
        for res in [(4, 3, 4), (8, 5, 8), (16, 9, 16), (32, 17, 32)]
    ]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 5.0 + 1e-12
    refined = best_response(Pure(x), Role.B, StrategySpace.full(4, 3, 4), analytic=False)
    assert vals[-1] - 1e-12 <= refined.payoff <= 5.0 + 1e-12
    assert refined.payoff == pytest.approx(5.0, abs=1e-9)


def test_nash_q_q_restricted():
    v = is_epsilon_nash(Profile(Pure(Q), Pure(Q)), StrategySpace.ewl(), 0.01)
    assert v.is_epsilon_nash
    assert v.payoffs == (3.0, 3.0)


def test_nash_q_q_full_refuted():
    v = is_epsilon_nash(Profile(Pure(Q), Pure(Q)), FULL, 0.01)
    assert not v.is_epsilon_nash
    assert v.best_gain_a == pytest.approx(2.0, abs=1e-9)
    assert v.best_gain_b == pytest.approx(2.0, abs=1e-9)


def test_nash_cross_space_mode():
    v = is_epsilon_nash(Profile(Pure(Q), Pure(Q)), StrategySpace.ewl(), 0.01,
                        deviation_space=FULL)
    assert not v.is_epsilon_nash
    assert v.space["kind"] == "full"


def test_nash_haar_haar():
    v = is_epsilon_nash(Profile(HaarRandom(), HaarRandom()), FULL, 1e-12)
    assert v.is_epsilon_nash
    assert v.best_gain_a == 0 and v.best_gain_b == 0


def test_epsilon_must_be_positive():
    with pytest.raises(ValueError):
        is_epsilon_nash(Profile(Pure(Q), Pure(Q)), FULL, 0)
    with pytest.raises(ValueError):
        pure_nash_scan(FULL, -1)


def test_scan_full_maximal_is_empty():
    assert pure_nash_scan(FULL, 0.5) == []


def test_scan_restricted_finds_q_q_only():
    hits = pure_nash_scan(EWL_SMALL, 0.01)
    assert len(hits) == 1
    assert np.allclose(hits[0].a, Q) and np.allclose(hits[0].b, Q)


def test_scan_zero_entanglement_contains_dd():
    hits = pure_nash_scan(FULL, 0.01, e=0.0)
    assert any(np.allclose(h.a, D) and np.allclose(h.b, D) for h in hits)
    for h in hits:
        assert (h.payoff_a, h.payoff_b) == pytest.approx((1.0, 1.0), abs=1e-12)


def test_scan_is_deterministic():
    a = pure_nash_scan(StrategySpace.full(4, 4, 4), 0.01, e=0.0)
    b = pure_nash_scan(StrategySpace.full(4, 4, 4), 0.01, e=0.0)
    assert [(h.i, h.j) for h in a] == [(h.i, h.j) for h in b]
    assert [(h.i, h.j) for h in a] == sorted((h.i, h.j) for h in a)


def test_counter_dominance_random_profiles():
    rng = SeededRng(44)
    ga, gb = counter_gains(haar_sample(rng, 500), haar_sample(rng, 500))
    assert np.min(np.maximum(ga, gb)) >= 2 - 1e-9


def test_haar_check_identity():
    rep = haar_equilibrium_check(Pure(np.eye(2)), samples=0)
    assert rep.analytic == (0.25,) * 4
    assert rep.expected_payoff == (2.25, 2.25)
    assert rep.max_deviation_gain == 0.0


def test_haar_check_q_vs_d_identical():
    assert haar_equilibrium_check(Pure(Q), 0).analytic == haar_equilibrium_check(Pure(D), 0).analytic


def test_haar_check_monte_carlo_bound():
    rep = haar_equilibrium_check(Pure(ewl_unitary(1.0, 0.3)), 100_000, SeededRng(42))
    assert rep.max_mc_deviation <= 4 * math.sqrt(0.25 * 0.75 / 100_000)


def test_haar_analytic_invariance():
    ref = exact_distribution(HaarRandom(), Pure(np.eye(2)))
    for y in haar_sample(SeededRng(45), 100):
        assert np.array_equal(exact_distribution(HaarRandom(), Pure(y)), ref)


def test_haar_mc_scales_as_inverse_sqrt_n():
    y = Pure(ewl_unitary(1.0, 0.3))
    sizes = [10**3, 10**4, 10**5]
    errs = np.array([
        [d - 0.25 for _, d, _ in haar_convergence(y, sizes, SeededRng(seed))]
        for seed in range(8)
    ])  # (seed, size, outcome)
    rms = np.sqrt(np.mean(errs ** 2, axis=(0, 2)))
    scaled = rms * np.sqrt(sizes)
    assert scaled.max() / scaled.min() <= 4


@pytest.mark.parametrize(
    "table, expected",
    [
        ((5, 3, 1, 0), TableClassification.BETWEEN_EQUILIBRIUM_AND_COOPERATIVE),
        ((12, 11, 10, 0), TableClassification.BELOW_CLASSICAL_EQUILIBRIUM),
        ((11, 3, 2, 0), TableClassification.ABOVE_COOPERATIVE),
    ],
)
def test_classify_examples(table, expected):
    assert classify_table(PayoffTable(*table)) is expected


def test_classify_boundaries():
    with pytest.raises(BoundaryTieError):
        classify_table(PayoffTable(8, 3, 1, 0))  # q = 3 = r
    with pytest.raises(BoundaryTieError):
        classify_table(PayoffTable(2, 1.5, 1, -0.5))  # q = 1 = p
    with pytest.raises(TableError):
        classify_table((1, 2, 3, 4))


def test_classify_fuzz_strict_never_above():
    rng = SeededRng(46)
    for _ in range(10_000):
        table = random_table(rng, strict_iterated=True)
        assert classify_table(table) is not TableClassification.ABOVE_COOPERATIVE


def test_random_table_valid():
    rng = SeededRng(47)
    seen = set()
    for _ in range(2000):
        t = random_table(rng)
        assert t.t > t.r > t.p > t.s
        seen.add(classify_table(t))
    assert seen == set(TableClassification)
