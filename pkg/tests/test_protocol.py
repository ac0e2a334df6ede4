import math

import numpy as np
import pytest
from scipy.linalg import expm

from qpdgame.protocol import (
    DEFAULT_TABLE,
    EntanglerSpec,
    PayoffTable,
    TableError,
    exact_distribution,
    expected_payoff,
    final_state,
    haar_distributions,
    initial_state,
    monte_carlo_distribution,
    outcome_distribution,
    play,
)
from qpdgame.qmath import IDENTITY, SIGMA_X, SeededRng, basis_state, haar_sample, state_fidelity
from qpdgame.strategies import C, D, Q, HaarRandom, Mixed, Pure, StrategyError, ewl_unitary, mirror

DD = np.kron(D, D)


def entangler_oracle(gamma):
    return expm(1j * gamma * DD / 2)


def test_initial_state_maximal():
    expected = (basis_state("CC") + 1j * basis_state("DD")) / math.sqrt(2)
    np.testing.assert_allclose(initial_state(EntanglerSpec(math.pi / 2)), expected, atol=1e-15)


def test_initial_state_zero():
    np.testing.assert_array_equal(initial_state(EntanglerSpec(0.0)), basis_state("CC"))


@pytest.mark.parametrize("gamma", [math.pi / 4, 0.0, 0.3, 1.1, math.pi / 2])
def test_initial_state_matches_expm(gamma):
    oracle = entangler_oracle(gamma) @ basis_state("CC")
    np.testing.assert_allclose(initial_state(gamma), oracle, atol=1e-14)


def test_initial_state_pi_over_4_closed_form():
    psi = initial_state(math.pi / 4)
    assert psi[0] == pytest.approx(math.cos(math.pi / 8))
    assert psi[3] == pytest.approx(1j * math.sin(math.pi / 8))


def test_entangler_spec_range():
    with pytest.raises(ValueError):
        EntanglerSpec(2.0)
    with pytest.raises(ValueError):
        EntanglerSpec(-0.1)


def test_final_state_examples():
    assert state_fidelity(final_state(IDENTITY, IDENTITY), basis_state("CC")) == pytest.approx(1)
    assert state_fidelity(final_state(Q, 1j * SIGMA_X), basis_state("CD")) > 1 - 1e-12
    assert state_fidelity(final_state(D, D), basis_state("DD")) > 1 - 1e-12


@pytest.mark.parametrize("gamma", [0.0, 0.7, math.pi / 2])
def test_final_state_matches_kron_oracle(gamma):
    rng = SeededRng(2)
    j = entangler_oracle(gamma)
    for _ in range(20):
        a, b = haar_sample(rng), haar_sample(rng)
        oracle = j.conj().T @ np.kron(a, b) @ j @ basis_state("CC")
        np.testing.assert_allclose(final_state(a, b, gamma), oracle, atol=1e-14)


def test_outcome_distribution_examples():
    assert outcome_distribution(basis_state("CC")) == (1, 0, 0, 0)
    d = outcome_distribution(initial_state())
    np.testing.assert_allclose(d, [0.5, 0, 0, 0.5], atol=1e-15)
    np.testing.assert_allclose(outcome_distribution(np.full(4, 0.5)), [0.25] * 4)


def test_expected_payoff_examples():
    assert expected_payoff((1, 0, 0, 0)) == (3, 3)
    assert expected_payoff((0, 1, 0, 0)) == (0, 5)
    assert expected_payoff((0.25,) * 4) == (2.25, 2.25)


def test_payoff_table_validation():
    with pytest.raises(TableError):
        PayoffTable(3, 5, 1, 0)
    with pytest.raises(TableError):
        PayoffTable(10, 3, 1, 0, strict_iterated=True)
    PayoffTable(5, 3, 1, 0, strict_iterated=True)


def test_play_q_q():
    res = play(Pure(Q), Pure(Q))
    assert res.distribution == (1, 0, 0, 0)
    assert res.payoffs == (3, 3)


def test_play_classical_mixture_at_zero_entanglement():
    res = play(Mixed(((0.5, C), (0.5, D))), Pure(D), e=0.0)
    assert res.payoffs == pytest.approx((0.5, 3.0), abs=1e-15)


def test_play_haar_vs_any_pure_is_uniform():
    rng = SeededRng(9)
    for y in haar_sample(rng, 20):
        res = play(HaarRandom(), Pure(y))
        assert res.distribution == (0.25, 0.25, 0.25, 0.25)
        assert res.payoffs == (2.25, 2.25)


def test_play_with_monte_carlo():
    res = play(HaarRandom(), Pure(D), rng=SeededRng(1), samples=20_000)
    assert res.samples == 20_000
    assert max(abs(p - 0.25) for p in res.mc_distribution) < 0.02


def test_mixture_weight_errors():
    with pytest.raises(StrategyError):
        Mixed(((0.5, C), (0.4, D)))
    with pytest.raises(StrategyError):
        Mixed(((1.5, C), (-0.5, D)))
    with pytest.raises(StrategyError):
        Mixed(())


@pytest.mark.parametrize(
    "a, b, outcome, payoffs",
    [
        (C, C, 0, (3, 3)),
        (C, D, 1, (0, 5)),
        (D, C, 2, (5, 0)),
        (D, D, 3, (1, 1)),
    ],
)
@pytest.mark.parametrize("gamma", [0.0, math.pi / 2])
def test_classical_embedding(a, b, outcome, payoffs, gamma):
    res = play(Pure(a), Pure(b), e=gamma)
    assert res.distribution[outcome] == pytest.approx(1.0, abs=1e-10)
    assert res.payoffs == pytest.approx(payoffs, abs=1e-10)


def test_phase_invariance():
    rng = SeededRng(4)
    for _ in range(50):
        x, y = haar_sample(rng), haar_sample(rng)
        base = exact_distribution(Pure(x), Pure(y))
        np.testing.assert_allclose(exact_distribution(Pure(-x), Pure(y)), base, atol=1e-15)
        np.testing.assert_allclose(exact_distribution(Pure(x), Pure(-y)), base, atol=1e-15)


def test_mirror_consistency_through_protocol():
    for x in haar_sample(SeededRng(21), 1000):
        f = state_fidelity(final_state(x, IDENTITY), final_state(IDENTITY, mirror(x)))
        assert f > 1 - 1e-10


def test_mixture_linearity():
    rng = SeededRng(6)
    xs = haar_sample(rng, 4)
    w = np.array([0.1, 0.2, 0.3, 0.4])
    y = haar_sample(rng)
    mix = Mixed(tuple(zip(w, xs)))
    direct = sum(wk * exact_distribution(Pure(xk), Pure(y)) for wk, xk in zip(w, xs))
    np.testing.assert_allclose(exact_distribution(mix, Pure(y)), direct, atol=1e-12)


def test_norm_preserved_end_to_end():
    rng = SeededRng(8)
    for gamma in (0.0, 0.4, math.pi / 2):
        for _ in range(50):
            s = final_state(haar_sample(rng), haar_sample(rng), gamma)
            assert abs(np.linalg.norm(s) - 1) <= 1e-10


@pytest.mark.parametrize("gamma", [0.0, 0.6, 1.2])
@pytest.mark.parametrize("haar_role", ["A", "B"])
def test_haar_twirl_matches_monte_carlo(gamma, haar_role):
    # exact 1-design twirl vs sampled Haar average; 6-sigma binomial-style bound
    y = ewl_unitary(1.0, 0.3)
    exact = haar_distributions(y, haar_role, gamma)
    a, b = (HaarRandom(), Pure(y)) if haar_role == "A" else (Pure(y), HaarRandom())
    mc = monte_carlo_distribution(a, b, 200_000, SeededRng(17), gamma)
    assert np.max(np.abs(mc - exact)) < 6 * math.sqrt(0.25 / 200_000)
    assert exact.sum() == pytest.approx(1.0)


def test_haar_vs_haar_uniform_any_gamma():
    d = exact_distribution(HaarRandom(), HaarRandom(), 0.3)
    np.testing.assert_array_equal(d, [0.25] * 4)


def test_default_table_values():
    t = DEFAULT_TABLE
    assert (t.t, t.r, t.p, t.s) == (5, 3, 1, 0)
    assert t.quantum_equilibrium_payoff == 2.25
