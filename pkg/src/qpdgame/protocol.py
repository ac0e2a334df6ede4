"""Entangle, play local moves, disentangle, measure, pay."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .qmath import (
    STRUCT_TOL,
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    SeededRng,
    as_state,
    as_su2,
    haar_sample,
)
from .strategies import D, HaarRandom, Mixed, Pure, Strategy, StrategyError

MAX_GAMMA = math.pi / 2

# Unitary 1-design: averaging a quadratic quantity over these equals the Haar average.
_PAULI_TWIRL = np.stack([IDENTITY, 1j * SIGMA_X, 1j * SIGMA_Y, 1j * SIGMA_Z])


class TableError(ValueError):
    """Payoff values do not define a Prisoner's Dilemma."""


@dataclass(frozen=True)
class EntanglerSpec:
    """Entangling gate ``J(gamma) = exp(i gamma D(x)D / 2)``; pi/2 is maximal."""

    gamma: float = MAX_GAMMA

    def __post_init__(self):
        g = float(self.gamma)
        if not math.isfinite(g) or not (-1e-12 <= g <= MAX_GAMMA + 1e-12):
            raise ValueError(f"gamma={g!r} outside [0, pi/2]")
        object.__setattr__(self, "gamma", min(max(g, 0.0), MAX_GAMMA))

    @property
    def is_maximal(self) -> bool:
        return abs(self.gamma - MAX_GAMMA) <= 1e-12


MAXIMAL = EntanglerSpec()


def _entangler(e) -> EntanglerSpec:
    if e is None:
        return MAXIMAL
    if isinstance(e, EntanglerSpec):
        return e
    return EntanglerSpec(e)


@dataclass(frozen=True)
class PayoffTable:
    """Prisoner's Dilemma payoffs ``t > r > p > s``.

    Outcome map as ``(A, B)``: CC -> (r, r), CD -> (s, t), DC -> (t, s),
    DD -> (p, p).
    """

    t: float = 5.0
    r: float = 3.0
    p: float = 1.0
    s: float = 0.0
    strict_iterated: bool = False

    def __post_init__(self):
        vals = [float(v) for v in (self.t, self.r, self.p, self.s)]
        if not all(math.isfinite(v) for v in vals):
            raise TableError("payoffs must be finite")
        t, r, p, s = vals
        if not (t > r > p > s):
            raise TableError(f"need t > r > p > s, got {t:g}, {r:g}, {p:g}, {s:g}")
        if self.strict_iterated and not (2 * r > t + s):
            raise TableError(f"need 2r > t + s, got 2*{r:g} <= {t:g} + {s:g}")
        for name, v in zip("trps", vals):
            object.__setattr__(self, name, v)

    @property
    def payoff_a(self) -> np.ndarray:
        return np.array([self.r, self.s, self.t, self.p])

    @property
    def payoff_b(self) -> np.ndarray:
        return np.array([self.r, self.t, self.s, self.p])

    @property
    def quantum_equilibrium_payoff(self) -> float:
        return (self.t + self.r + self.p + self.s) / 4.0


DEFAULT_TABLE = PayoffTable()


class OutcomeDistribution(NamedTuple):
    p_cc: float
    p_cd: float
    p_dc: float
    p_dd: float

    @classmethod
    def from_array(cls, probs) -> "OutcomeDistribution":
        probs = np.asarray(probs, dtype=float)
        if probs.shape != (4,) or np.any(probs < -STRUCT_TOL):
            raise ValueError("invalid outcome distribution")
        if abs(probs.sum() - 1.0) > STRUCT_TOL:
            raise ValueError(f"probabilities sum to {probs.sum():.12g}")
        return cls(*(float(p) for p in probs))


UNIFORM = OutcomeDistribution(0.25, 0.25, 0.25, 0.25)


def initial_state(e=None) -> np.ndarray:
    """``J(gamma)|CC> = cos(gamma/2)|CC> + i sin(gamma/2)|DD>``.

    Closed form of the exponential, valid because ``(D (x) D)^2 = I``.
    """
    g = _entangler(e).gamma
    psi = np.zeros(4, dtype=complex)
    psi[0] = math.cos(g / 2)
    psi[3] = 1j * math.sin(g / 2)
    return psi


def final_states(a, b, e=None) -> np.ndarray:
    """Vectorized ``J^dagger (a (x) b) J |CC>`` over broadcast stacks of moves.

    Works on amplitude matrices: ``(a (x) b)`` is ``M -> a M b^T`` and
    ``D (x) D`` is ``M -> D M D^T``.  No SU(2) validation; see
    :func:`final_state` for the checked single-profile version.
    """
    g = _entangler(e).gamma
    c, s = math.cos(g / 2), math.sin(g / 2)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    # a diag(c, i s) b^T
    m = a * np.array([c, 1j * s])[..., None, :] @ np.swapaxes(b, -1, -2)
    dd = D @ m @ D.T
    out = c * m - 1j * s * dd
    return out.reshape(out.shape[:-2] + (4,))


def final_state(a, b, e=None) -> np.ndarray:
    return final_states(as_su2(a), as_su2(b), e)


def outcome_probabilities(states) -> np.ndarray:
    """``|amplitude|^2`` along the last axis (batched)."""
    return np.abs(np.asarray(states)) ** 2


def outcome_distribution(s) -> OutcomeDistribution:
    s = as_state(s)
    return OutcomeDistribution.from_array(outcome_probabilities(s))


def expected_payoff(d, table: PayoffTable = DEFAULT_TABLE) -> tuple[float, float]:
    """``(A's payoff, B's payoff)`` under outcome distribution ``d``."""
    probs = np.asarray(d, dtype=float)
    return float(probs @ table.payoff_a), float(probs @ table.payoff_b)


def haar_distributions(moves, haar_role: str, e=None) -> np.ndarray:
    """Exact outcome distributions when one side plays Haar-random.

    ``moves`` is a stack of the other player's pure moves.  A one-sided Haar
    twirl only needs a unitary 1-design, so the average over the four Pauli
    moves is exact.  For maximal entanglement the twirled state is maximally
    mixed and the uniform distribution is returned directly.
    """
    e = _entangler(e)
    moves = np.asarray(moves, dtype=complex)
    shape = moves.shape[:-2] + (4,)
    if e.is_maximal:
        return np.full(shape, 0.25)
    twirl = _PAULI_TWIRL.reshape((4,) + (1,) * (moves.ndim - 2) + (2, 2))
    if haar_role == "A":
        probs = outcome_probabilities(final_states(twirl, moves, e))
    else:
        probs = outcome_probabilities(final_states(moves, twirl, e))
    return probs.mean(axis=0)


def response_distributions(opponent: Strategy, moves, responder: str, e=None):
    """Distributions for a stack of responder ``moves`` against ``opponent``."""
    moves = np.asarray(moves, dtype=complex)
    if isinstance(opponent, HaarRandom):
        return haar_distributions(moves, "A" if responder == "B" else "B", e)
    if isinstance(opponent, Pure):
        opp = opponent.move
        if responder == "B":
            return outcome_probabilities(final_states(opp, moves, e))
        return outcome_probabilities(final_states(moves, opp, e))
    if isinstance(opponent, Mixed):
        total = 0.0
        for w, opp in opponent.components:
            total = total + w * response_distributions(Pure(opp), moves, responder, e)
        return total
    raise StrategyError(f"unknown strategy {opponent!r}")


@dataclass
class GameResult:
    distribution: OutcomeDistribution
    payoffs: tuple[float, float]
    mc_distribution: Optional[OutcomeDistribution] = None
    mc_payoffs: Optional[tuple[float, float]] = None
    samples: int = 0
    extra: dict = field(default_factory=dict)


def _support(strategy: Strategy):
    if isinstance(strategy, Pure):
        return [(1.0, strategy.move)]
    if isinstance(strategy, Mixed):
        return list(strategy.components)
    return None


def exact_distribution(a: Strategy, b: Strategy, e=None) -> np.ndarray:
    e = _entangler(e)
    sa, sb = _support(a), _support(b)
    if sa is None and sb is None:
        return np.full(4, 0.25)
    if sa is None:
        return sum(w * haar_distributions(u, "A", e) for w, u in sb)
    if sb is None:
        return sum(w * haar_distributions(u, "B", e) for w, u in sa)
    total = np.zeros(4)
    for wa, ua in sa:
        for wb, ub in sb:
            total = total + wa * wb * outcome_probabilities(final_states(ua, ub, e))
    return total


def _sample_moves(strategy: Strategy, n: int, rng: SeededRng) -> np.ndarray:
    if isinstance(strategy, HaarRandom):
        return haar_sample(rng, n)
    if isinstance(strategy, Pure):
        return np.broadcast_to(strategy.move, (n, 2, 2))
    idx = np.searchsorted(np.cumsum(strategy.weights), rng.uniform(size=n), side="right")
    idx = np.minimum(idx, len(strategy.components) - 1)
    return strategy.moves[idx]


def monte_carlo_distribution(
    a: Strategy, b: Strategy, samples: int, rng: SeededRng, e=None, chunk: int = 50_000
) -> np.ndarray:
    """Sample-average of exact per-profile distributions.

    Each chunk draws from its own child stream so the result does not depend
    on how the work is split beyond the fixed ``chunk`` size.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    total = np.zeros(4)
    for k, start in enumerate(range(0, samples, chunk)):
        n = min(chunk, samples - start)
        sub = rng.spawn(k)
        ua = _sample_moves(a, n, sub)
        ub = _sample_moves(b, n, sub)
        total += outcome_probabilities(final_states(ua, ub, e)).sum(axis=0)
    return total / samples


def play(
    a: Strategy,
    b: Strategy,
    table: PayoffTable = DEFAULT_TABLE,
    e=None,
    rng: Optional[SeededRng] = None,
    samples: int = 0,
) -> GameResult:
    """Play one strategy profile; exact, plus Monte Carlo when ``samples > 0``."""
    e = _entangler(e)
    probs = exact_distribution(a, b, e)
    dist = OutcomeDistribution.from_array(probs)
    result = GameResult(dist, expected_payoff(probs, table))
    if samples:
        rng = rng if rng is not None else SeededRng(0)
        mc = monte_carlo_distribution(a, b, samples, rng, e)
        result.mc_distribution = OutcomeDistribution.from_array(mc)
        result.mc_payoffs = expected_payoff(mc, table)
        result.samples = samples
    return result
