"""Best responses, epsilon-Nash checks, grid scans, the Haar equilibrium and
payoff-table classification."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .protocol import (
    DEFAULT_TABLE,
    OutcomeDistribution,
    PayoffTable,
    _entangler,
    expected_payoff,
    exact_distribution,
    final_states,
    monte_carlo_distribution,
    outcome_probabilities,
    response_distributions,
)
from .qmath import IDENTITY, SeededRng
from .strategies import HaarRandom, Pure, Role, Strategy, counter_strategy, ewl_unitary

TWO_PI = 2 * math.pi
REFINE_TOL = 1e-9
TIE_TOL = 1e-12


class SpaceKind(enum.Enum):
    EWL_RESTRICTED = "ewl"
    FULL_SU2 = "full"


def full_su2(alpha, beta, delta) -> np.ndarray:
    """``[[e^{ia} cos b, e^{id} sin b], [-e^{-id} sin b, e^{-ia} cos b]]``."""
    alpha, beta, delta = np.broadcast_arrays(
        np.asarray(alpha, float), np.asarray(beta, float), np.asarray(delta, float)
    )
    c, s = np.cos(beta), np.sin(beta)
    out = np.empty(alpha.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * alpha) * c
    out[..., 0, 1] = np.exp(1j * delta) * s
    out[..., 1, 0] = -np.exp(-1j * delta) * s
    out[..., 1, 1] = np.exp(-1j * alpha) * c
    return out


@dataclass(frozen=True)
class StrategySpace:
    """A searchable move set with a uniform angle grid.

    ``EWL_RESTRICTED`` uses ``(theta, phi)`` on ``[0, pi] x [0, pi/2]`` with
    both ends included.  ``FULL_SU2`` uses ``(alpha, beta, delta)`` with
    ``alpha, delta`` on ``[0, 2 pi)`` (periodic) and ``beta`` on ``[0, pi/2]``.
    """

    kind: SpaceKind
    resolution: tuple

    def __post_init__(self):
        kind = SpaceKind(self.kind)
        res = tuple(int(n) for n in self.resolution)
        if len(res) != (2 if kind is SpaceKind.EWL_RESTRICTED else 3):
            raise ValueError(f"wrong number of resolution counts for {kind.value}")
        if any(n < 2 for n in res):
            raise ValueError("resolution counts must be >= 2")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "resolution", res)

    @classmethod
    def ewl(cls, n_theta: int = 181, n_phi: int = 91) -> "StrategySpace":
        return cls(SpaceKind.EWL_RESTRICTED, (n_theta, n_phi))

    @classmethod
    def full(cls, n_alpha: int = 10, n_beta: int = 10, n_delta: int = 10) -> "StrategySpace":
        return cls(SpaceKind.FULL_SU2, (n_alpha, n_beta, n_delta))

    @property
    def bounds(self):
        if self.kind is SpaceKind.EWL_RESTRICTED:
            return [(0.0, math.pi, False), (0.0, math.pi / 2, False)]
        return [(0.0, TWO_PI, True), (0.0, math.pi / 2, False), (0.0, TWO_PI, True)]

    def axes(self):
        out = []
        for (lo, hi, periodic), n in zip(self.bounds, self.resolution):
            out.append(np.linspace(lo, hi, n, endpoint=not periodic))
        return out

    def spacing(self) -> np.ndarray:
        return np.array(
            [
                (hi - lo) / (n if periodic else n - 1)
                for (lo, hi, periodic), n in zip(self.bounds, self.resolution)
            ]
        )

    def grid(self):
        """``(coords, moves)`` in lexicographic grid-index order."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=-1)
        return coords, self.moves(coords)

    def moves(self, coords) -> np.ndarray:
        coords = np.asarray(coords, float)
        if self.kind is SpaceKind.EWL_RESTRICTED:
            return ewl_unitary(coords[..., 0], coords[..., 1])
        return full_su2(coords[..., 0], coords[..., 1], coords[..., 2])

    def clip(self, coords) -> np.ndarray:
        coords = np.array(coords, float)
        for i, (lo, hi, periodic) in enumerate(self.bounds):
            if periodic:
                coords[..., i] = np.mod(coords[..., i] - lo, hi - lo) + lo
            else:
                coords[..., i] = np.clip(coords[..., i], lo, hi)
        return coords

    def describe(self) -> dict:
        names = ("theta", "phi") if self.kind is SpaceKind.EWL_RESTRICTED else (
            "alpha", "beta", "delta")
        return {"kind": self.kind.value, "resolution": dict(zip(names, self.resolution))}


@dataclass(frozen=True)
class Profile:
    a: Strategy
    b: Strategy


class BestResponse(NamedTuple):
    move: np.ndarray
    payoff: float
    method: str
    coords: Optional[np.ndarray] = None


def _responder_payoffs(opponent, moves, responder: Role, table, e) -> np.ndarray:
    probs = response_distributions(opponent, moves, responder.value, e)
    weights = table.payoff_a if responder is Role.A else table.payoff_b
    return probs @ weights


def _refine(f, x0, fx0, space: StrategySpace, max_sweeps: int = 10_000):
    """Coordinate pattern search from ``x0`` with step halving."""
    x, fx = np.array(x0, float), float(fx0)
    step = space.spacing() / 2
    k = len(x)
    for _ in range(max_sweeps):
        cands = np.repeat(x[None, :], 2 * k, axis=0)
        for i in range(k):
            cands[2 * i, i] += step[i]
            cands[2 * i + 1, i] -= step[i]
        cands = space.clip(cands)
        vals = f(cands)
        j = int(np.argmax(vals))
        if vals[j] - fx >= REFINE_TOL:
            x, fx = cands[j], float(vals[j])
            continue
        if vals[j] > fx:
            x, fx = cands[j], float(vals[j])
        step = step / 2
        if np.max(step) < REFINE_TOL:
            break
    return x, fx


def best_response(
    opponent: Strategy,
    responder: Role,
    space: StrategySpace,
    table: PayoffTable = DEFAULT_TABLE,
    e=None,
    *,
    refine: bool = True,
    analytic: bool = True,
) -> BestResponse:
    """Best move for ``responder`` in ``space`` against ``opponent``.

    Full SU(2) at maximal entanglement has closed forms against pure
    opponents (the counter-move) and against Haar-random ones (every move
    ties).  Everything else is a grid search plus pattern-search refinement,
    so the payoff is a lower bound on the supremum.
    """
    responder = Role(responder)
    e = _entangler(e)
    if analytic and space.kind is SpaceKind.FULL_SU2 and e.is_maximal:
        if isinstance(opponent, Pure):
            move = counter_strategy(opponent.move, responder)
            pay = float(_responder_payoffs(opponent, move, responder, table, e))
            return BestResponse(move, pay, "analytic-counter")
        if isinstance(opponent, HaarRandom):
            pay = float(_responder_payoffs(opponent, IDENTITY, responder, table, e))
            return BestResponse(IDENTITY.copy(), pay, "analytic-haar-tie")

    coords, moves = space.grid()
    pays = _responder_payoffs(opponent, moves, responder, table, e)
    i = int(np.argmax(pays))
    x, fx = coords[i], float(pays[i])
    method = "grid"
    if refine:
        f = lambda c: _responder_payoffs(opponent, space.moves(c), responder, table, e)
        x, fx = _refine(f, x, fx, space)
        method = "grid+refine"
    return BestResponse(space.moves(x), fx, method, x)


@dataclass
class EquilibriumVerdict:
    is_epsilon_nash: bool
    best_gain_a: float
    best_gain_b: float
    payoffs: tuple
    witness_a: BestResponse
    witness_b: BestResponse
    epsilon: float
    space: dict = field(default_factory=dict)


def is_epsilon_nash(
    profile: Profile,
    space: StrategySpace,
    epsilon: float = 1e-6,
    table: PayoffTable = DEFAULT_TABLE,
    e=None,
    *,
    deviation_space: Optional[StrategySpace] = None,
) -> EquilibriumVerdict:
    """Check that neither player gains more than ``epsilon`` by deviating.

    Deviations are pure moves searched in ``deviation_space`` (defaults to
    ``space``); a best pure reply weakly dominates any mixed one.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    e = _entangler(e)
    dev = deviation_space or space
    probs = exact_distribution(profile.a, profile.b, e)
    pay_a, pay_b = expected_payoff(probs, table)
    br_a = best_response(profile.b, Role.A, dev, table, e)
    br_b = best_response(profile.a, Role.B, dev, table, e)
    gain_a = max(0.0, br_a.payoff - pay_a)
    gain_b = max(0.0, br_b.payoff - pay_b)
    return EquilibriumVerdict(
        is_epsilon_nash=max(gain_a, gain_b) <= epsilon,
        best_gain_a=gain_a,
        best_gain_b=gain_b,
        payoffs=(pay_a, pay_b),
        witness_a=br_a,
        witness_b=br_b,
        epsilon=epsilon,
        space=dev.describe(),
    )


class ScanHit(NamedTuple):
    i: int
    j: int
    a: np.ndarray
    b: np.ndarray
    payoff_a: float
    payoff_b: float
    gain_a: float
    gain_b: float

    @property
    def profile(self) -> Profile:
        return Profile(Pure(self.a), Pure(self.b))


def payoff_matrices(moves, table: PayoffTable = DEFAULT_TABLE, e=None, block: int = 128):
    """``(pay_a, pay_b)`` with ``[i, j]`` for A playing ``moves[i]``, B ``moves[j]``."""
    e = _entangler(e)
    n = len(moves)
    pay_a = np.empty((n, n))
    pay_b = np.empty((n, n))
    for start in range(0, n, block):
        rows = moves[start:start + block, None]
        probs = outcome_probabilities(final_states(rows, moves[None, :], e))
        pay_a[start:start + block] = probs @ table.payoff_a
        pay_b[start:start + block] = probs @ table.payoff_b
    return pay_a, pay_b


def pure_nash_scan(
    space: StrategySpace,
    epsilon: float = 0.01,
    table: PayoffTable = DEFAULT_TABLE,
    e=None,
) -> list[ScanHit]:
    """All grid profiles whose best on-grid unilateral gain is at most ``epsilon``.

    Ordered lexicographically by ``(i, j)`` grid indices.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    _, moves = space.grid()
    pay_a, pay_b = payoff_matrices(moves, table, e)
    gain_a = pay_a.max(axis=0, keepdims=True) - pay_a
    gain_b = pay_b.max(axis=1, keepdims=True) - pay_b
    ok = np.maximum(gain_a, gain_b) <= epsilon
    return [
        ScanHit(int(i), int(j), moves[i], moves[j], float(pay_a[i, j]),
                float(pay_b[i, j]), float(gain_a[i, j]), float(gain_b[i, j]))
        for i, j in zip(*np.nonzero(ok))
    ]


def counter_gains(a_moves, b_moves, table: PayoffTable = DEFAULT_TABLE):
    """Gains from each player's analytic counter for pure profiles (maximal J).

    Returns ``(gain_a, gain_b)`` arrays; the counter payoffs are evaluated,
    not assumed.
    """
    a_moves = np.asarray(a_moves, complex)
    b_moves = np.asarray(b_moves, complex)
    base = outcome_probabilities(final_states(a_moves, b_moves))
    ca = counter_strategy(b_moves, Role.A)
    cb = counter_strategy(a_moves, Role.B)
    dev_a = outcome_probabilities(final_states(ca, b_moves)) @ table.payoff_a
    dev_b = outcome_probabilities(final_states(a_moves, cb)) @ table.payoff_b
    return dev_a - base @ table.payoff_a, dev_b - base @ table.payoff_b


@dataclass
class HaarReport:
    analytic: OutcomeDistribution
    monte_carlo: Optional[OutcomeDistribution]
    max_mc_deviation: Optional[float]
    expected_payoff: tuple
    max_deviation_gain: float
    samples: int
    seed: int


def haar_equilibrium_check(
    b_move: Strategy,
    samples: int = 100_000,
    rng: Optional[SeededRng] = None,
    table: PayoffTable = DEFAULT_TABLE,
    e=None,
    space: Optional[StrategySpace] = None,
) -> HaarReport:
    """A plays Haar-random, B plays ``b_move``; compare exact and sampled odds.

    ``max_deviation_gain`` is how much B could gain by switching to its best
    move in ``space`` (full SU(2) by default).
    """
    e = _entangler(e)
    if isinstance(b_move, np.ndarray):
        b_move = Pure(b_move)
    rng = rng if rng is not None else SeededRng(0)
    haar = HaarRandom()
    analytic = exact_distribution(haar, b_move, e)
    pay = expected_payoff(analytic, table)
    mc = dev = None
    if samples:
        mc_arr = monte_carlo_distribution(haar, b_move, samples, rng, e)
        mc = OutcomeDistribution.from_array(mc_arr)
        dev = float(np.max(np.abs(mc_arr - analytic)))
    br = best_response(haar, Role.B, space or StrategySpace.full(), table, e)
    return HaarReport(
        analytic=OutcomeDistribution.from_array(analytic),
        monte_carlo=mc,
        max_mc_deviation=dev,
        expected_payoff=pay,
        max_deviation_gain=max(0.0, br.payoff - pay[1]),
        samples=samples,
        seed=rng.seed,
    )


def haar_convergence(b_move: Strategy, sizes, rng: SeededRng, e=None):
    """Rows ``(n, distribution, max |MC - exact|)`` for each sample size."""
    if isinstance(b_move, np.ndarray):
        b_move = Pure(b_move)
    haar = HaarRandom()
    exact = exact_distribution(haar, b_move, e)
    rows = []
    for k, n in enumerate(sizes):
        mc = monte_carlo_distribution(haar, b_move, int(n), rng.spawn(k), e)
        rows.append((int(n), mc, float(np.max(np.abs(mc - exact)))))
    return rows


class TableClassification(enum.Enum):
    BELOW_CLASSICAL_EQUILIBRIUM = "BelowClassicalEquilibrium"
    BETWEEN_EQUILIBRIUM_AND_COOPERATIVE = "BetweenEquilibriumAndCooperative"
    ABOVE_COOPERATIVE = "AboveCooperative"


class BoundaryTieError(ValueError):
    """The quantum equilibrium payoff coincides with ``p`` or ``r``."""


def classify_table(table: PayoffTable, tol: float = TIE_TOL) -> TableClassification:
    """Place ``(t + r + p + s) / 4`` relative to the punishment and reward payoffs."""
    if not isinstance(table, PayoffTable):
        table = PayoffTable(*table)
    q = table.quantum_equilibrium_payoff
    if abs(q - table.p) <= tol or abs(q - table.r) <= tol:
        raise BoundaryTieError(
            f"quantum payoff {q:g} ties with p={table.p:g} or r={table.r:g}"
        )
    if q < table.p:
        return TableClassification.BELOW_CLASSICAL_EQUILIBRIUM
    if q < table.r:
        return TableClassification.BETWEEN_EQUILIBRIUM_AND_COOPERATIVE
    return TableClassification.ABOVE_COOPERATIVE


def random_table(rng: SeededRng, strict_iterated: bool = False, high: float = 100.0,
                 min_gap: float = 1e-9) -> PayoffTable:
    """Uniform table from four sorted draws on ``[0, high]`` (rejection sampling)."""
    while True:
        s, p, r, t = np.sort(rng.uniform(0.0, high, 4))
        if min(p - s, r - p, t - r) <= min_gap:
            continue
        if strict_iterated and not 2 * r > t + s:
            continue
        return PayoffTable(float(t), float(r), float(p), float(s), strict_iterated)
