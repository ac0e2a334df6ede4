"""Quantum Prisoner's Dilemma over full SU(2): protocol simulation, counter
moves, equilibrium search and the Haar-random mixed equilibrium."""
from .qmath import (
    SU2Error,
    SeededRng,
    StateError,
    dagger,
    equal_up_to_sign,
    haar_sample,
    is_su2,
    mat_mul,
    state_fidelity,
    tensor_apply,
)
from .strategies import (
    C,
    D,
    Q,
    EwlParams,
    HaarRandom,
    Mixed,
    NamedStrategy,
    Pure,
    Role,
    StrategyError,
    counter_strategy,
    ewl_membership,
    ewl_unitary,
    mirror,
)
from .protocol import (
    DEFAULT_TABLE,
    EntanglerSpec,
    GameResult,
    OutcomeDistribution,
    PayoffTable,
    TableError,
    expected_payoff,
    final_state,
    initial_state,
    outcome_distribution,
    play,
)
from .parsing import ParseError, parse_move, parse_number, parse_strategy
from .equilibrium import (
    BoundaryTieError,
    Profile,
    StrategySpace,
    TableClassification,
    best_response,
    classify_table,
    haar_equilibrium_check,
    is_epsilon_nash,
    pure_nash_scan,
)

__version__ = "0.1.0"
