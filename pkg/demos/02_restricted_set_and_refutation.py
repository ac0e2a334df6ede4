"""
Q is an equilibrium only inside the two-angle family
====================================================

Within the family ``U(theta, phi)`` nobody can beat ``Q = i sigma_z``, but
the family is not closed under products and once full SU(2) is allowed the
move ``i sigma_x`` takes B from 3 to 5.
"""

import math

from qpdgame import (
    Profile,
    Pure,
    Q,
    Role,
    StrategySpace,
    best_response,
    ewl_membership,
    ewl_unitary,
    is_epsilon_nash,
    mat_mul,
    parse_move,
    play,
    pure_nash_scan,
)

print("(Q, Q) payoffs:", play(Pure(Q), Pure(Q)).payoffs)

# Best reply to Q inside the family: grid of 181 x 91 plus refinement.
br = best_response(Pure(Q), Role.B, StrategySpace.ewl(181, 91))
print("best restricted reply to Q pays", br.payoff)

# The family is not closed: U(0, pi/2) U(pi, 0) = i sigma_x lies outside.
prod = mat_mul(ewl_unitary(0, math.pi / 2), ewl_unitary(math.pi, 0))
print("U(0,pi/2) U(pi,0) =\n", prod.round(12))
print("in the family?", ewl_membership(prod) is not None)

# Over full SU(2) the profile (Q, Q) is refuted.
print("i sigma_x against Q:", play(Pure(Q), Pure(parse_move("sx"))).payoffs)
v = is_epsilon_nash(Profile(Pure(Q), Pure(Q)), StrategySpace.full(), 0.01)
print("epsilon-Nash over SU(2)?", v.is_epsilon_nash, "gains:", v.best_gain_a, v.best_gain_b)

# Grid scans: (Q, Q) is the only restricted equilibrium on a 10-degree grid,
# and no pure profile survives over full SU(2).
hits = pure_nash_scan(StrategySpace.ewl(19, 10), 0.01)
print("restricted-grid equilibria:", [(h.i, h.j) for h in hits])
print("full-grid equilibria at eps=0.5:", pure_nash_scan(StrategySpace.full(), 0.5))
