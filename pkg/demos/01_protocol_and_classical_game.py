"""
Playing the entangled Prisoner's Dilemma
========================================

Prepare ``J|CC>``, let each player act on their own qubit, undo the
entangler and measure.  With moves restricted to C (identity) and D the
classical payoff table comes back unchanged.
"""

import math

import numpy as np

from qpdgame import C, D, DEFAULT_TABLE, Mixed, Pure, initial_state, play

###############################################################################
# The maximally entangled starting state is (|CC> + i|DD>)/sqrt(2).
print("J|CC> =", np.round(initial_state(), 6))

###############################################################################
# Classical moves reproduce the classical table for any entanglement.
for gamma in (0.0, math.pi / 2):
    print(f"\ngamma = {gamma:.4f}")
    for name_a, a in (("C", C), ("D", D)):
        for name_b, b in (("C", C), ("D", D)):
            res = play(Pure(a), Pure(b), DEFAULT_TABLE, gamma)
            print(f"  ({name_a},{name_b}) -> payoffs {res.payoffs}")

###############################################################################
# At gamma = 0 the game is the classical one, so mixtures behave like
# ordinary mixed strategies.
res = play(Mixed(((0.5, C), (0.5, D))), Pure(D), e=0.0)
print("\nhalf-C/half-D against D at gamma=0:", res.payoffs)
