"""
Every pure move has a perfect counter
=====================================

On the maximally entangled state a move by A can be undone by B (the mirror
map), so B can always steer the game into CD.  The same holds for A.
"""

import numpy as np

from qpdgame import (
    D,
    Q,
    Role,
    SeededRng,
    counter_strategy,
    final_state,
    haar_sample,
    mirror,
    outcome_distribution,
)
from qpdgame.equilibrium import counter_gains

for name, x in (("Q", Q), ("D", D)):
    print(f"mirror({name}) =\n{mirror(x).round(12)}")
    print(f"B's counter to {name} =\n{counter_strategy(x, Role.B).round(12)}")

rng = SeededRng(1)
x = haar_sample(rng)
y = counter_strategy(x, Role.B)
print("\nrandom X against its counter:", np.round(outcome_distribution(final_state(x, y)), 12))

# For any pure profile somebody gains at least 2 by switching to the counter.
ga, gb = counter_gains(haar_sample(rng, 10_000), haar_sample(rng, 10_000))
print("smallest best deviation gain over 10^4 random profiles:", np.maximum(ga, gb).min())
