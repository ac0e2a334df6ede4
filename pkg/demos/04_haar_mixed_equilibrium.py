"""
The Haar-random mixed equilibrium
=================================

If A picks a move uniformly from SU(2), every outcome has probability 1/4
no matter what B does, so both playing Haar-random is an equilibrium with
payoff (t + r + p + s) / 4.
"""

import numpy as np

from qpdgame import D, Pure, Q, SeededRng, ewl_unitary, haar_equilibrium_check
from qpdgame.equilibrium import haar_convergence

for name, y in (("C", np.eye(2)), ("Q", Q), ("D", D)):
    rep = haar_equilibrium_check(Pure(y), samples=0)
    print(f"B plays {name}: analytic {rep.analytic}, payoff {rep.expected_payoff}")

rep = haar_equilibrium_check(Pure(ewl_unitary(1.0, 0.3)), 100_000, SeededRng(42))
print("\nMonte Carlo with 1e5 samples:", np.round(rep.monte_carlo, 5))
print("max |MC - 1/4| =", rep.max_mc_deviation)
print("best deviation gain for B:", rep.max_deviation_gain)

print("\nsamples  max deviation  deviation*sqrt(N)")
for n, _, dev in haar_convergence(Pure(D), [10**3, 10**4, 10**5, 10**6], SeededRng(0)):
    print(f"{n:>7}  {dev:.6f}       {dev * np.sqrt(n):.3f}")
