"""
Where does the quantum payoff land?
===================================

The Haar equilibrium pays the plain average of the four table entries.
Depending on the table this is below the classical defect payoff, between
defect and cooperate, or above mutual cooperation.
"""

from qpdgame import PayoffTable, SeededRng, classify_table
from qpdgame.equilibrium import TableClassification, random_table

for t in [(5, 3, 1, 0), (12, 11, 10, 0), (11, 3, 2, 0)]:
    table = PayoffTable(*t)
    print(t, table.quantum_equilibrium_payoff, classify_table(table).value)

# Requiring 2r > t + s (as in iterated play) rules out the "above" case.
rng = SeededRng(3)
counts = {c: 0 for c in TableClassification}
for _ in range(10_000):
    counts[classify_table(random_table(rng, strict_iterated=True))] += 1
print({c.value: n for c, n in counts.items()})
