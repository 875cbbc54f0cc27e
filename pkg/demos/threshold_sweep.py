"""
Pattern count and memory against the threshold
===============================================

Sweeps the minimum ratio on a synthetic database and prints the pattern
count and the peak live-byte counter of both miners. Pattern counts fall
as the threshold rises; the two-phase miner's candidate tree makes its
peak grow faster once many patterns are promising.
"""

import numpy as np

from oshusp import mine_osums, mine_osums_plus, random_database

db = random_database(500, 40, max_itemsets=6, max_itemset_size=4, n_periods=5, seed=2)
xis = np.round(np.linspace(0.025, 0.06, 8), 4)

print(f"{'xi':>7s}{'patterns':>9s}{'osums B':>10s}{'plus B':>10s}")
for xi in xis:
    a = mine_osums(db, float(xi))
    b = mine_osums_plus(db, float(xi))
    assert a.result_set() == b.result_set()
    print(f"{xi:7.4f}{len(b.patterns):9d}{a.peak_live_bytes:10d}{b.peak_live_bytes:10d}")
