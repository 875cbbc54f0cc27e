"""
Runtime against dataset size
============================

Replicates a 500-sequence base 1, 2, 4 and 8 times, assigning every copy
a random period in 1..5, and times the one-phase miner on each.
"""

import time

from oshusp import GeneratorConfig, generate_scaled, mine_osums_plus, random_database

base = random_database(500, 40, max_itemsets=6, max_itemset_size=4, n_periods=5, seed=1)
prev = None
for scale in (1, 2, 4, 8):
    db = generate_scaled(GeneratorConfig(base, scale, periods=5, seed=7))
    t0 = time.perf_counter()
    r = mine_osums_plus(db, "0.03")
    dt = time.perf_counter() - t0
    step = "" if prev is None else f"  x{dt / prev:.2f} vs previous"
    print(f"scale {scale}: {len(db):5d} sequences, {len(r.patterns):3d} patterns, {dt:.2f}s{step}")
    prev = dt
