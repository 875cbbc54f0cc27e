"""
Pruning ablation on a synthetic sample
======================================

Builds a 500-sequence random base, keeps the first 300 q-sequences and
switches each pruning strategy off in turn. The output set never changes;
the candidate count does.
"""

from oshusp import mine_osums, mine_osums_plus, random_database
from oshusp.ingest import head

base = random_database(500, 40, max_itemsets=6, max_itemset_size=4, n_periods=5, seed=1)
sample = head(base, 300)
xi = "0.03"

rows = []
for name, miner, flags in [("osums", mine_osums, ("ldp", "lwp", "arc")),
                           ("osums-plus", mine_osums_plus, ("gdp", "gwp"))]:
    full = miner(sample, xi)
    rows.append((name, "all on", full))
    for f in flags:
        r = miner(sample, xi, **{f: False})
        assert r.result_set() == full.result_set()
        rows.append((name, f"no {f}", r))

print(f"{'algo':11s}{'variant':9s}{'patterns':>9s}{'candidates':>11s}{'ms':>9s}")
for name, variant, r in rows:
    print(f"{name:11s}{variant:9s}{len(r.patterns):9d}{r.candidates_generated:11d}"
          f"{r.wall_time * 1000:9.1f}")
