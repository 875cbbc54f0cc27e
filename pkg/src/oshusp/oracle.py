"""Exhaustive reference miner.

Works directly on the q-sequences with naive instance enumeration and
shares no code with the matrices or utility chains, so agreement with the
miners means something. Only meant for small databases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .model import (OT_INTERSECTION, MinedPattern, Pattern, QSequence, TemporalDatabase,
                    ThresholdConfig, check_ot_mode)

DEFAULT_BUDGET = 200


class OracleBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    xi: ThresholdConfig
    max_pattern_length: int | None = None
    budget: int = DEFAULT_BUDGET
    ot_mode: str = OT_INTERSECTION

    def __post_init__(self):
        object.__setattr__(self, "xi", ThresholdConfig(self.xi))
        check_ot_mode(self.ot_mode)
        if self.max_pattern_length is not None and self.max_pattern_length < 1:
            raise ValueError("max_pattern_length must be >= 1")


def _check_budget(db: TemporalDatabase, budget: int):
    longest = max((len(s) for s in db.sequences), default=0)
    size = len(db.items) * longest
    if size > budget:
        raise OracleBudgetError(
            f"distinct items x longest q-sequence = {len(db.items)} x {longest} = {size} "
            f"exceeds the oracle budget {budget}; shrink the input or raise the budget")


@lru_cache(maxsize=4096)
def _itemsets(s: QSequence) -> list[dict[int, int]]:
    return [{qi.item: qi.quantity for qi in w} for w in s.itemsets]


def contains(r: Pattern, s: QSequence) -> bool:
    """Greedy leftmost subsequence match."""
    k = 0
    sets = _itemsets(s)
    for w in r.itemsets:
        while k < len(sets) and not all(i in sets[k] for i in w):
            k += 1
        if k == len(sets):
            return False
        k += 1
    return True


def instance_utilities(r: Pattern, s: QSequence, utilities) -> dict[int, int]:
    """Extension position -> max utility over instances ending there (by enumeration)."""
    sets = _itemsets(s)
    out: dict[int, int] = {}
    for pos in combinations(range(len(sets)), r.size):
        if all(i in sets[k] for w, k in zip(r.itemsets, pos) for i in w):
            u = sum(sets[k][i] * utilities[i] for w, k in zip(r.itemsets, pos) for i in w)
            p = pos[-1] + 1
            if u > out.get(p, -1):
                out[p] = u
    return out


def utility_by_enumeration(r: Pattern, s: QSequence, utilities) -> int:
    return max(instance_utilities(r, s, utilities).values(), default=0)


def utility_by_recursion(r: Pattern, s: QSequence, utilities) -> int:
    """Same quantity via memoized recursion over (pattern itemset, sequence itemset)."""
    sets = _itemsets(s)
    NONE = -1

    @lru_cache(maxsize=None)
    def best(j: int, k: int) -> int:
        if j == r.size:
            return 0
        if k == len(sets):
            return NONE
        skip = best(j, k + 1)
        w = r.itemsets[j]
        if all(i in sets[k] for i in w):
            rest = best(j + 1, k + 1)
            if rest != NONE:
                take = rest + sum(sets[k][i] * utilities[i] for i in w)
                return max(skip, take)
        return skip

    v = best(0, 0)
    return 0 if v == NONE else v


def sequence_utility(s: QSequence, utilities) -> int:
    return sum(qi.quantity * utilities[qi.item] for w in s.itemsets for qi in w)


def rest_after(s: QSequence, position: int, item: int, utilities) -> int:
    """Utility of every q-item after ``item`` in itemset ``position`` (global order)."""
    total = 0
    for k, w in enumerate(s.itemsets, start=1):
        for qi in w:
            if (k, qi.item) > (position, item):
                total += qi.quantity * utilities[qi.item]
    return total


def peu(r: Pattern, s: QSequence, utilities) -> int:
    """Prefix-extension utility straight from its definition (empty pattern: whole sequence)."""
    if not r.itemsets:
        return sequence_utility(s, utilities)
    best = 0
    for p, u in instance_utilities(r, s, utilities).items():
        ru = rest_after(s, p, r.last_item, utilities)
        if ru > 0:
            best = max(best, u + ru)
    return best


def ptsu(db: TemporalDatabase) -> dict[int, int]:
    out = {t: 0 for t in db.periods}
    for s in db.sequences:
        out[s.tid] += sequence_utility(s, db.utilities)
    return out


def ot_of(r: Pattern, db: TemporalDatabase, mode: str = OT_INTERSECTION) -> frozenset[int]:
    sets = [db.shelf[i] for i in r.items]
    if mode == OT_INTERSECTION:
        return frozenset.intersection(*sets)
    return frozenset().union(*sets)


def pu(r: Pattern, t: int, db: TemporalDatabase) -> int:
    return sum(utility_by_enumeration(r, s, db.utilities) for s in db.sequences if s.tid == t)


def tpeu(r: Pattern, t: int, db: TemporalDatabase) -> int:
    return sum(peu(r, s, db.utilities) for s in db.sequences
               if s.tid == t and contains(r, s))


def trsu(r: Pattern, t: int, db: TemporalDatabase) -> int:
    parent = r.parent()
    return sum(peu(parent, s, db.utilities) for s in db.sequences
               if s.tid == t and contains(r, s))


def _supported(db: TemporalDatabase, cap: int | None, budget: int):
    """Breadth-first exhaustive I-/S-extension; yields ``(pattern, containing sequences)``."""
    _check_budget(db, budget)
    items = sorted(db.items)
    frontier = []
    for i in items:
        r = Pattern(((i,),))
        hits = [s for s in db.sequences if contains(r, s)]
        if hits:
            frontier.append((r, hits))
    while frontier:
        nxt = []
        for r, hits in frontier:
            yield r, hits
            if cap is not None and len(r) >= cap:
                continue
            cands = [r.i_extend(i) for i in items if i > r.last_item]
            cands += [r.s_extend(i) for i in items]
            for c in cands:
                sub = [s for s in hits if contains(c, s)]
                if sub:
                    nxt.append((c, sub))
        frontier = nxt


def enumerate_all_patterns(db: TemporalDatabase, cap: int | None = None, *,
                           budget: int = DEFAULT_BUDGET) -> set[Pattern]:
    """Every pattern of length <= ``cap`` contained in at least one q-sequence."""
    return {r for r, _ in _supported(db, cap, budget)}


@dataclass(frozen=True)
class Score:
    pattern: Pattern
    ot: frozenset[int]
    ou: int
    den: int


def score_all(db: TemporalDatabase, cap: int | None = None, *, budget: int = DEFAULT_BUDGET,
              ot_mode: str = OT_INTERSECTION) -> list[Score]:
    """``(ot, ou, denominator)`` of every contained pattern, independent of any threshold."""
    totals = ptsu(db)
    out = []
    for r, hits in _supported(db, cap, budget):
        ot = ot_of(r, db, ot_mode)
        ou = sum(utility_by_enumeration(r, s, db.utilities) for s in hits if s.tid in ot)
        out.append(Score(r, ot, ou, sum(totals[t] for t in ot)))
    return out


def select(scores: list[Score], xi) -> list[MinedPattern]:
    """Patterns among ``scores`` whose ratio reaches ``xi``, in output order."""
    xi = ThresholdConfig(xi)
    out = [MinedPattern(sc.pattern, sc.ou, Fraction(sc.ou, sc.den), sc.ot)
           for sc in scores if xi.reached(sc.ou, sc.den)]
    out.sort(key=lambda m: m.pattern.sort_key())
    return out


def oracle_mine(db: TemporalDatabase, config: OracleConfig) -> list[MinedPattern]:
    scores = score_all(db, config.max_pattern_length, budget=config.budget, ot_mode=config.ot_mode)
    return select(scores, config.xi)
