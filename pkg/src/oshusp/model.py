"""Domain types for temporal quantitative sequence databases.

Items and time periods are positive integers. Itemset positions inside a
q-sequence are 1-based throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping, NamedTuple


class QItem(NamedTuple):
    item: int
    quantity: int


def make_itemset(qitems: Iterable[tuple[int, int]]) -> tuple[QItem, ...]:
    """Canonicalize q-items into an itemset sorted by item id.

    Raises ValueError on duplicates, non-positive ids or quantities.
    """
    out = sorted(QItem(int(i), int(q)) for i, q in qitems)
    if not out:
        raise ValueError("empty itemset")
    for k, qi in enumerate(out):
        if qi.item < 1:
            raise ValueError(f"item id must be >= 1, got {qi.item}")
        if qi.quantity < 1:
            raise ValueError(f"quantity of item {qi.item} must be >= 1, got {qi.quantity}")
        if k and out[k - 1].item == qi.item:
            raise ValueError(f"duplicate item {qi.item} in itemset")
    return tuple(out)


@dataclass(frozen=True)
class QSequence:
    tid: int
    sid: int
    itemsets: tuple[tuple[QItem, ...], ...]

    def __post_init__(self):
        if self.tid < 1 or self.sid < 1:
            raise ValueError(f"tid and sid must be >= 1, got ({self.tid}, {self.sid})")
        if not self.itemsets:
            raise ValueError(f"q-sequence ({self.tid}, {self.sid}) has no itemsets")
        for w in self.itemsets:
            if not w:
                raise ValueError(f"q-sequence ({self.tid}, {self.sid}) has an empty itemset")

    @classmethod
    def build(cls, tid: int, sid: int, itemsets) -> "QSequence":
        return cls(tid, sid, tuple(make_itemset(w) for w in itemsets))

    @property
    def items(self) -> set[int]:
        return {qi.item for w in self.itemsets for qi in w}

    def __len__(self) -> int:
        return sum(len(w) for w in self.itemsets)


@dataclass(frozen=True)
class TemporalDatabase:
    """Q-sequences partitioned by time period, plus profit and shelf tables.

    Sequences are kept sorted by ``(tid, sid)``; ``periods`` is the union of
    the periods carrying sequences and the periods named in the shelf table.
    Consistency (every item only occurs in its on-shelf periods) is checked
    on construction.
    """

    sequences: tuple[QSequence, ...]
    utilities: Mapping[int, int]
    shelf: Mapping[int, frozenset[int]]
    periods: frozenset[int] = field(default=frozenset())

    def __post_init__(self):
        seqs = tuple(sorted(self.sequences, key=lambda s: (s.tid, s.sid)))
        object.__setattr__(self, "sequences", seqs)
        object.__setattr__(self, "utilities", dict(self.utilities))
        object.__setattr__(self, "shelf", {i: frozenset(ts) for i, ts in self.shelf.items()})
        periods = set(self.periods) | {s.tid for s in seqs}
        for ts in self.shelf.values():
            periods |= ts
        object.__setattr__(self, "periods", frozenset(periods))
        self._validate()

    def _validate(self):
        seen = set()
        for s in self.sequences:
            if (s.tid, s.sid) in seen:
                raise ValueError(f"duplicate (tid, sid) = ({s.tid}, {s.sid})")
            seen.add((s.tid, s.sid))
            for item in s.items:
                if item not in self.utilities:
                    raise KeyError(f"item {item} has no external utility")
                if s.tid not in self.shelf.get(item, ()):
                    raise ValueError(
                        f"item {item} occurs in period {s.tid} (sid {s.sid}) "
                        f"but is off shelf there")
        for item, p in self.utilities.items():
            if p < 1:
                raise ValueError(f"external utility of item {item} must be >= 1, got {p}")
        for item, ts in self.shelf.items():
            if not ts:
                raise ValueError(f"item {item} has an empty shelf set")

    @property
    def items(self) -> set[int]:
        return {i for s in self.sequences for i in s.items}

    def period(self, t: int) -> list[QSequence]:
        return [s for s in self.sequences if s.tid == t]

    def by_period(self) -> dict[int, list[QSequence]]:
        groups: dict[int, list[QSequence]] = {t: [] for t in sorted(self.periods)}
        for s in self.sequences:
            groups[s.tid].append(s)
        return groups

    def __len__(self):
        return len(self.sequences)


@dataclass(frozen=True, order=True)
class Pattern:
    """A sequence of itemsets (items only), grown by I- and S-extension."""

    itemsets: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def of(cls, *itemsets: Iterable[int]) -> "Pattern":
        sets = tuple(tuple(sorted(w)) for w in itemsets)
        for w in sets:
            if not w or len(set(w)) != len(w):
                raise ValueError(f"invalid itemset {w!r}")
        return cls(sets)

    def __len__(self) -> int:
        return sum(len(w) for w in self.itemsets)

    @property
    def size(self) -> int:
        return len(self.itemsets)

    @property
    def last_item(self) -> int:
        return self.itemsets[-1][-1]

    @property
    def items(self) -> set[int]:
        return {i for w in self.itemsets for i in w}

    def i_extend(self, item: int) -> "Pattern":
        if not self.itemsets:
            raise ValueError("cannot I-extend the empty pattern")
        if item <= self.last_item:
            raise ValueError(f"I-extension item {item} must exceed {self.last_item}")
        return Pattern(self.itemsets[:-1] + (self.itemsets[-1] + (item,),))

    def s_extend(self, item: int) -> "Pattern":
        return Pattern(self.itemsets + ((item,),))

    def parent(self) -> "Pattern":
        """Pattern with the last item removed (the node above in the search tree)."""
        if not self.itemsets:
            raise ValueError("the empty pattern has no parent")
        last = self.itemsets[-1]
        if len(last) == 1:
            return Pattern(self.itemsets[:-1])
        return Pattern(self.itemsets[:-1] + (last[:-1],))

    def prefixes(self) -> Iterator["Pattern"]:
        """Proper non-empty prefixes, nearest first."""
        p = self
        while len(p) > 1:
            p = p.parent()
            yield p

    def sort_key(self):
        return (len(self), self.itemsets)

    def __str__(self):
        return "".join("{" + " ".join(map(str, w)) + "}" for w in self.itemsets)

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        """Inverse of ``str``: ``"{1 2}{3}"`` -> Pattern."""
        text = text.strip()
        if not text.startswith("{") or not text.endswith("}"):
            raise ValueError(f"bad pattern {text!r}")
        return cls.of(*([int(x) for x in chunk.split()] for chunk in text[1:-1].split("}{")))


class ThresholdConfig:
    """Minimum on-shelf utility ratio, kept as an exact fraction in (0, 1]."""

    __slots__ = ("xi",)

    def __init__(self, xi):
        if isinstance(xi, ThresholdConfig):
            xi = xi.xi
        if isinstance(xi, float):
            xi = Fraction(repr(xi))
        xi = Fraction(xi)
        if not 0 < xi <= 1:
            raise ValueError(f"threshold must lie in (0, 1], got {xi}")
        self.xi = xi

    def reached(self, numerator: int, denominator: int) -> bool:
        """``numerator / denominator >= xi``, false for a zero denominator."""
        if denominator <= 0:
            return False
        return numerator * self.xi.denominator >= self.xi.numerator * denominator

    def __float__(self):
        return float(self.xi)

    def __repr__(self):
        return f"ThresholdConfig({self.xi})"

    def __eq__(self, other):
        return isinstance(other, ThresholdConfig) and other.xi == self.xi

    def __hash__(self):
        return hash(self.xi)


@dataclass(frozen=True)
class MinedPattern:
    pattern: Pattern
    ou: int
    our: Fraction
    ot: frozenset[int]

    def format(self) -> str:
        ot = ",".join(str(t) for t in sorted(self.ot))
        return f"{self.pattern}\t{self.ou}\t{float(self.our):.6f}\t{ot}"


OT_INTERSECTION = "intersection"
OT_UNION = "union"
OT_MODES = (OT_INTERSECTION, OT_UNION)


def check_ot_mode(mode: str) -> str:
    if mode not in OT_MODES:
        raise ValueError(f"ot mode must be one of {OT_MODES}, got {mode!r}")
    return mode


def combine_shelf(a: frozenset[int], b: frozenset[int], mode: str) -> frozenset[int]:
    return a & b if mode == OT_INTERSECTION else a | b


def on_shelf_periods(pattern: Pattern, shelf: Mapping[int, frozenset[int]],
                     mode: str = OT_INTERSECTION) -> frozenset[int]:
    """Periods a pattern counts as on shelf.

    ``"intersection"``: periods where every item of the pattern is on shelf.
    ``"union"``: periods where any item is. Either way the pattern can only
    occur inside the returned set.
    """
    check_ot_mode(mode)
    sets = [shelf[i] for i in sorted(pattern.items)]
    if not sets:
        return frozenset()
    out = sets[0]
    for ts in sets[1:]:
        out = combine_shelf(out, ts, mode)
    return out


def item_utility(item: int, quantity: int, utilities: Mapping[int, int]) -> int:
    if quantity < 1:
        raise ValueError(f"quantity must be >= 1, got {quantity}")
    return quantity * utilities[item]


def q_sequence_utility(s: QSequence, utilities: Mapping[int, int]) -> int:
    return sum(item_utility(qi.item, qi.quantity, utilities) for w in s.itemsets for qi in w)


def database_utility(db: TemporalDatabase) -> int:
    return sum(q_sequence_utility(s, db.utilities) for s in db.sequences)


def find_instances(r: Pattern, s: QSequence) -> list[tuple[int, ...]]:
    """All 1-based position tuples at which ``r`` occurs in ``s``.

    Brute force over increasing index tuples; the last index of each tuple
    is the instance's extension position.
    """
    if not r.itemsets:
        raise ValueError("empty pattern")
    sets = [frozenset(qi.item for qi in w) for w in s.itemsets]
    wanted = [set(w) for w in r.itemsets]
    out = []
    for pos in combinations(range(len(sets)), len(wanted)):
        if all(w <= sets[k] for w, k in zip(wanted, pos)):
            out.append(tuple(k + 1 for k in pos))
    return out
