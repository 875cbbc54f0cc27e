"""Periodical q-matrices and per-period total sequence utilities."""

from __future__ import annotations

from bisect import bisect_left
from typing import Mapping

import numpy as np

from .model import QSequence, TemporalDatabase


class PeriodicalQMatrix:
    """Utility / rest-utility table of one q-sequence.

    ``utility[row, k]`` and ``rest[row, k]`` hold the entry of item
    ``items[row]`` in itemset ``k + 1``. Rest utility is the summed utility
    of every q-item after this one in (itemset, item id) order.

    Rows are only materialized for items occurring in the sequence; every
    other on-shelf item reads back as ``(0, 0)`` through :meth:`entry`.
    """

    __slots__ = ("tid", "sid", "su", "items", "row", "utility", "rest",
                 "n_itemsets", "itemset_items", "occurrences", "_u", "_r")

    def __init__(self, s: QSequence, utilities: Mapping[int, int]):
        self.tid = s.tid
        self.sid = s.sid
        self.n_itemsets = len(s.itemsets)
        self.items = tuple(sorted(s.items))
        self.row = {item: k for k, item in enumerate(self.items)}
        n = len(self.items)
        self.utility = np.zeros((n, self.n_itemsets), dtype=np.int64)
        for k, w in enumerate(s.itemsets):
            for qi in w:
                self.utility[self.row[qi.item], k] = qi.quantity * utilities[qi.item]
        # Column-major walk of the present entries gives the global q-item order.
        order = [(k, self.row[qi.item]) for k, w in enumerate(s.itemsets) for qi in w]
        vals = np.array([self.utility[r, k] for k, r in order], dtype=np.int64)
        self.su = int(vals.sum())
        suffix = self.su - np.cumsum(vals)
        self.rest = np.zeros_like(self.utility)
        for (k, r), ru in zip(order, suffix):
            self.rest[r, k] = ru
        self.utility.setflags(write=False)
        self.rest.setflags(write=False)
        self._u = self.utility.tolist()
        self._r = self.rest.tolist()
        self.itemset_items = tuple(tuple(qi.item for qi in w) for w in s.itemsets)
        occ: dict[int, list[int]] = {}
        for k, w in enumerate(self.itemset_items, start=1):
            for item in w:
                occ.setdefault(item, []).append(k)
        self.occurrences = {i: tuple(ps) for i, ps in occ.items()}

    def entry(self, item: int, position: int) -> tuple[int, int]:
        """``(utility, rest_utility)`` of ``item`` at 1-based itemset ``position``."""
        if not 1 <= position <= self.n_itemsets:
            raise IndexError(f"itemset position {position} out of range 1..{self.n_itemsets}")
        r = self.row.get(item)
        if r is None:
            return (0, 0)
        return (self._u[r][position - 1], self._r[r][position - 1])

    def u(self, item: int, position: int) -> int:
        r = self.row.get(item)
        return 0 if r is None else self._u[r][position - 1]

    def ru(self, item: int, position: int) -> int:
        r = self.row.get(item)
        return 0 if r is None else self._r[r][position - 1]

    def items_after(self, position: int) -> set[int]:
        """Items present in any itemset strictly after ``position``."""
        out: set[int] = set()
        for w in self.itemset_items[position:]:
            out.update(w)
        return out

    def items_in_above(self, position: int, item: int) -> tuple[int, ...]:
        """Items of itemset ``position`` with id greater than ``item``."""
        w = self.itemset_items[position - 1]
        return w[bisect_left(w, item + 1):]

    def __repr__(self):
        return f"PeriodicalQMatrix(tid={self.tid}, sid={self.sid}, su={self.su})"


def build_matrices(db: TemporalDatabase) -> dict[int, list[PeriodicalQMatrix]]:
    """One matrix per q-sequence, grouped by period (every period keyed)."""
    out: dict[int, list[PeriodicalQMatrix]] = {t: [] for t in sorted(db.periods)}
    for s in db.sequences:
        out[s.tid].append(PeriodicalQMatrix(s, db.utilities))
    return out


def compute_ptsu(db: TemporalDatabase) -> dict[int, int]:
    """Periodical total sequence utility of every period (0 for empty ones)."""
    out = {t: 0 for t in sorted(db.periods)}
    for s in db.sequences:
        out[s.tid] += sum(qi.quantity * db.utilities[qi.item] for w in s.itemsets for qi in w)
    return out
