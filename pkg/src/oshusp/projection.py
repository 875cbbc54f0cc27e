"""Utility chains (projected databases), upper bounds and I/S-extension.

A utility list describes one q-sequence containing a pattern: one element
per extension position holding the pattern's best utility there (``acu``)
and the rest utility behind its last item (``ru``). A projected database is
a set of such lists, each tagged with the period of its q-sequence; it can
cover one period or all of a pattern's on-shelf periods.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .model import OT_INTERSECTION, Pattern, QSequence, TemporalDatabase, on_shelf_periods
from .qmatrix import PeriodicalQMatrix, build_matrices

I_EXT = "I"
S_EXT = "S"

# Byte costs used by the live-memory counter (approximate 64-bit layout).
ELEMENT_BYTES = 24
LIST_BYTES = 48


class UtilityElement(NamedTuple):
    pos: int
    acu: int
    ru: int


def _peu(elements) -> int:
    best = 0
    for e in elements:
        if e.ru > 0 and e.acu + e.ru > best:
            best = e.acu + e.ru
    return best


class UtilityList:
    __slots__ = ("matrix", "elements", "peu")

    def __init__(self, matrix: PeriodicalQMatrix, elements: tuple[UtilityElement, ...]):
        self.matrix = matrix
        self.elements = elements
        self.peu = _peu(elements)

    @property
    def sid(self) -> int:
        return self.matrix.sid

    @property
    def time(self) -> int:
        return self.matrix.tid

    @property
    def utility(self) -> int:
        return max(e.acu for e in self.elements)

    def __repr__(self):
        return f"UtilityList(t={self.time}, sid={self.sid}, peu={self.peu}, {list(self.elements)})"


class ProjectedDatabase:
    """All utility lists of one pattern, in matrix order."""

    __slots__ = ("pattern", "lists")

    def __init__(self, pattern: Pattern, lists: list[UtilityList]):
        self.pattern = pattern
        self.lists = lists

    def __len__(self):
        return len(self.lists)

    def __bool__(self):
        return bool(self.lists)

    @property
    def periods(self) -> set[int]:
        return {ul.time for ul in self.lists}

    def lists_in(self, t: int) -> list[UtilityList]:
        return [ul for ul in self.lists if ul.time == t]

    def tpeu(self, t: int | None = None) -> int:
        """Summed PEU over period ``t``, or over every listed period."""
        return sum(ul.peu for ul in self.lists if t is None or ul.time == t)

    def pu(self, t: int | None = None) -> int:
        return sum(ul.utility for ul in self.lists if t is None or ul.time == t)

    def pu_by_period(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for ul in self.lists:
            out[ul.time] = out.get(ul.time, 0) + ul.utility
        return out

    def tpeu_by_period(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for ul in self.lists:
            out[ul.time] = out.get(ul.time, 0) + ul.peu
        return out

    @property
    def nbytes(self) -> int:
        return sum(LIST_BYTES + ELEMENT_BYTES * len(ul.elements) for ul in self.lists)


# -- single-list primitives -------------------------------------------------

def _item_list(matrix: PeriodicalQMatrix, item: int) -> UtilityList | None:
    ps = matrix.occurrences.get(item)
    if not ps:
        return None
    r = matrix.row[item]
    u, rest = matrix._u[r], matrix._r[r]
    return UtilityList(matrix, tuple(UtilityElement(p, u[p - 1], rest[p - 1]) for p in ps))


def _i_extend_list(ul: UtilityList, item: int) -> UtilityList | None:
    m = ul.matrix
    r = m.row.get(item)
    if r is None:
        return None
    u, rest = m._u[r], m._r[r]
    out = []
    for e in ul.elements:
        v = u[e.pos - 1]
        if v:
            out.append(UtilityElement(e.pos, e.acu + v, rest[e.pos - 1]))
    return UtilityList(m, tuple(out)) if out else None


def _s_extend_list(ul: UtilityList, item: int) -> UtilityList | None:
    m = ul.matrix
    ps = m.occurrences.get(item)
    if not ps:
        return None
    r = m.row[item]
    u, rest = m._u[r], m._r[r]
    elems = ul.elements
    n = len(elems)
    k = 0
    best = -1
    out = []
    for q in ps:
        while k < n and elems[k].pos < q:
            if elems[k].acu > best:
                best = elems[k].acu
            k += 1
        if best >= 0:
            out.append(UtilityElement(q, best + u[q - 1], rest[q - 1]))
    return UtilityList(m, tuple(out)) if out else None


def extend_list(ul: UtilityList, item: int, kind: str) -> UtilityList | None:
    if kind == I_EXT:
        return _i_extend_list(ul, item)
    if kind == S_EXT:
        return _s_extend_list(ul, item)
    raise ValueError(f"unknown extension kind {kind!r}")


def pattern_list(r: Pattern, matrix: PeriodicalQMatrix) -> UtilityList | None:
    """Utility list of ``r`` in one q-sequence, built item by item."""
    if not r.itemsets:
        raise ValueError("empty pattern")
    ul = _item_list(matrix, r.itemsets[0][0])
    for item in r.itemsets[0][1:]:
        if ul is None:
            return None
        ul = _i_extend_list(ul, item)
    for w in r.itemsets[1:]:
        if ul is None:
            return None
        ul = _s_extend_list(ul, w[0])
        for item in w[1:]:
            if ul is None:
                return None
            ul = _i_extend_list(ul, item)
    return ul


# -- projected databases ----------------------------------------------------

def project_item(item: int, matrices: Iterable[PeriodicalQMatrix]) -> ProjectedDatabase:
    lists = []
    for m in matrices:
        ul = _item_list(m, item)
        if ul is not None:
            lists.append(ul)
    return ProjectedDatabase(Pattern(((item,),)), lists)


def project_first_level(matrices: Iterable[PeriodicalQMatrix]) -> dict[int, ProjectedDatabase]:
    """Projected databases of every 1-sequence occurring in ``matrices``."""
    lists: dict[int, list[UtilityList]] = {}
    for m in matrices:
        for item in m.items:
            lists.setdefault(item, []).append(_item_list(m, item))
    return {i: ProjectedDatabase(Pattern(((i,),)), lists[i]) for i in sorted(lists)}


def project_pattern(r: Pattern, matrices: Iterable[PeriodicalQMatrix]) -> ProjectedDatabase:
    """Projected database of ``r`` built from scratch over ``matrices``."""
    need = r.items
    lists = []
    for m in matrices:
        if need.issubset(m.row):
            ul = pattern_list(r, m)
            if ul is not None:
                lists.append(ul)
    return ProjectedDatabase(r, lists)


def scan_extensions(chain: ProjectedDatabase) -> tuple[dict[int, dict[int, int]], dict[int, dict[int, int]]]:
    """Candidate I- and S-extension items with their per-period TRSU.

    Returns two maps ``item -> {period: trsu}``. An item is credited once
    per utility list with that list's PEU, i.e. the parent's PEU in every
    q-sequence containing the extension.
    """
    if not chain.pattern.itemsets:
        raise ValueError("chain of the empty pattern")
    last = chain.pattern.last_item
    i_ext: dict[int, dict[int, int]] = {}
    s_ext: dict[int, dict[int, int]] = {}
    for ul in chain.lists:
        m = ul.matrix
        t = ul.time
        peu = ul.peu
        seen: set[int] = set()
        for e in ul.elements:
            seen.update(m.items_in_above(e.pos, last))
        for item in seen:
            d = i_ext.setdefault(item, {})
            d[t] = d.get(t, 0) + peu
        for item in m.items_after(ul.elements[0].pos):
            d = s_ext.setdefault(item, {})
            d[t] = d.get(t, 0) + peu
    return i_ext, s_ext


def find_extension_items(chain: ProjectedDatabase) -> tuple[list[int], list[int]]:
    i_ext, s_ext = scan_extensions(chain)
    return sorted(i_ext), sorted(s_ext)


def extend_and_project(chain: ProjectedDatabase, item: int, kind: str) -> ProjectedDatabase:
    """Projected database of the I- or S-extension of ``chain.pattern`` by ``item``.

    Built from the parent's lists and their matrices only. The result spans
    whatever periods the parent chain spans.
    """
    if kind == I_EXT:
        pattern = chain.pattern.i_extend(item)
        step = _i_extend_list
    elif kind == S_EXT:
        pattern = chain.pattern.s_extend(item)
        step = _s_extend_list
    else:
        raise ValueError(f"unknown extension kind {kind!r}")
    lists = []
    for ul in chain.lists:
        new = step(ul, item)
        if new is not None:
            lists.append(new)
    return ProjectedDatabase(pattern, lists)


# -- definitions on a single q-sequence -------------------------------------

def _list_for(r: Pattern, s: QSequence, utilities: Mapping[int, int]) -> UtilityList | None:
    return pattern_list(r, PeriodicalQMatrix(s, utilities))


def utility_at_extension_position(r: Pattern, p: int, s: QSequence, utilities: Mapping[int, int]) -> int:
    ul = _list_for(r, s, utilities)
    for e in (ul.elements if ul else ()):
        if e.pos == p:
            return e.acu
    raise ValueError(f"{r} has no instance ending at itemset {p}")


def pattern_utility_in_sequence(r: Pattern, s: QSequence, utilities: Mapping[int, int]) -> int:
    """Max utility of ``r`` over its extension positions; 0 if not contained."""
    ul = _list_for(r, s, utilities)
    return ul.utility if ul else 0


def rest_utility(r: Pattern, p: int, s: QSequence, utilities: Mapping[int, int]) -> int:
    ul = _list_for(r, s, utilities)
    for e in (ul.elements if ul else ()):
        if e.pos == p:
            return e.ru
    raise ValueError(f"{r} has no instance ending at itemset {p}")


def peu(r: Pattern, s: QSequence, utilities: Mapping[int, int]) -> int:
    ul = _list_for(r, s, utilities)
    return ul.peu if ul else 0


def tpeu(r: Pattern, t: int | None, chain: ProjectedDatabase) -> int:
    if chain.pattern != r:
        raise ValueError(f"chain belongs to {chain.pattern}, not {r}")
    return chain.tpeu(t)


def trsu(r_ext: Pattern, t: int | None, parent_chain: ProjectedDatabase) -> int:
    """Sum of the parent's PEU over q-sequences (of period ``t``) containing ``r_ext``."""
    parent = parent_chain.pattern
    if r_ext.parent() != parent:
        raise ValueError(f"{r_ext} does not extend {parent}")
    item = r_ext.last_item
    kind = I_EXT if r_ext.size == parent.size else S_EXT
    total = 0
    for ul in parent_chain.lists:
        if t is not None and ul.time != t:
            continue
        if extend_list(ul, item, kind) is not None:
            total += ul.peu
    return total


def periodical_utility(r: Pattern, t: int, chain: ProjectedDatabase) -> int:
    if chain.pattern != r:
        raise ValueError(f"chain belongs to {chain.pattern}, not {r}")
    return chain.pu(t)


def on_shelf_stats(r: Pattern, db: TemporalDatabase, ptsu: Mapping[int, int],
                   matrices: Mapping[int, list[PeriodicalQMatrix]] | None = None,
                   ot_mode: str = OT_INTERSECTION):
    """``(ot, ou, our)`` of ``r``; ``our`` is an exact Fraction (0 on a zero denominator).

    The denominator sums ``ptsu`` over all of ``ot``, including periods
    where ``r`` never occurs.
    """
    ot = on_shelf_periods(r, db.shelf, ot_mode)
    if matrices is None:
        matrices = build_matrices(db)
    ou = 0
    for t in ot:
        ou += project_pattern(r, matrices.get(t, ())).pu()
    den = sum(ptsu.get(t, 0) for t in ot)
    return ot, ou, (Fraction(ou, den) if den else Fraction(0))
