"""Two-phase miner: per-period promising-pattern search, then candidate-tree verification.

Phase 1 grows patterns independently inside every period, pruning with
the period-local TPEU (depth) and TRSU (width) bounds, and records each
visited pattern's periodical utility in a candidate trie. Phase 2 walks the
trie, drops candidates that cannot reach the threshold even if every
unvisited on-shelf period contributed its maximal allowance, computes the
missing periodical utilities and emits the qualifying patterns.
"""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Iterator, Mapping

from .model import OT_INTERSECTION, MinedPattern, Pattern, TemporalDatabase, ThresholdConfig, check_ot_mode
from .projection import (I_EXT, S_EXT, ProjectedDatabase, extend_and_project,
                         project_first_level, project_pattern, scan_extensions)
from .qmatrix import build_matrices, compute_ptsu
from .report import Budget, Limits, MiningReport

NODE_BYTES = 96


class CTreeNode:
    __slots__ = ("item", "is_s", "seq", "on_shelf_time", "calculated_time", "verified_time",
                 "children", "is_promising", "utility", "c_utility")

    def __init__(self, item: int | None, is_s: bool, seq: Pattern, on_shelf_time: int, n_periods: int):
        self.item = item
        self.is_s = is_s
        self.seq = seq
        self.on_shelf_time = on_shelf_time
        self.calculated_time = 0
        self.verified_time = 0
        self.children: dict[tuple[bool, int], CTreeNode] = {}
        self.is_promising = False
        self.utility = [0] * n_periods
        self.c_utility = 0

    def ordered_children(self) -> list["CTreeNode"]:
        # I-children (is_s False) first, then S-children, item ascending.
        return [self.children[k] for k in sorted(self.children)]

    def __repr__(self):
        return f"CTreeNode({self.seq}, promising={self.is_promising}, c_utility={self.c_utility})"


class CTree:
    """Candidate trie keyed by (boundary flag, item) edges.

    Bit ``k`` of the period bitsets stands for ``periods[k]``.
    """

    def __init__(self, periods, shelf: Mapping[int, frozenset[int]], ot_mode: str = OT_INTERSECTION):
        self.ot_mode = check_ot_mode(ot_mode)
        self.periods = sorted(periods)
        self.index = {t: k for k, t in enumerate(self.periods)}
        self.shelf = shelf
        self.root = CTreeNode(None, False, Pattern(), 0, len(self.periods))
        self.size = 0
        self._item_bits = {i: self._bits(ts) for i, ts in shelf.items()}

    def _bits(self, ts) -> int:
        out = 0
        for t in ts:
            k = self.index.get(t)
            if k is not None:
                out |= 1 << k
        return out

    def bits_to_periods(self, bits: int) -> list[int]:
        return [t for k, t in enumerate(self.periods) if bits >> k & 1]

    def node_for(self, r: Pattern, create: bool = True) -> CTreeNode | None:
        node = self.root
        bits = None
        seq: tuple[tuple[int, ...], ...] = ()
        for w in r.itemsets:
            for j, item in enumerate(w):
                is_s = j == 0
                if is_s:
                    seq = seq + ((item,),)
                else:
                    seq = seq[:-1] + (seq[-1] + (item,),)
                ib = self._item_bits[item]
                if bits is None:
                    bits = ib
                elif self.ot_mode == OT_INTERSECTION:
                    bits &= ib
                else:
                    bits |= ib
                child = node.children.get((is_s, item))
                if child is None:
                    if not create:
                        return None
                    child = CTreeNode(item, is_s, Pattern(seq), bits, len(self.periods))
                    node.children[(is_s, item)] = child
                    self.size += 1
                node = child
        return node

    def register(self, r: Pattern, t: int, pu: int, promising: bool) -> CTreeNode:
        """Record ``pu(r, t)``; creates the path on first sight, idempotent afterwards."""
        if not r.itemsets:
            raise ValueError("cannot register the empty pattern")
        node = self.node_for(r)
        k = self.index[t]
        node.utility[k] = pu
        node.calculated_time |= 1 << k
        node.c_utility = sum(node.utility)
        node.is_promising = node.is_promising or promising
        return node

    def walk(self) -> Iterator[CTreeNode]:
        """Depth-first, pre-order, excluding the root."""
        stack = list(reversed(self.root.ordered_children()))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.ordered_children()))


def arc_filter(node: CTreeNode, ptsu_by_index: list[int], xi: ThresholdConfig) -> bool:
    """True to keep ``node`` for verification, False when it provably cannot qualify.

    The bound credits every on-shelf period without a recorded utility
    with ``xi * ptsu(t)``.
    """
    not_appearing = node.on_shelf_time & ~node.calculated_time
    den = 0
    allowance = 0
    for k, p in enumerate(ptsu_by_index):
        if node.on_shelf_time >> k & 1:
            den += p
            if not_appearing >> k & 1:
                allowance += p
    if den == 0:
        return False
    return node.c_utility + xi.xi * allowance >= xi.xi * den


class _Phase1:
    def __init__(self, ctree: CTree, ptsu: Mapping[int, int], xi: ThresholdConfig,
                 ldp: bool, lwp: bool, budget: Budget, report: MiningReport):
        self.ctree = ctree
        self.ptsu = ptsu
        self.xi = xi
        self.ldp = ldp
        self.lwp = lwp
        self.budget = budget
        self.report = report
        self.node_bytes = NODE_BYTES + 8 * len(ctree.periods)

    def visit(self, chain: ProjectedDatabase, t: int):
        """Register ``chain.pattern`` in period ``t`` and recurse unless depth-pruned."""
        pu = chain.pu()
        before = self.ctree.size
        self.ctree.register(chain.pattern, t, pu, self.xi.reached(pu, self.ptsu[t]))
        if self.ctree.size > before:
            self.budget.alloc((self.ctree.size - before) * self.node_bytes)
        if not self.ldp or self.xi.reached(chain.tpeu(), self.ptsu[t]):
            local_pgrowth(chain, t, self)

    def grow(self, chain: ProjectedDatabase, item: int, kind: str, trsu: int, t: int, out: list):
        if self.lwp and not self.xi.reached(trsu, self.ptsu[t]):
            return
        child = extend_and_project(chain, item, kind)
        self.report.projections_built += 1
        self.budget.alloc(child.nbytes)
        out.append(child)


def local_pgrowth(chain: ProjectedDatabase, t: int, ctx: _Phase1):
    """Extend a single-period projected database and recurse into survivors."""
    ctx.budget.tick()
    i_ext, s_ext = scan_extensions(chain)
    ctx.report.candidates_generated += len(i_ext) + len(s_ext)
    seqlist: list[ProjectedDatabase] = []
    for item in sorted(i_ext):
        ctx.grow(chain, item, I_EXT, i_ext[item].get(t, 0), t, seqlist)
    for item in sorted(s_ext):
        ctx.grow(chain, item, S_EXT, s_ext[item].get(t, 0), t, seqlist)
    for child in seqlist:
        ctx.visit(child, t)
    ctx.budget.free(sum(c.nbytes for c in seqlist))


def mine_osums(db: TemporalDatabase, xi, *, ldp: bool = True, lwp: bool = True,
               arc: bool = True, ot_mode: str = OT_INTERSECTION,
               limits: Limits | None = None, return_tree: bool = False):
    """Mine every pattern with on-shelf utility ratio >= ``xi`` in two phases.

    ``ldp``, ``lwp`` and ``arc`` switch the local depth pruning, local width
    pruning and redundant-calculation filter; the result set never depends
    on them. ``ot_mode`` picks how a pattern's on-shelf periods combine its
    items' shelf sets (see :func:`~oshusp.model.on_shelf_periods`). Raises :class:`~oshusp.report.MiningAborted` when ``limits``
    are exceeded. With ``return_tree`` the candidate trie is returned too.
    """
    xi = ThresholdConfig(xi)
    report = MiningReport("osums", flags={"ldp": ldp, "lwp": lwp, "arc": arc},
                          ot_mode=check_ot_mode(ot_mode))
    budget = Budget(report, limits)
    t0 = time.perf_counter()

    ptsu = compute_ptsu(db)
    matrices = build_matrices(db)
    ctree = CTree(db.periods, db.shelf, ot_mode)
    ctx = _Phase1(ctree, ptsu, xi, ldp, lwp, budget, report)
    t1 = time.perf_counter()
    report.phase_times["build"] = t1 - t0

    for t in ctree.periods:
        if not matrices[t]:
            continue
        first = project_first_level(matrices[t])
        report.candidates_generated += len(first)
        report.projections_built += len(first)
        first_bytes = sum(c.nbytes for c in first.values())
        budget.alloc(first_bytes)
        for chain in first.values():
            ctx.visit(chain, t)
        budget.free(first_bytes)
    t2 = time.perf_counter()
    report.phase_times["phase1"] = t2 - t1

    ptsu_idx = [ptsu[t] for t in ctree.periods]
    for node in ctree.walk():
        budget.tick()
        report.nodes_visited += 1
        if not node.is_promising:
            continue
        if arc and not arc_filter(node, ptsu_idx, xi):
            continue
        missing = node.on_shelf_time & ~node.calculated_time
        ou = node.c_utility
        den = 0
        for k, t in enumerate(ctree.periods):
            if not node.on_shelf_time >> k & 1:
                continue
            den += ptsu[t]
            if missing >> k & 1:
                fresh = project_pattern(node.seq, matrices[t])
                budget.alloc(fresh.nbytes)
                ou += fresh.pu()
                budget.free(fresh.nbytes)
                node.verified_time |= 1 << k
                report.utility_computations += 1
        if xi.reached(ou, den):
            ot = frozenset(ctree.bits_to_periods(node.on_shelf_time))
            report.patterns.append(MinedPattern(node.seq, ou, Fraction(ou, den), ot))
    t3 = time.perf_counter()
    report.phase_times["phase2"] = t3 - t2
    report.wall_time = t3 - t0
    if return_tree:
        return report, ctree
    return report

