"""One-phase miner over all time periods at once.

Projected databases span every on-shelf period of their pattern, so a
candidate's on-shelf utility is known the moment it is built and it is
emitted (or dropped) immediately.

Depth and width gates depend on how on-shelf periods combine. With
``"union"`` a descendant's period set only grows, so the summed bound over
the current pattern's periods divided by their summed ``ptsu`` is a valid
gate. With ``"intersection"`` a descendant may keep only a subset of the
periods, and the only ratio that bounds every subset is the best single
period's ``bound(t) / ptsu(t)``; the gates use that.
"""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Mapping

from .model import (OT_INTERSECTION, MinedPattern, TemporalDatabase, ThresholdConfig,
                    check_ot_mode, combine_shelf)
from .projection import I_EXT, S_EXT, ProjectedDatabase, extend_and_project, project_first_level, scan_extensions
from .qmatrix import build_matrices, compute_ptsu
from .report import Budget, Limits, MiningReport


class _Search:
    def __init__(self, ptsu: Mapping[int, int], shelf, xi: ThresholdConfig, gdp: bool, gwp: bool,
                 ot_mode: str, budget: Budget, report: MiningReport):
        self.ptsu = ptsu
        self.shelf = shelf
        self.xi = xi
        self.gdp = gdp
        self.gwp = gwp
        self.ot_mode = ot_mode
        self.budget = budget
        self.report = report
        self._den: dict[frozenset[int], int] = {}

    def denominator(self, ot: frozenset[int]) -> int:
        den = self._den.get(ot)
        if den is None:
            den = self._den[ot] = sum(self.ptsu.get(t, 0) for t in ot)
        return den

    def passes(self, bound: Mapping[int, int], ot: frozenset[int]) -> bool:
        """Whether a per-period upper bound leaves room for ratio >= xi within ``ot``."""
        if self.ot_mode == OT_INTERSECTION:
            return any(self.xi.reached(v, self.ptsu[t]) for t, v in bound.items() if t in ot)
        return self.xi.reached(sum(v for t, v in bound.items() if t in ot), self.denominator(ot))

    def visit(self, chain: ProjectedDatabase, ot: frozenset[int]):
        den = self.denominator(ot)
        ou = chain.pu()
        if self.xi.reached(ou, den):
            self.report.patterns.append(MinedPattern(chain.pattern, ou, Fraction(ou, den), ot))
        if not self.gdp or self.passes(chain.tpeu_by_period(), ot):
            global_pgrowth(chain, ot, self)


def global_pgrowth(chain: ProjectedDatabase, ot: frozenset[int], ctx: _Search):
    """Extend a multi-period projected database and recurse into the survivors."""
    ctx.budget.tick()
    i_ext, s_ext = scan_extensions(chain)
    ctx.report.candidates_generated += len(i_ext) + len(s_ext)
    seqlist: list[tuple[ProjectedDatabase, frozenset[int]]] = []
    for kind, found in ((I_EXT, i_ext), (S_EXT, s_ext)):
        for item in sorted(found):
            child_ot = combine_shelf(ot, ctx.shelf[item], ctx.ot_mode)
            if ctx.gwp and not ctx.passes(found[item], child_ot):
                continue
            child = extend_and_project(chain, item, kind)
            ctx.report.projections_built += 1
            ctx.budget.alloc(child.nbytes)
            seqlist.append((child, child_ot))
    for child, child_ot in seqlist:
        ctx.visit(child, child_ot)
    ctx.budget.free(sum(c.nbytes for c, _ in seqlist))


def mine_osums_plus(db: TemporalDatabase, xi, *, gdp: bool = True, gwp: bool = True,
                    ot_mode: str = OT_INTERSECTION, limits: Limits | None = None) -> MiningReport:
    """Mine every pattern with on-shelf utility ratio >= ``xi`` in one pass.

    ``gdp`` and ``gwp`` switch the global depth and width pruning; the
    result set never depends on them.
    """
    xi = ThresholdConfig(xi)
    report = MiningReport("osums-plus", flags={"gdp": gdp, "gwp": gwp},
                          ot_mode=check_ot_mode(ot_mode))
    budget = Budget(report, limits)
    t0 = time.perf_counter()
    ptsu = compute_ptsu(db)
    matrices = build_matrices(db)
    ctx = _Search(ptsu, db.shelf, xi, gdp, gwp, ot_mode, budget, report)
    first = project_first_level(m for t in sorted(matrices) for m in matrices[t])
    t1 = time.perf_counter()
    report.phase_times["build"] = t1 - t0
    report.candidates_generated += len(first)
    report.projections_built += len(first)
    first_bytes = sum(c.nbytes for c in first.values())
    budget.alloc(first_bytes)
    for item, chain in first.items():
        ctx.visit(chain, db.shelf[item])
    budget.free(first_bytes)
    t2 = time.perf_counter()
    report.phase_times["search"] = t2 - t1
    report.wall_time = t2 - t0
    return report
