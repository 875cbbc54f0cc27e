"""Reading, writing and synthesizing temporal q-sequence databases.

Database file, one q-sequence per line::

    <TID> <SID> <item>:<qty> ... -1 <item>:<qty> ... -1 -2

Utility file: ``<item> <profit>`` per line. Shelf file: ``<item> <tid>...``
per line. Blank lines and lines starting with ``#`` are ignored everywhere.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

import numpy as np

from .model import QSequence, TemporalDatabase, make_itemset

log = logging.getLogger(__name__)


class ParseError(ValueError):
    def __init__(self, source: str, line: int, column: int, msg: str):
        super().__init__(f"{source}:{line}:{column}: {msg}")
        self.source = source
        self.line = line
        self.column = column


class ConsistencyError(ValueError):
    """An item occurs in a period where it is not on shelf."""


@dataclass(frozen=True)
class DatasetBundle:
    database: str
    utilities: str
    shelf: str | None = None

    @classmethod
    def from_prefix(cls, prefix: str) -> "DatasetBundle":
        shelf = prefix + ".sh"
        return cls(prefix + ".db", prefix + ".ut", shelf if os.path.exists(shelf) else None)


def _tokens(text: str, source: str):
    """Yield ``(lineno, [(col, token), ...])`` for every non-comment line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = []
        col = 0
        for tok in raw.split():
            col = raw.index(tok, col)
            toks.append((col + 1, tok))
            col += len(tok)
        yield lineno, toks


def _positive(tok: str, source: str, line: int, col: int, what: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(source, line, col, f"expected {what}, got {tok!r}") from None
    if v < 1:
        raise ParseError(source, line, col, f"{what} must be a positive integer, got {v}")
    return v


def parse_sequences(text: str, source: str = "<database>") -> list[QSequence]:
    out = []
    for line, toks in _tokens(text, source):
        if len(toks) < 3:
            raise ParseError(source, line, 1, "expected '<TID> <SID> items... -2'")
        tid = _positive(toks[0][1], source, line, toks[0][0], "TID")
        sid = _positive(toks[1][1], source, line, toks[1][0], "SID")
        itemsets = []
        current: list[tuple[int, int]] = []
        ended = False
        for col, tok in toks[2:]:
            if ended:
                raise ParseError(source, line, col, "token after end-of-sequence marker -2")
            if tok == "-1":
                if not current:
                    raise ParseError(source, line, col, "empty itemset")
                try:
                    itemsets.append(make_itemset(current))
                except ValueError as e:
                    raise ParseError(source, line, col, str(e)) from None
                current = []
            elif tok == "-2":
                if current:
                    raise ParseError(source, line, col, "itemset not terminated by -1")
                ended = True
            else:
                item, sep, qty = tok.partition(":")
                if not sep:
                    raise ParseError(source, line, col, f"expected <item>:<qty>, got {tok!r}")
                current.append((_positive(item, source, line, col, "item"),
                                _positive(qty, source, line, col, "quantity")))
        if not ended:
            raise ParseError(source, line, toks[-1][0], "missing end-of-sequence marker -2")
        if not itemsets:
            raise ParseError(source, line, 1, "q-sequence without itemsets")
        out.append(QSequence(tid, sid, tuple(itemsets)))
    return out


def parse_utilities(text: str, source: str = "<utilities>") -> dict[int, int]:
    out = {}
    for line, toks in _tokens(text, source):
        if len(toks) != 2:
            raise ParseError(source, line, 1, "expected '<item> <profit>'")
        item = _positive(toks[0][1], source, line, toks[0][0], "item")
        if item in out:
            raise ParseError(source, line, toks[0][0], f"duplicate item {item}")
        out[item] = _positive(toks[1][1], source, line, toks[1][0], "profit")
    return out


def parse_shelf(text: str, source: str = "<shelf>") -> dict[int, frozenset[int]]:
    out = {}
    for line, toks in _tokens(text, source):
        if len(toks) < 2:
            raise ParseError(source, line, 1, "expected '<item> <tid> [<tid>...]'")
        item = _positive(toks[0][1], source, line, toks[0][0], "item")
        if item in out:
            raise ParseError(source, line, toks[0][0], f"duplicate item {item}")
        out[item] = frozenset(_positive(t, source, line, c, "TID") for c, t in toks[1:])
    return out


def occurrence_shelf(sequences) -> dict[int, frozenset[int]]:
    shelf: dict[int, set[int]] = {}
    for s in sequences:
        for item in s.items:
            shelf.setdefault(item, set()).add(s.tid)
    return {i: frozenset(ts) for i, ts in shelf.items()}


def assemble(sequences: list[QSequence], utilities: Mapping[int, int],
             shelf: Mapping[int, frozenset[int]] | None = None, *,
             relax_shelf: bool = False) -> TemporalDatabase:
    """Validate parsed tables and build the database.

    Without a shelf table every item is on shelf exactly where it occurs.
    With ``relax_shelf`` an occurrence outside an item's shelf set widens the
    set (with a warning) instead of failing.
    """
    seen = set()
    for s in sequences:
        if (s.tid, s.sid) in seen:
            raise ValueError(f"duplicate (tid, sid) = ({s.tid}, {s.sid})")
        seen.add((s.tid, s.sid))
        for item in s.items:
            if item not in utilities:
                raise ValueError(f"item {item} (tid {s.tid}, sid {s.sid}) has no external utility")
    if shelf is None:
        shelf = occurrence_shelf(sequences)
    else:
        shelf = {i: set(ts) for i, ts in shelf.items()}
        for s in sequences:
            for item in sorted(s.items):
                if s.tid in shelf.get(item, ()):
                    continue
                if not relax_shelf:
                    raise ConsistencyError(
                        f"item {item} occurs in period {s.tid} (sid {s.sid}) but is not on shelf there")
                log.warning("item %d occurs off shelf in period %d; widening its shelf set",
                            item, s.tid)
                shelf.setdefault(item, set()).add(s.tid)
    return TemporalDatabase(tuple(sequences), dict(utilities), shelf)


def parse_database(bundle: DatasetBundle, *, relax_shelf: bool = False) -> TemporalDatabase:
    with open(bundle.database, encoding="utf-8") as f:
        seqs = parse_sequences(f.read(), bundle.database)
    with open(bundle.utilities, encoding="utf-8") as f:
        utils = parse_utilities(f.read(), bundle.utilities)
    shelf = None
    if bundle.shelf is not None:
        with open(bundle.shelf, encoding="utf-8") as f:
            shelf = parse_shelf(f.read(), bundle.shelf)
    return assemble(seqs, utils, shelf, relax_shelf=relax_shelf)


def loads(db_text: str, ut_text: str, sh_text: str | None = None, *,
          relax_shelf: bool = False) -> TemporalDatabase:
    seqs = parse_sequences(db_text)
    utils = parse_utilities(ut_text)
    shelf = parse_shelf(sh_text) if sh_text is not None else None
    return assemble(seqs, utils, shelf, relax_shelf=relax_shelf)


def format_sequence(s: QSequence) -> str:
    parts = [str(s.tid), str(s.sid)]
    for w in s.itemsets:
        parts.extend(f"{qi.item}:{qi.quantity}" for qi in w)
        parts.append("-1")
    parts.append("-2")
    return " ".join(parts)


def serialize_database(db: TemporalDatabase) -> tuple[str, str, str]:
    """Text of the database, utility and shelf files."""
    db_text = "".join(format_sequence(s) + "\n" for s in db.sequences)
    ut_text = "".join(f"{i} {p}\n" for i, p in sorted(db.utilities.items()))
    sh_text = "".join(f"{i} " + " ".join(map(str, sorted(ts))) + "\n"
                      for i, ts in sorted(db.shelf.items()))
    return db_text, ut_text, sh_text


def write_database(db: TemporalDatabase, prefix: str) -> DatasetBundle:
    bundle = DatasetBundle(prefix + ".db", prefix + ".ut", prefix + ".sh")
    for path, text in zip((bundle.database, bundle.utilities, bundle.shelf), serialize_database(db)):
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return bundle


@dataclass(frozen=True)
class GeneratorConfig:
    base: TemporalDatabase
    scale: int = 1
    periods: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError("scale must be >= 1")
        if self.periods < 1:
            raise ValueError("period count must be >= 1")


def generate_scaled(config: GeneratorConfig) -> TemporalDatabase:
    """Replicate the base q-sequences ``scale`` times with random periods.

    Each copy gets a period drawn uniformly from ``1..periods``; SIDs are
    renumbered per period in generation order and the shelf table is
    recomputed from occurrences.
    """
    rng = np.random.default_rng(config.seed)
    base = config.base.sequences
    tids = rng.integers(1, config.periods + 1, size=len(base) * config.scale)
    next_sid: dict[int, int] = {}
    out = []
    for k, tid in enumerate(tids.tolist()):
        s = base[k % len(base)]
        sid = next_sid.get(tid, 0) + 1
        next_sid[tid] = sid
        out.append(QSequence(tid, sid, s.itemsets))
    return TemporalDatabase(tuple(out), dict(config.base.utilities), occurrence_shelf(out))


def random_database(n_sequences: int, n_items: int, *, max_itemsets: int = 4,
                    max_itemset_size: int = 3, n_periods: int = 3, max_quantity: int = 4,
                    max_profit: int = 5, shelf_fraction: float = 0.7,
                    seed: int = 0) -> TemporalDatabase:
    """Random consistent database for tests and benchmarks.

    Every item gets a random non-empty shelf set (each period kept with
    probability ``shelf_fraction``); q-sequences only draw items on shelf in
    their period.
    """
    rng = np.random.default_rng(seed)
    items = list(range(1, n_items + 1))
    utilities = {i: int(rng.integers(1, max_profit + 1)) for i in items}
    shelf = {}
    for i in items:
        ts = [t for t in range(1, n_periods + 1) if rng.random() < shelf_fraction]
        if not ts:
            ts = [int(rng.integers(1, n_periods + 1))]
        shelf[i] = frozenset(ts)
    on_shelf = {t: [i for i in items if t in shelf[i]] for t in range(1, n_periods + 1)}
    live = [t for t in on_shelf if on_shelf[t]]
    seqs = []
    next_sid: dict[int, int] = {}
    for _ in range(n_sequences):
        t = live[int(rng.integers(len(live)))]
        pool = on_shelf[t]
        itemsets = []
        for _ in range(int(rng.integers(1, max_itemsets + 1))):
            size = int(rng.integers(1, min(max_itemset_size, len(pool)) + 1))
            chosen = rng.choice(pool, size=size, replace=False)
            itemsets.append(make_itemset(
                (int(i), int(rng.integers(1, max_quantity + 1))) for i in chosen))
        sid = next_sid.get(t, 0) + 1
        next_sid[t] = sid
        seqs.append(QSequence(t, sid, tuple(itemsets)))
    used = {i for s in seqs for i in s.items}
    return TemporalDatabase(
        tuple(seqs),
        {i: utilities[i] for i in used},
        {i: shelf[i] for i in used},
    )


def head(db: TemporalDatabase, n: int) -> TemporalDatabase:
    """First ``n`` q-sequences (file order), with tables restricted to their items."""
    seqs = db.sequences[:n]
    used = {i for s in seqs for i in s.items}
    return TemporalDatabase(seqs, {i: db.utilities[i] for i in used},
                            {i: db.shelf[i] for i in used})


ITEM_NAMES = {1: "a", 2: "b", 3: "c", 4: "d", 5: "e", 6: "f"}


def running_example(*, strict_shelf: bool = False) -> TemporalDatabase:
    """The five-sequence running example with items a..f mapped to 1..6.

    The literal shelf table puts b on shelf only in period 1 although b is
    bought in period 2; by default that occurrence widens b's shelf set
    (as ``relax_shelf`` does). ``strict_shelf=True`` raises instead.
    """
    pkg = resources.files("oshusp") / "data"
    return loads((pkg / "running_example.db").read_text(),
                 (pkg / "running_example.ut").read_text(),
                 (pkg / "running_example_table3.sh").read_text(),
                 relax_shelf=not strict_shelf)
