import logging

import pytest
from hypothesis import strategies as st

from oshusp.ingest import random_database, running_example
from oshusp.model import Pattern

DATA = __import__("oshusp").__path__[0] + "/data/running_example"


@pytest.fixture(scope="session")
def ex():
    logging.getLogger("oshusp.ingest").setLevel(logging.ERROR)
    return running_example()


def qs(db, tid, sid):
    return next(s for s in db.sequences if s.tid == tid and s.sid == sid)


def P(*itemsets):
    return Pattern.of(*itemsets)


@st.composite
def small_databases(draw, max_sequences=6, max_items=6):
    """Random consistent databases inside the oracle's comfort zone."""
    n = draw(st.integers(1, max_sequences))
    m = draw(st.integers(1, max_items))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_database(n, m, seed=seed)
