"""Dynamic graph core: update legality, degree accounting, handle cookies."""

import random

import pytest

from colorbench import (
    DegreeBoundExceeded,
    DuplicateEdge,
    MissingEdge,
    SelfLoop,
    UnknownVertex,
    new_graph,
)
from colorbench.graph import DELETE, INSERT, UpdateEvent


def test_empty_graph():
    g = new_graph(0, 5)
    assert g.n == 0
    assert g.num_edges == 0


def test_insert_and_degree_counting():
    g = new_graph(10, 4)
    for v in range(1, 5):
        g.insert(0, v)
    assert g.degree(0) == 4
    with pytest.raises(DegreeBoundExceeded):
        g.insert(0, 5)
    assert g.degree(0) == 4
    g.delete(0, 1)
    assert g.degree(0) == 3


def test_adaptive_mode_has_no_bound():
    g = new_graph(10, None)
    for v in range(1, 10):
        g.insert(0, v)
    assert g.degree(0) == 9


def test_update_errors():
    g = new_graph(5, 3)
    g.insert(0, 1)
    with pytest.raises(DuplicateEdge):
        g.insert(1, 0)  # canonical identity: order-insensitive
    with pytest.raises(MissingEdge):
        g.delete(2, 3)
    with pytest.raises(SelfLoop):
        g.insert(2, 2)
    with pytest.raises(UnknownVertex):
        g.insert(0, 9)
    with pytest.raises(UnknownVertex):
        g.degree(-1)


def test_receipt_shape():
    g = new_graph(4, 2)
    r = g.apply(UpdateEvent(INSERT, 1, 0))
    assert (r.kind, r.u, r.v) == (INSERT, 0, 1)
    assert r.sequence_number == 1
    r = g.apply(UpdateEvent(DELETE, 0, 1))
    assert r.sequence_number == 2


def test_degree_sum_and_cookies_under_random_churn():
    rng = random.Random(7)
    g = new_graph(30, 6)
    live = set()
    for _ in range(3000):
        u, v = rng.randrange(30), rng.randrange(30)
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e in live:
            g.delete(*e)
            live.remove(e)
        else:
            try:
                g.insert(*e)
                live.add(e)
            except DegreeBoundExceeded:
                pass
        assert g.num_edges == len(live)
    assert sum(g.degree(v) for v in range(30)) == 2 * g.num_edges
    g.check_adjacency()
    assert {(h.lo, h.hi) for h in g.edges()} == live
