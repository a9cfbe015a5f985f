"""Dynamic graph core: fixed vertex universe, edge updates, engine dispatch.

The graph is the source of truth for adjacency and degrees. A coloring
engine may be attached; every accepted update notifies it exactly once and
the engine's instrumentation comes back in the receipt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Tuple

from .errors import (
    DegreeBoundExceeded,
    DuplicateEdge,
    MissingEdge,
    SelfLoop,
    UnknownVertex,
)

VertexId = int

INSERT = "+"
DELETE = "-"


class EdgeHandle:
    """A live edge. Endpoints are stored canonically as (lo, hi), lo < hi.

    ``cell_lo`` / ``cell_hi`` are position cookies into the attached engine's
    per-endpoint neighborhood lists (the cell living in lo's lists holds hi,
    and vice versa); ``color`` is scratch for the edge-coloring engine. Both
    stay None until an engine claims them.
    """

    __slots__ = ("lo", "hi", "cell_lo", "cell_hi", "color")

    def __init__(self, lo: int, hi: int):
        self.lo = lo
        self.hi = hi
        self.cell_lo = None
        self.cell_hi = None
        self.color = None

    def other(self, v: int) -> int:
        return self.hi if v == self.lo else self.lo

    def endpoints(self) -> Tuple[int, int]:
        return (self.lo, self.hi)

    def __repr__(self) -> str:
        return f"EdgeHandle({self.lo}, {self.hi})"


@dataclass(frozen=True)
class UpdateEvent:
    """One trace step. ``kind`` uses the trace notation '+' / '-'."""

    kind: str
    u: int
    v: int


@dataclass
class UpdateReceipt:
    """What one accepted update did, including downstream engine work."""

    sequence_number: int
    kind: str
    u: int
    v: int
    stats: Dict[str, int] = field(default_factory=dict)


class DynamicGraph:
    """Undirected simple graph on a fixed vertex set [0, n).

    ``max_degree=None`` selects adaptive mode: no bound is enforced and the
    attached engine is expected to track live degrees itself. Single-writer;
    do not interleave queries with ``apply`` from other threads.
    """

    def __init__(self, n: int, max_degree: Optional[int] = None):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if max_degree is not None and max_degree < 0:
            raise ValueError("degree bound must be nonnegative")
        self.n = n
        self.max_degree = max_degree
        self._adj: list[Dict[int, EdgeHandle]] = [dict() for _ in range(n)]
        self.num_edges = 0
        self.seq = 0
        self.engine = None

    # -- wiring ------------------------------------------------------------

    def attach(self, engine) -> None:
        """Attach the coloring engine notified on every accepted update."""
        self.engine = engine

    # -- queries -----------------------------------------------------------

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise UnknownVertex(f"vertex {v} outside [0, {self.n})")

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self._adj[u]

    def neighbors(self, v: int) -> Iterator[int]:
        self._check_vertex(v)
        return iter(self._adj[v])

    def handle(self, u: int, v: int) -> EdgeHandle:
        self._check_vertex(u)
        self._check_vertex(v)
        try:
            return self._adj[u][v]
        except KeyError:
            raise MissingEdge(f"edge ({u}, {v}) not present") from None

    def edges(self) -> Iterator[EdgeHandle]:
        for u in range(self.n):
            for v, h in self._adj[u].items():
                if u < v:
                    yield h

    # -- updates -----------------------------------------------------------

    def apply(self, event: UpdateEvent) -> UpdateReceipt:
        u, v = event.u, event.v
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        lo, hi = (u, v) if u < v else (v, u)

        if event.kind == INSERT:
            if hi in self._adj[lo]:
                raise DuplicateEdge(f"edge ({lo}, {hi}) already present")
            if self.max_degree is not None:
                if (
                    len(self._adj[lo]) >= self.max_degree
                    or len(self._adj[hi]) >= self.max_degree
                ):
                    raise DegreeBoundExceeded(
                        f"insert ({lo}, {hi}) exceeds degree bound {self.max_degree}"
                    )
            h = EdgeHandle(lo, hi)
            self._adj[lo][hi] = h
            self._adj[hi][lo] = h
            self.num_edges += 1
            self.seq += 1
            stats = self.engine.on_insert(h) if self.engine is not None else {}
        elif event.kind == DELETE:
            h = self._adj[lo].pop(hi, None)
            if h is None:
                raise MissingEdge(f"edge ({lo}, {hi}) not present")
            del self._adj[hi][lo]
            self.num_edges -= 1
            self.seq += 1
            stats = self.engine.on_delete(h) if self.engine is not None else {}
        else:
            raise ValueError(f"unknown update kind {event.kind!r}")

        return UpdateReceipt(self.seq, event.kind, lo, hi, stats or {})

    def insert(self, u: int, v: int) -> UpdateReceipt:
        return self.apply(UpdateEvent(INSERT, u, v))

    def delete(self, u: int, v: int) -> UpdateReceipt:
        return self.apply(UpdateEvent(DELETE, u, v))

    # -- structural self-check ----------------------------------------------

    def check_adjacency(self) -> None:
        """Full-scan structural audit; raises AssertionError on corruption."""
        total = 0
        for u in range(self.n):
            for v, h in self._adj[u].items():
                assert u != v, "self-loop stored"
                assert self._adj[v].get(u) is h, "cookie does not resolve"
                assert (h.lo, h.hi) == ((u, v) if u < v else (v, u))
                total += 1
        assert total == 2 * self.num_edges, "degree sum != 2|E|"
        if self.max_degree is not None:
            assert all(len(a) <= self.max_degree for a in self._adj)


def new_graph(n: int, max_degree: Optional[int] = None) -> DynamicGraph:
    """Create an empty graph; ``max_degree=None`` means adaptive mode."""
    return DynamicGraph(n, max_degree)
