"""Maximal independent sets on the bidirectional subgraph."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import UGraph


@dataclass
class MisResult:
    members: frozenset[int]
    rounds: int = 0
    # per Luby round: (live node count, newly joined nodes)
    history: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)


def greedy_mis(u: UGraph) -> MisResult:
    """Lowest id first: take a node unless a neighbour was already taken."""
    chosen: set[int] = set()
    for v in range(u.n):
        if chosen.isdisjoint(u.adj[v]):
            chosen.add(v)
    return MisResult(frozenset(chosen), 0)


def luby_mis(u: UGraph, seed: int) -> MisResult:
    """Synchronous-round randomized MIS.

    Each round every live node draws a 64-bit priority (ascending id order
    from one PCG64 stream).  A node whose (priority, id) is smaller than that
    of every live neighbour joins; joiners and their neighbours retire.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    live = set(range(u.n))
    chosen: set[int] = set()
    history = []
    while live:
        order = sorted(live)
        draws = rng.integers(0, 2**64, size=len(order), dtype=np.uint64)
        prio = {v: (int(p), v) for v, p in zip(order, draws)}
        joined = tuple(v for v in order
                       if all(prio[v] < prio[w] for w in u.adj[v] if w in live))
        history.append((len(order), joined))
        chosen.update(joined)
        for v in joined:
            live.discard(v)
            live.difference_update(u.adj[v])
    return MisResult(frozenset(chosen), len(history), history)
