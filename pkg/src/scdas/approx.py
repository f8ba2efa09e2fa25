"""Constant-factor approximation: MIS plus short connector paths.

The MIS ``I`` is taken on the bidirectional subgraph.  For every ordered
pair of MIS nodes joined by a directed path of at most three hops whose
inner nodes avoid ``I``, the connector graph gets an arc labelled with that
path's inner nodes.  Parallel arcs collapse to one, and the backbone is
``I`` plus every inner node of the surviving arcs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph import (Digraph, DiskGraph, GraphError, Solution, UGraph, bidirectional_subgraph,
                    is_independent_maximal, is_strongly_connected)
from .mis import MisResult, greedy_mis, luby_mis


@dataclass(frozen=True, order=True)
class Connector:
    """Arc u->v of the connector graph with the inner nodes of its witness path."""

    u: int
    v: int
    inner: tuple[int, ...]


@dataclass(frozen=True)
class ConnectorGraph:
    vertices: frozenset[int]
    arcs: tuple[Connector, ...]

    def out_degree(self, u: int) -> int:
        return len({c.v for c in self.arcs if c.u == u})

    def max_out_degree(self) -> int:
        return max((self.out_degree(u) for u in self.vertices), default=0)

    def max_total_degree(self) -> int:
        """Largest in+out degree over distinct neighbouring pairs."""
        deg = dict.fromkeys(self.vertices, 0)
        for u, v in {(c.u, c.v) for c in self.arcs}:
            deg[u] += 1
            deg[v] += 1
        return max(deg.values(), default=0)

    def inner_nodes(self) -> frozenset[int]:
        return frozenset(x for c in self.arcs for x in c.inner)

    def is_strongly_connected(self) -> bool:
        order = sorted(self.vertices)
        index = {v: i for i, v in enumerate(order)}
        pairs = {(index[c.u], index[c.v]) for c in self.arcs}
        return is_strongly_connected(Digraph.from_arcs(len(order), pairs))


def compute_mis(g: Digraph, mis_mode: str = "greedy", seed: int | None = None) -> MisResult:
    u = bidirectional_subgraph(g)
    if mis_mode == "greedy":
        return greedy_mis(u)
    if mis_mode == "luby":
        return luby_mis(u, 0 if seed is None else seed)
    raise ValueError(f"unknown MIS mode {mis_mode!r}")


def _arc_key(c: Connector):
    return c.u, c.v, c.inner


def _check_mis(g: Digraph, i: frozenset[int]):
    independent, maximal = is_independent_maximal(bidirectional_subgraph(g), i)
    if not (independent and maximal):
        raise GraphError("connector graph needs a maximal independent set of the bidirectional subgraph")


def _witness_paths(g: Digraph, i: frozenset[int]) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    for u in sorted(i):
        for x in g.out[u]:
            if x in i:
                yield u, x, ()
                continue
            for y in g.out[x]:
                if y == u:
                    continue
                if y in i:
                    yield u, y, (x,)
                    continue
                for z in g.out[y]:
                    if z in i and z != u:
                        yield u, z, (x, y)


def _best_per_pair(paths) -> list[Connector]:
    best: dict[tuple[int, int], tuple[int, ...]] = {}
    for u, v, inner in paths:
        kept = best.get((u, v))
        if kept is None or (len(inner), inner) < (len(kept), kept):
            best[u, v] = inner
    return [Connector(u, v, inner) for (u, v), inner in sorted(best.items())]


def build_connector_graph(g: Digraph, i: Iterable[int]) -> ConnectorGraph:
    """All witness paths of length 1..3 between distinct MIS nodes (before dedup)."""
    i = frozenset(i)
    _check_mis(g, i)
    arcs = [Connector(*w) for w in _witness_paths(g, i)]
    return ConnectorGraph(i, tuple(sorted(arcs, key=_arc_key)))


def dedupe(cg: ConnectorGraph) -> ConnectorGraph:
    """Keep one arc per ordered pair: shortest witness, then smallest inner ids."""
    return ConnectorGraph(cg.vertices, tuple(_best_per_pair(_arc_key(c) for c in cg.arcs)))


def deduped_connector_graph(g: Digraph, i: Iterable[int]) -> ConnectorGraph:
    """Same as ``dedupe(build_connector_graph(g, i))`` without materialising every path."""
    i = frozenset(i)
    _check_mis(g, i)
    return ConnectorGraph(i, tuple(_best_per_pair(_witness_paths(g, i))))


def approx_scdas(g: Digraph, mis_mode: str = "greedy", seed: int | None = None) -> Solution:
    if not is_strongly_connected(g):
        raise GraphError("approx_scdas needs a strongly connected graph")
    mis = compute_mis(g, mis_mode, seed)
    cg = deduped_connector_graph(g, mis.members)
    members = mis.members | cg.inner_nodes()
    witness = {
        "mis": sorted(mis.members),
        "mis_rounds": mis.rounds,
        "connector_graph": cg,
        "connectors": [(c.u, c.v, c.inner) for c in cg.arcs],
    }
    return Solution(members, "approx", seed if mis_mode == "luby" else None, witness)


def connector_degree_cap(k: float) -> int:
    """Upper bound floor(49 k^2 - 1) on connector-graph degree for transmission ratio k."""
    if k < 1:
        raise ValueError(f"transmission ratio must be >= 1, got {k}")
    return math.floor(49 * k * k - 1)


def mis_size_bound(k: float, opt: int) -> float:
    """2.4 (k + 1/2)^2 * OPT + 3.7 (k + 1/2)^2."""
    h = (k + 0.5) ** 2
    return 2.4 * h * opt + 3.7 * h


def approx_size_bound(k: float, opt: int) -> float:
    return mis_size_bound(k, opt) * (1 + 2 * connector_degree_cap(k))


def structural_report(g: DiskGraph, sol: Solution, opt: int | None = None) -> dict[str, bool]:
    """Check the k-dependent bounds on one approximation run over a disk graph."""
    cg: ConnectorGraph = sol.witness["connector_graph"]
    k = g.ratio
    n_mis = len(sol.witness["mis"])
    report = {
        "degree_cap": cg.max_out_degree() <= connector_degree_cap(k),
        "size_vs_mis": len(sol) <= n_mis * (1 + 2 * cg.max_total_degree()),
        "connector_strong": cg.is_strongly_connected(),
    }
    if opt is not None:
        report["mis_bound"] = n_mis <= mis_size_bound(k, opt)
        report["end_to_end"] = len(sol) <= approx_size_bound(k, opt)
    return report


def cds_dgb(g: Digraph, seed: int | None = None) -> Solution:
    """Connected dominating set for graphs whose arcs are all bidirectional.

    Each MIS node keeps a single connector: its best witness to the
    smallest-id MIS node reachable within three hops.  One link per node
    can leave the MIS split into groups, so remaining groups are joined by
    the globally best witness between them until the backbone is connected.
    """
    for u, v in g.arcs():
        if not g.has_arc(v, u):
            raise GraphError(f"arc {u}->{v} is unidirectional; cds_dgb needs a DGB")
    if not is_strongly_connected(g):
        raise GraphError("cds_dgb needs a connected graph")
    mis = compute_mis(g, "greedy" if seed is None else "luby", seed)
    cg = deduped_connector_graph(g, mis.members)
    by_source: dict[int, list[Connector]] = {}
    for c in cg.arcs:
        by_source.setdefault(c.u, []).append(c)
    chosen = [min(arcs, key=lambda c: c.v) for _, arcs in sorted(by_source.items())]
    members = set(mis.members)
    for c in chosen:
        members.update(c.inner)

    repairs = []
    while True:
        comps = _components(g, members)
        if len(comps) <= 1:
            break
        label = {v: i for i, comp in enumerate(comps) for v in comp}
        c = min((c for c in cg.arcs if label[c.u] != label[c.v]),
                key=lambda c: (len(c.inner), c.u, c.v, c.inner))
        repairs.append((c.u, c.v, c.inner))
        members.update(c.inner)
    witness = {
        "mis": sorted(mis.members),
        "connectors": [(c.u, c.v, c.inner) for c in chosen] + repairs,
        "repairs": repairs,
    }
    return Solution(members, "cds-dgb", seed, witness)


def _components(g: Digraph, members: set[int]) -> list[set[int]]:
    left = set(members)
    comps = []
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in g.out[v]:
                if w in left and w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        comps.append(comp)
    return comps


def is_connected_dominating(g: Digraph, s: Iterable[int]) -> bool:
    """Undirected CDS check on the symmetric graph."""
    s = set(s)
    if not s:
        return g.n == 0
    ug = UGraph(g.n, g.out)
    dominated = all(v in s or not s.isdisjoint(ug.adj[v]) for v in range(g.n))
    return dominated and len(_components(g, s)) == 1
