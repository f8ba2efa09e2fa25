"""Exact oracle and the two comparison heuristics.

DAST and G-CMA are rebuilt from one-sentence descriptions of the original
methods, so their tie-breaking and merge details are our own.
"""
from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass

from .graph import Digraph, GraphError, Solution, is_strongly_connected, strongly_connected_components, validate_scdas, Verdict

# Documented feasible size for the exact oracle.
ORACLE_FEASIBLE_N = 14


class OracleBudgetError(RuntimeError):
    def __init__(self, message: str, upper_bound: frozenset[int]):
        super().__init__(f"{message}; best known upper bound has {len(upper_bound)} nodes")
        self.upper_bound = upper_bound


@dataclass(frozen=True)
class OracleConfig:
    size_cap: int | None = None
    time_budget: float | None = None


def brute_force_opt(g: Digraph, cfg: OracleConfig | None = None) -> Solution:
    """Smallest valid set, lexicographically first among equal sizes."""
    cfg = cfg or OracleConfig()
    if not is_strongly_connected(g):
        raise GraphError("the oracle needs a strongly connected graph")
    cap = g.n if cfg.size_cap is None else cfg.size_cap
    if cap > g.n:
        raise ValueError(f"size_cap {cap} exceeds n={g.n}")
    deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
    everything = frozenset(range(g.n))
    for size in range(1 if g.n else 0, cap + 1):
        for combo in itertools.combinations(range(g.n), size):
            if validate_scdas(g, combo) is Verdict.VALID:
                return Solution(combo, "opt")
            if deadline is not None and time.monotonic() > deadline:
                raise OracleBudgetError(f"time budget exhausted at size {size}", everything)
    raise OracleBudgetError(f"no valid set of size <= {cap}", everything)


def brute_force_opt_bitmask(g: Digraph) -> Solution:
    """Second exact enumerator: every bitmask in numeric order, own checks.

    Shares nothing with :func:`brute_force_opt` beyond the graph itself, so the
    two can be cross-checked.
    """
    n = g.n
    out_m = [sum(1 << w for w in g.out[v]) for v in range(n)]
    in_m = [sum(1 << w for w in g.inn[v]) for v in range(n)]

    def closure(adj, start, mask):
        seen = 1 << start
        stack = [start]
        while stack:
            v = stack.pop()
            new = adj[v] & mask & ~seen
            seen |= new
            stack.extend(w for w in range(n) if new >> w & 1)
        return seen

    best = None
    for mask in range(1, 1 << n):
        if any(not (mask >> v & 1) and not (in_m[v] & mask and out_m[v] & mask) for v in range(n)):
            continue
        start = (mask & -mask).bit_length() - 1
        if closure(out_m, start, mask) != mask or closure(in_m, start, mask) != mask:
            continue
        key = (bin(mask).count("1"), [v for v in range(n) if mask >> v & 1])
        if best is None or key < best:
            best = key
    if best is None:
        return Solution((), "opt-bitmask")
    return Solution(best[1], "opt-bitmask")


def _bfs_tree(adj, root: int) -> list[int]:
    """Parent array of a BFS tree; parents are the smallest-id node one level up."""
    n = len(adj)
    dist = [-1] * n
    parent = [-1] * n
    dist[root] = 0
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] == -1:
                dist[w] = dist[v] + 1
                parent[w] = v
                queue.append(w)
            elif dist[w] == dist[v] + 1 and v < parent[w]:
                parent[w] = v
    return parent


def dast(g: Digraph) -> Solution:
    """Root plus the internal nodes of a BFS out-tree and a BFS in-tree at the root."""
    if not is_strongly_connected(g):
        raise GraphError("DAST needs a strongly connected graph")
    if g.n == 0:
        return Solution((), "dast")
    root = min(range(g.n), key=lambda v: (-(len(g.out[v]) + len(g.inn[v])), v))
    out_parent = _bfs_tree(g.out, root)
    in_parent = _bfs_tree(g.inn, root)
    internal = {p for p in out_parent if p >= 0} | {p for p in in_parent if p >= 0}
    return Solution(internal | {root}, "dast", witness={"root": root})


def _greedy_dominating_absorbent(g: Digraph) -> list[int]:
    chosen: list[int] = []
    in_set = [False] * g.n
    need_dom = [True] * g.n
    need_abs = [True] * g.n
    while any(need_dom) or any(need_abs):
        best, best_gain = -1, -1
        for c in range(g.n):
            if in_set[c]:
                continue
            gain = need_dom[c] + need_abs[c]
            gain += sum(need_dom[w] for w in g.out[c])
            gain += sum(need_abs[w] for w in g.inn[c])
            if gain > best_gain:
                best, best_gain = c, gain
        chosen.append(best)
        in_set[best] = True
        need_dom[best] = need_abs[best] = False
        for w in g.out[best]:
            need_dom[w] = False
        for w in g.inn[best]:
            need_abs[w] = False
    return chosen


def _shortest_paths_from(g: Digraph, src: int) -> tuple[list[int], list[int]]:
    """BFS with sorted adjacency: each node's path is the lexicographically smallest shortest one."""
    dist = [-1] * g.n
    parent = [-1] * g.n
    dist[src] = 0
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in g.out[v]:
            if dist[w] == -1:
                dist[w] = dist[v] + 1
                parent[w] = v
                queue.append(w)
    return dist, parent


def gcma(g: Digraph) -> Solution:
    """Greedy dominating-absorbent set, then shortest paths between its SCCs.

    Phase 2 repeatedly picks, over ordered pairs of components (A, B) of the
    induced subgraph where A cannot yet reach B, the shortest path in g from
    a node of A to a node of B (ties: smaller endpoints, then smaller path)
    and adds its inner nodes.
    """
    if not is_strongly_connected(g):
        raise GraphError("G-CMA needs a strongly connected graph")
    members = set(_greedy_dominating_absorbent(g))
    phase1 = sorted(members)
    merges = []
    while True:
        sub, labels = g.induced(members)
        comps = strongly_connected_components(sub)
        if len(comps) <= 1:
            break
        comp_of = {}
        for ci, comp in enumerate(comps):
            for i in comp:
                comp_of[labels[i]] = ci
        reach = _component_reach(sub, comps, labels, comp_of)
        best = None
        for a in sorted(members):
            dist, parent = _shortest_paths_from(g, a)
            for b in sorted(members):
                ca, cb = comp_of[a], comp_of[b]
                if ca == cb or cb in reach[ca] or dist[b] == -1 or dist[b] > g.n:
                    continue
                key = (dist[b], a, b)
                if best is not None and key > best[0][:3]:
                    continue
                path = [b]
                while path[-1] != a:
                    path.append(parent[path[-1]])
                path.reverse()
                cand = (key + (tuple(path),), path)
                if best is None or cand[0] < best[0]:
                    best = cand
        if best is None:
            raise GraphError("no connecting path found between components")
        merges.append(tuple(best[1]))
        members.update(best[1][1:-1])
    return Solution(members, "gcma", witness={"phase1": phase1, "paths": merges})


def _component_reach(sub: Digraph, comps, labels, comp_of) -> list[set[int]]:
    """For each component, the set of components it reaches inside the induced graph."""
    out = []
    for comp in comps:
        seen = set(comp)
        stack = list(comp)
        while stack:
            v = stack.pop()
            for w in sub.out[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append({comp_of[labels[v]] for v in seen})
    return out
