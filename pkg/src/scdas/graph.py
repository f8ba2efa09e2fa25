"""Disk graphs, digraph primitives and SCDAS validators.

Every algorithm in the package consumes a :class:`Digraph`.  A
:class:`DiskGraph` is a ``Digraph`` whose arcs were derived from node
positions and transmission ranges, so anything that accepts a digraph also
accepts a disk graph.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Number = int | float | Fraction


class GraphError(ValueError):
    """Raised for malformed graphs, node sets or instance files."""


@dataclass(frozen=True)
class DiskNode:
    id: int
    x: Number
    y: Number
    r: Number

    def __post_init__(self):
        for name in ("x", "y", "r"):
            if not math.isfinite(float(getattr(self, name))):
                raise GraphError(f"node {self.id}: {name} is not finite")
        if self.r <= 0:
            raise GraphError(f"node {self.id}: range must be positive, got {self.r}")


@dataclass(frozen=True, eq=False)
class Digraph:
    """Immutable adjacency view: sorted out- and in-neighbour tuples per node."""

    n: int
    out: tuple[tuple[int, ...], ...]
    inn: tuple[tuple[int, ...], ...]

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        outs: list[set[int]] = [set() for _ in range(n)]
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"arc ({u},{v}) outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            outs[u].add(v)
        return cls._from_out_sets(n, outs)

    @classmethod
    def _from_out_sets(cls, n: int, outs: Sequence[Iterable[int]]) -> "Digraph":
        ins: list[list[int]] = [[] for _ in range(n)]
        out = tuple(tuple(sorted(s)) for s in outs)
        for u in range(n):
            for v in out[u]:
                ins[v].append(u)
        return cls(n, out, tuple(tuple(sorted(s)) for s in ins))

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out[u]]

    @property
    def num_arcs(self) -> int:
        return sum(len(o) for o in self.out)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.out_sets[u]

    @cached_property
    def out_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(o) for o in self.out)

    @cached_property
    def in_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(i) for i in self.inn)

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        return tuple(_mask(o) for o in self.out)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        return tuple(_mask(i) for i in self.inn)

    def neighbors(self, v: int) -> tuple[int, ...]:
        """In- and out-neighbours of ``v``, each listed once."""
        return tuple(sorted(self.out_sets[v] | self.in_sets[v]))

    def induced(self, nodes: Iterable[int]) -> tuple["Digraph", list[int]]:
        """Subgraph on ``nodes``, relabelled densely; returns it with the label map."""
        keep = sorted(set(nodes))
        index = {v: i for i, v in enumerate(keep)}
        outs = [[index[w] for w in self.out[v] if w in index] for v in keep]
        return Digraph._from_out_sets(len(keep), outs), keep

    def reverse(self) -> "Digraph":
        return Digraph(self.n, self.inn, self.out)

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.out == other.out

    def __hash__(self):
        return hash((self.n, self.out))


def _mask(nodes: Iterable[int]) -> int:
    m = 0
    for v in nodes:
        m |= 1 << v
    return m


@dataclass(frozen=True, eq=False)
class DiskGraph(Digraph):
    nodes: tuple[DiskNode, ...] = ()

    @property
    def r_min(self) -> Number:
        return min(nd.r for nd in self.nodes)

    @property
    def r_max(self) -> Number:
        return max(nd.r for nd in self.nodes)

    @property
    def ratio(self) -> float:
        """Transmission ratio k = r_max / r_min."""
        return float(Fraction(self.r_max) / Fraction(self.r_min))

    @property
    def digraph(self) -> Digraph:
        return Digraph(self.n, self.out, self.inn)


# Float screening margin; pairs closer than this to the boundary are re-decided exactly.
_SCREEN_REL = 1e-9


def build_disk_graph(nodes: Sequence[DiskNode]) -> DiskGraph:
    """Derive arcs u->v for every pair with dist(u, v) <= r_u.

    Squared distances are compared.  A float pass decides clear cases and
    any pair within a relative 1e-9 of the boundary is re-decided with exact
    rational arithmetic on the stored coordinates.
    """
    nodes = tuple(sorted(nodes, key=lambda nd: nd.id))
    n = len(nodes)
    ids = [nd.id for nd in nodes]
    if len(set(ids)) != n:
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise GraphError(f"duplicate node ids: {dup}")
    if ids != list(range(n)):
        raise GraphError("node ids must be dense 0..n-1")
    if n == 0:
        return DiskGraph(0, (), (), ())

    xy = np.array([[float(nd.x), float(nd.y)] for nd in nodes])
    r2 = np.array([float(nd.r) ** 2 for nd in nodes])
    diff = xy[:, None, :] - xy[None, :, :]
    d2 = (diff**2).sum(axis=2)
    slack = d2 - r2[:, None]
    scale = np.maximum(d2, r2[:, None])
    adj = slack <= 0
    close = np.abs(slack) <= _SCREEN_REL * scale
    for u, v in zip(*np.nonzero(close)):
        adj[u, v] = _within_exact(nodes[u], nodes[v])
    np.fill_diagonal(adj, False)
    outs = [np.flatnonzero(adj[u]).tolist() for u in range(n)]
    base = Digraph._from_out_sets(n, outs)
    return DiskGraph(n, base.out, base.inn, nodes)


def _within_exact(a: DiskNode, b: DiskNode) -> bool:
    dx = Fraction(a.x) - Fraction(b.x)
    dy = Fraction(a.y) - Fraction(b.y)
    return dx * dx + dy * dy <= Fraction(a.r) ** 2


# ---------------------------------------------------------------------------
# reachability


def _reach(adj: Sequence[Sequence[int]], start: int, allowed: frozenset[int] | None = None) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen and (allowed is None or w in allowed):
                seen.add(w)
                queue.append(w)
    return seen


def is_strongly_connected(g: Digraph) -> bool:
    if g.n <= 1:
        return True
    return len(_reach(g.out, 0)) == g.n and len(_reach(g.inn, 0)) == g.n


def induced_strongly_connected(g: Digraph, members: Iterable[int]) -> bool:
    """Whether G[members] is strongly connected, without building the subgraph."""
    members = frozenset(members)
    if len(members) <= 1:
        return True
    start = min(members)
    return (len(_reach(g.out, start, members)) == len(members)
            and len(_reach(g.inn, start, members)) == len(members))


def mask_strongly_connected(g: Digraph, mask: int) -> bool:
    """Strong connectivity of the subgraph induced by the bitmask ``mask``."""
    if mask & (mask - 1) == 0:
        return True
    start = (mask & -mask).bit_length() - 1
    return (_mask_closure(g.out_masks, start, mask) == mask
            and _mask_closure(g.in_masks, start, mask) == mask)


def _mask_closure(adj_masks: Sequence[int], start: int, mask: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= adj_masks[low.bit_length() - 1]
            frontier ^= low
        nxt &= mask & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def strongly_connected_components(g: Digraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative.

    Components come back sorted internally and ordered by smallest member.
    """
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(g.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            succ = g.out[v]
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


def bfs_distances(adj: Sequence[Sequence[int]], source: int) -> list[int]:
    """Hop distances from ``source``; -1 marks unreachable nodes."""
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] == -1:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def diameter(g: Digraph) -> int:
    if not is_strongly_connected(g):
        raise GraphError("diameter is undefined for a graph that is not strongly connected")
    return max((max(bfs_distances(g.out, s)) for s in range(g.n)), default=0)


# ---------------------------------------------------------------------------
# domination, absorption, validity


def _check_subset(g: Digraph, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    bad = [v for v in s if not (isinstance(v, (int, np.integer)) and 0 <= v < g.n)]
    if bad:
        raise GraphError(f"nodes {sorted(bad)} are not in the graph")
    return s


def _first_uncovered(g: Digraph, s: frozenset[int]) -> tuple[int | None, int | None]:
    """First node lacking an in-neighbour in s, and first lacking an out-neighbour."""
    undominated = unabsorbed = None
    for v in range(g.n):
        if v in s:
            continue
        if undominated is None and s.isdisjoint(g.inn[v]):
            undominated = v
        if unabsorbed is None and s.isdisjoint(g.out[v]):
            unabsorbed = v
    return undominated, unabsorbed


def is_dominating_absorbent(g: Digraph, s: Iterable[int]) -> bool:
    s = _check_subset(g, s)
    return _first_uncovered(g, s) == (None, None)


class Verdict(str, enum.Enum):
    VALID = "valid"
    NOT_DOMINATING = "not_dominating"
    NOT_ABSORBENT = "not_absorbent"
    NOT_STRONGLY_CONNECTED = "not_strongly_connected"
    EMPTY_ON_NONEMPTY = "empty_on_nonempty"

    def __str__(self):
        return self.value


def validate_scdas(g: Digraph, s: Iterable[int]) -> Verdict:
    s = _check_subset(g, s)
    if not s and g.n > 0:
        return Verdict.EMPTY_ON_NONEMPTY
    undominated, unabsorbed = _first_uncovered(g, s)
    if undominated is not None:
        return Verdict.NOT_DOMINATING
    if unabsorbed is not None:
        return Verdict.NOT_ABSORBENT
    if not induced_strongly_connected(g, s):
        return Verdict.NOT_STRONGLY_CONNECTED
    return Verdict.VALID


# ---------------------------------------------------------------------------
# undirected view


@dataclass(frozen=True)
class UGraph:
    n: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "UGraph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(tuple(sorted(a)) for a in adj))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]


def bidirectional_subgraph(g: Digraph) -> UGraph:
    """Keep {u, v} only when both arcs u->v and v->u exist."""
    return UGraph(g.n, tuple(tuple(v for v in g.out[u] if u in g.out_sets[v]) for u in range(g.n)))


def is_independent_maximal(u: UGraph, s: Iterable[int]) -> tuple[bool, bool]:
    s = frozenset(s)
    if any(not 0 <= v < u.n for v in s):
        raise GraphError("set contains nodes outside the graph")
    independent = all(s.isdisjoint(u.adj[v]) for v in s)
    maximal = independent and all(v in s or not s.isdisjoint(u.adj[v]) for v in range(u.n))
    return independent, maximal


# ---------------------------------------------------------------------------
# solutions


@dataclass
class Solution:
    """A candidate backbone with the algorithm that produced it."""

    members: frozenset[int]
    algorithm: str
    seed: int | None = None
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        self.members = frozenset(int(v) for v in self.members)

    def __len__(self):
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def to_text(self) -> str:
        lines = [f"algorithm {self.algorithm}",
                 "members " + " ".join(map(str, self.sorted_members()))]
        if self.seed is not None:
            lines.insert(1, f"seed {self.seed}")
        for u, v, inner in self.witness.get("connectors", []):
            lines.append(f"witness {u} {v} " + " ".join(map(str, inner)))
        return "\n".join(line.rstrip() for line in lines) + "\n"


# ---------------------------------------------------------------------------
# instance files


def format_decimal(value: Number) -> str:
    """Exact decimal text for ints, floats (shortest repr) and terminating Fractions."""
    if isinstance(value, (bool, np.bool_)):
        raise GraphError("booleans are not coordinates")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    den, digits = frac.denominator, 0
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den != 1:
        raise GraphError(f"{frac} has no finite decimal expansion")
    while (frac * 10**digits).denominator != 1:
        digits += 1
    scaled = abs(frac.numerator * 10**digits // frac.denominator)
    sign = "-" if frac < 0 else ""
    whole, rest = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{rest:0{digits}d}"


def write_instance(g: DiskGraph, one_based: bool = False) -> str:
    offset = 1 if one_based else 0
    lines = [f"n={g.n}"]
    for nd in g.nodes:
        lines.append(" ".join([str(nd.id + offset), format_decimal(nd.x),
                               format_decimal(nd.y), format_decimal(nd.r)]))
    return "\n".join(lines) + "\n"


def read_instance(text: str, one_based: bool = False) -> DiskGraph:
    """Parse the line-oriented instance format; decimals are kept exact."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise GraphError("instance file must start with a 'n=<count>' header")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise GraphError(f"bad header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != n:
        raise GraphError(f"header says n={n} but {len(body)} node lines follow")
    offset = 1 if one_based else 0
    nodes = []
    for expected, line in enumerate(body):
        parts = line.split()
        if len(parts) != 4:
            raise GraphError(f"expected 'id x y r', got {line!r}")
        try:
            nid = int(parts[0]) - offset
            x, y, r = (Fraction(p) for p in parts[1:])
        except ValueError:
            raise GraphError(f"unparseable node line {line!r}") from None
        if nid < expected:
            raise GraphError(f"duplicate or out-of-order id {parts[0]}")
        if nid > expected:
            raise GraphError(f"out-of-order id {parts[0]} (expected {expected + offset})")
        nodes.append(DiskNode(nid, x, y, r))
    return build_disk_graph(nodes)
