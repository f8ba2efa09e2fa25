"""Low-degree elimination, high-degree selection (LDHD).

Nodes start white.  Each step takes the white node of minimum degree and
either keeps it (green) when removing it would break strong connectivity
of the white+green subgraph, or deletes it (red) and makes sure it still
has a green in-neighbour and a green out-neighbour, choosing the highest
degree candidate when it has none.  Degree means the number of distinct
non-red in- or out-neighbours.  Ties go to the smaller id everywhere.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterator

from .graph import Digraph, GraphError, Solution, is_strongly_connected, mask_strongly_connected


class Color(enum.IntEnum):
    WHITE = 0
    GREEN = 1
    RED = 2


@dataclass(frozen=True)
class StepRecord:
    step: int
    v: int
    verdict: str
    u: int | None = None
    w: int | None = None
    forced: tuple[int, ...] = ()

    def to_line(self) -> str:
        parts = [str(self.step), str(self.v), self.verdict]
        if self.u is not None:
            parts.append(f"u={self.u}")
        if self.w is not None:
            parts.append(f"w={self.w}")
        if self.forced:
            parts.append("forced=" + ",".join(map(str, self.forced)))
        return " ".join(parts)


@dataclass(frozen=True)
class LdhdState:
    color: tuple[Color, ...]
    degree: tuple[int, ...]
    step: int = 0
    checks: int = 0
    last: StepRecord | None = field(default=None, compare=False)

    @classmethod
    def initial(cls, g: Digraph) -> "LdhdState":
        return cls((Color.WHITE,) * g.n, tuple(len(g.neighbors(v)) for v in range(g.n)))

    def members(self, *colors: Color) -> frozenset[int]:
        return frozenset(v for v, c in enumerate(self.color) if c in colors)

    @property
    def alive(self) -> frozenset[int]:
        return self.members(Color.WHITE, Color.GREEN)

    def has_white(self) -> bool:
        return Color.WHITE in self.color


def recompute_degrees(g: Digraph, color) -> tuple[int, ...]:
    return tuple(sum(1 for w in g.neighbors(v) if color[w] != Color.RED) for v in range(g.n))


def select_min_white(state: LdhdState) -> int:
    return min((d, v) for v, d in enumerate(state.degree) if state.color[v] == Color.WHITE)[1]


def select_max_degree(candidates, degree) -> int | None:
    """Highest degree, smaller id on ties."""
    return min(candidates, key=lambda x: (-degree[x], x), default=None)


def forced_neighbor_rule(state: LdhdState, g: Digraph) -> tuple[LdhdState, tuple[int, ...]]:
    """Green the sole non-red in- (or out-) neighbour of any white node.

    Applied in ascending id order until nothing changes.  Returns the new
    state and the nodes it turned green.
    """
    color = list(state.color)
    forced: list[int] = []
    changed = True
    while changed:
        changed = False
        for x in range(g.n):
            if color[x] != Color.WHITE:
                continue
            for nbrs in (g.inn[x], g.out[x]):
                alive = [y for y in nbrs if color[y] != Color.RED]
                if len(alive) == 1 and color[alive[0]] != Color.GREEN:
                    color[alive[0]] = Color.GREEN
                    forced.append(alive[0])
                    changed = True
    if not forced:
        return state, ()
    return replace(state, color=tuple(color)), tuple(forced)


def ldhd_step(state: LdhdState, g: Digraph) -> LdhdState:
    if not state.has_white():
        raise GraphError("no white node left")
    v = select_min_white(state)
    alive_mask = sum(1 << x for x in state.alive)
    rest = alive_mask & ~(1 << v)
    # an empty remainder cannot carry a backbone, so the last live node stays
    removable = rest != 0 and mask_strongly_connected(g, rest)
    step = state.step + 1
    color = list(state.color)
    if not removable:
        color[v] = Color.GREEN
        record = StepRecord(step, v, "green")
        return LdhdState(tuple(color), state.degree, step, state.checks + 1, record)

    color[v] = Color.RED
    degree = list(state.degree)
    for x in g.neighbors(v):
        if color[x] != Color.RED:
            degree[x] -= 1
    picks = []
    for nbrs in (g.inn[v], g.out[v]):
        if any(color[x] == Color.GREEN for x in nbrs):
            picks.append(None)
            continue
        pick = select_max_degree([x for x in nbrs if color[x] != Color.RED], degree)
        if pick is None:
            raise GraphError(f"node {v} has no live neighbour to cover it")
        color[pick] = Color.GREEN
        picks.append(pick)
    mid = LdhdState(tuple(color), tuple(degree), step, state.checks + 1)
    after, forced = forced_neighbor_rule(mid, g)
    return replace(after, last=StepRecord(step, v, "red", picks[0], picks[1], forced))


def ldhd_states(g: Digraph) -> Iterator[LdhdState]:
    """Yield the state after every step, starting with the initial one."""
    if not is_strongly_connected(g):
        raise GraphError("LDHD needs a strongly connected graph")
    state = LdhdState.initial(g)
    yield state
    while state.has_white():
        state = ldhd_step(state, g)
        yield state


def ldhd(g: Digraph) -> tuple[Solution, list[StepRecord]]:
    trace = []
    state = None
    for state in ldhd_states(g):
        if state.last is not None:
            trace.append(state.last)
    sol = Solution(state.members(Color.GREEN), "ldhd",
                   witness={"steps": len(trace), "checks": state.checks})
    return sol, trace


def trace_text(trace: list[StepRecord]) -> str:
    return "".join(rec.to_line() + "\n" for rec in trace)
