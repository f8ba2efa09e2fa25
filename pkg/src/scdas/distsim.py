"""Synchronous-round simulation of the two distributed protocols.

Sends made in round t are delivered at the end of round t.  Counts in a
:class:`RoundTrace` are per-arc deliveries.  Multi-hop traffic (accepts
travelling back to a source, LDHD state updates that must reach an
in-neighbour over a directed path) is delivered by flooding, and its cost
is computed from BFS layers: a flood of radius R from s costs, in its j-th
round, the out-degree sum of the nodes at distance j-1 from s.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .approx import Connector, connector_degree_cap, compute_mis
from .graph import (Digraph, DiskGraph, GraphError, Solution, Verdict, bfs_distances,
                    bidirectional_subgraph, diameter, is_strongly_connected, validate_scdas)
from .ldhd import Color, select_max_degree
from .graph import mask_strongly_connected

KINDS = ("mis_priority", "mis_decide", "edge_request", "edge_accept", "inform",
         "ldhd_token", "degree_update")

# B per kind: a message may carry at most B * ceil(log2 n) bits.  Priorities
# are fixed 64-bit draws, which is O(1) and so within O(log n).
SIZE_FACTOR = {
    "mis_priority": 65,
    "mis_decide": 1,
    "edge_request": 3,
    "edge_accept": 4,
    "inform": 2,
    "ldhd_token": 2,
    "degree_update": 4,
}


class MessageSizeError(AssertionError):
    pass


def id_bits(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


@dataclass(frozen=True)
class Message:
    kind: str
    source: int
    payload: tuple = ()
    size_bits: int = 0


def make_message(n: int, kind: str, source: int, payload: tuple = ()) -> Message:
    b = id_bits(n)
    if kind == "mis_priority":
        size = b + 64
    elif kind == "degree_update":
        size = 2 * b + 2
    else:
        size = b * (1 + len(payload))
    if size > SIZE_FACTOR[kind] * b:
        raise MessageSizeError(f"{kind} message of {size} bits exceeds {SIZE_FACTOR[kind]}*{b}")
    return Message(kind, source, payload, size)


@dataclass(frozen=True)
class EdgeRequestPacket:
    source: int
    inner_ids: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.inner_ids) > 2:
            raise ValueError("edgeRequest packets die after two inner nodes")


@dataclass
class RoundTrace:
    n: int
    messages_per_round: list[Counter] = field(default_factory=list)
    bits_per_round: list[int] = field(default_factory=list)
    max_message_bits: int = 0
    phases: dict[str, int] = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def rounds(self) -> int:
        return len(self.messages_per_round)

    @property
    def mis_end(self) -> int:
        return self.phases["mis_end"]

    @property
    def connect_end(self) -> int:
        return self.phases["connect_end"]

    @property
    def inform_end(self) -> int:
        return self.phases["inform_end"]

    def new_round(self) -> int:
        self.messages_per_round.append(Counter())
        self.bits_per_round.append(0)
        return len(self.messages_per_round) - 1

    def ensure(self, upto: int):
        while self.rounds <= upto:
            self.new_round()

    def send(self, rnd: int, msg: Message, deliveries: int = 1):
        """Record ``deliveries`` copies of ``msg`` in round index ``rnd``."""
        if deliveries <= 0:
            return
        self.ensure(rnd)
        self.messages_per_round[rnd][msg.kind] += deliveries
        self.bits_per_round[rnd] += deliveries * msg.size_bits
        self.max_message_bits = max(self.max_message_bits, msg.size_bits)

    def total_messages(self) -> int:
        return sum(sum(c.values()) for c in self.messages_per_round)

    def dump(self) -> str:
        lines = []
        for i, (counts, bits) in enumerate(zip(self.messages_per_round, self.bits_per_round), 1):
            kc = ",".join(f"{k}={counts[k]}" for k in sorted(counts)) or "-"
            lines.append(f"{i} {kc} {bits}")
        return "".join(line + "\n" for line in lines)


class _Flooder:
    """Cost model for floods over a fixed routing graph."""

    def __init__(self, g: Digraph):
        self.g = g
        self._dist: dict[int, list[int]] = {}

    def dist(self, s: int) -> list[int]:
        if s not in self._dist:
            self._dist[s] = bfs_distances(self.g.out, s)
        return self._dist[s]

    def layer_costs(self, s: int, radius: int) -> list[int]:
        """Deliveries in each of the ``radius`` rounds of a flood from ``s``."""
        costs = [0] * radius
        for x, d in enumerate(self.dist(s)):
            if 0 <= d < radius:
                costs[d] += len(self.g.out[x])
        return costs

    def flood(self, trace: RoundTrace, start: int, s: int, radius: int, msg: Message):
        for j, c in enumerate(self.layer_costs(s, radius)):
            trace.send(start + j, msg, c)


# ---------------------------------------------------------------------------
# approximation protocol


def simulate_approx(g: Digraph, seed: int = 0) -> tuple[Solution, RoundTrace]:
    """MIS rounds, three edgeRequest rounds, then accept/inform over the backbone."""
    if not is_strongly_connected(g):
        raise GraphError("simulate_approx needs a strongly connected graph")
    n = g.n
    trace = RoundTrace(n)
    ug = bidirectional_subgraph(g)
    mis = compute_mis(g, "luby", seed)
    I = mis.members

    # phase 1: one trace round per Luby iteration (priority exchange + join notices)
    live = set(range(n))
    for live_count, joined in mis.history:
        rnd = trace.new_round()
        for v in sorted(live):
            trace.send(rnd, make_message(n, "mis_priority", v, (0,)),
                       sum(1 for w in ug.adj[v] if w in live))
        for v in joined:
            trace.send(rnd, make_message(n, "mis_decide", v),
                       sum(1 for w in ug.adj[v] if w in live))
        for v in joined:
            live.discard(v)
            live.difference_update(ug.adj[v])
    trace.phases["mis_end"] = trace.rounds

    if n == 1:
        trace.phases["connect_end"] = trace.phases["inform_end"] = trace.rounds
        sol = Solution(I, "approx-sim", seed, {"mis": sorted(I), "connectors": []})
        return sol, trace

    # phase 2: edgeRequest flooding, exactly three broadcast rounds
    seen_by_relay: dict[int, set[int]] = {v: set() for v in range(n) if v not in I}
    kept: dict[tuple[int, int], tuple[int, ...]] = {}
    forwards: list[tuple[int, int, int]] = []
    outgoing = [(u, EdgeRequestPacket(u)) for u in sorted(I)]
    for hop in range(3):
        rnd = trace.new_round()
        inbox: dict[int, list[EdgeRequestPacket]] = {}
        for sender, pkt in outgoing:
            trace.send(rnd, make_message(n, "edge_request", pkt.source, pkt.inner_ids),
                       len(g.out[sender]))
            for x in g.out[sender]:
                inbox.setdefault(x, []).append(pkt)
        outgoing = []
        for x in sorted(inbox):
            first: dict[int, tuple[int, ...]] = {}
            for pkt in inbox[x]:
                if pkt.source == x:
                    continue
                cur = first.get(pkt.source)
                if cur is None or pkt.inner_ids < cur:
                    first[pkt.source] = pkt.inner_ids
            for src, inner in sorted(first.items()):
                if x in I:
                    kept.setdefault((src, x), inner)
                elif src not in seen_by_relay[x]:
                    seen_by_relay[x].add(src)
                    if len(inner) < 2 and hop < 2:
                        outgoing.append((x, EdgeRequestPacket(src, inner + (x,))))
                        forwards.append((rnd + 1, x, src))
    trace.phases["connect_end"] = trace.rounds

    connectors = sorted(Connector(u, v, inner) for (u, v), inner in kept.items())
    members = set(I)
    for c in connectors:
        members.update(c.inner)

    # phase 3: each sink floods an accept over the backbone until its source has it.
    # Inner nodes that the flood passes learn their selection by overhearing;
    # any still uninformed are told by the source along the witness path.
    backbone, labels = g.induced(members)
    index = {v: i for i, v in enumerate(labels)}
    flooder = _Flooder(backbone)
    base = trace.rounds
    inform_len = 0
    per_source: dict[int, set[int]] = {}
    for c in connectors:
        if not c.inner:
            continue
        dist = flooder.dist(index[c.v])
        d = dist[index[c.u]]
        if d < 0:
            raise GraphError("backbone does not route accept back to its source")
        flooder.flood(trace, base, index[c.v], d, make_message(n, "edge_accept", c.v, (c.u,) + c.inner))
        done = d
        for j, x in enumerate(c.inner):
            if dist[index[x]] > d:
                trace.send(base + d + j, make_message(n, "inform", c.u, (x,)))
                done = max(done, d + j + 1)
        inform_len = max(inform_len, done)
        per_source.setdefault(c.u, set()).update(c.inner)
    trace.ensure(base + inform_len - 1)
    trace.phases["inform_end"] = trace.rounds

    informed = max((len(s) for s in per_source.values()), default=0)
    trace.notes.update(relay_forwards=forwards, informed_per_source=informed)
    if isinstance(g, DiskGraph):
        k = g.ratio
        trace.notes["inform_cap"] = math.ceil(2 * 49 * k * k)
        trace.notes["inform_tight"] = 2 * k * k
        if informed > trace.notes["inform_cap"]:
            raise AssertionError(f"a source informs {informed} nodes, above the O(k^2) cap")
        trace.notes["inform_tight_exceeded"] = informed > 2 * k * k
        trace.notes["degree_cap"] = connector_degree_cap(k)

    sol = Solution(members, "approx-sim", seed,
                   {"mis": sorted(I), "connectors": [(c.u, c.v, c.inner) for c in connectors],
                    "mis_rounds": mis.rounds})
    verdict = validate_scdas(g, members)
    if verdict is not Verdict.VALID:
        raise AssertionError(f"simulated approximation produced an invalid set ({verdict})")
    return sol, trace


# ---------------------------------------------------------------------------
# LDHD protocol


class _LdhdNode:
    """What one node knows: its own colour/degree and its neighbours' last reported ones."""

    def __init__(self, v: int, g: Digraph):
        self.v = v
        self.color = Color.WHITE
        self.degree = len(g.neighbors(v))
        self.view: dict[int, list] = {}


def simulate_ldhd(g: Digraph) -> tuple[Solution, RoundTrace]:
    """Token-ordered LDHD where every decision reads message-fed local views.

    The token visits white nodes in ascending (degree, id) order.  A turn
    costs: passing the token, gathering neighbour state (a flood out and a
    flood back), announcing the decision, degree updates from the
    neighbours that lost a live neighbour, and forced selections.  Strong
    connectivity of the remaining live set is answered globally, as in the
    sequential version.
    """
    if not is_strongly_connected(g):
        raise GraphError("simulate_ldhd needs a strongly connected graph")
    n = g.n
    trace = RoundTrace(n)
    nodes = [_LdhdNode(v, g) for v in range(n)]
    flooder = _Flooder(g)
    nbrs = [g.neighbors(v) for v in range(n)]
    reach = [max((flooder.dist(v)[w] for w in nbrs[v]), default=0) for v in range(n)]

    def broadcast(senders: list[int], kind: str, payload_of) -> int:
        """Flood each sender's state to all its neighbours; returns rounds used."""
        start = trace.rounds
        length = max((reach[s] for s in senders), default=0)
        for s in senders:
            flooder.flood(trace, start, s, reach[s], make_message(n, kind, s, payload_of(s)))
        for s in senders:
            for w in nbrs[s]:
                nodes[w].view[s] = [nodes[s].color, nodes[s].degree]
        trace.ensure(start + length - 1)
        return length

    if n > 0:
        broadcast(list(range(n)), "degree_update", lambda s: (nodes[s].degree, 0))
    trace.phases["init_end"] = trace.rounds

    holder = None
    turns = 0
    checks = 0
    while True:
        whites = [nd for nd in nodes if nd.color == Color.WHITE]
        if not whites:
            break
        v = min(whites, key=lambda nd: (nd.degree, nd.v)).v
        me = nodes[v]
        turns += 1
        if holder is not None and holder != v:
            d = flooder.dist(holder)[v]
            start = trace.rounds
            for j in range(d):
                trace.send(start + j, make_message(n, "ldhd_token", holder, (v,)))
            trace.ensure(start + d - 1)
        holder = v

        # gather: query out, replies back
        start = trace.rounds
        out_r = reach[v]
        flooder.flood(trace, start, v, out_r, make_message(n, "ldhd_token", v, (v,)))
        trace.ensure(start + out_r - 1)
        back = max((flooder.dist(w)[v] for w in nbrs[v]), default=0)
        start = trace.rounds
        for w in nbrs[v]:
            flooder.flood(trace, start, w, flooder.dist(w)[v],
                          make_message(n, "degree_update", w, (nodes[w].degree, int(nodes[w].color))))
        trace.ensure(start + back - 1)

        live_mask = sum(1 << nd.v for nd in nodes if nd.color != Color.RED)
        rest = live_mask & ~(1 << v)
        checks += 1
        if rest == 0 or not mask_strongly_connected(g, rest):
            me.color = Color.GREEN
            broadcast([v], "degree_update", lambda s: (nodes[s].degree, int(nodes[s].color)))
            continue

        me.color = Color.RED
        # every live neighbour loses v, so their degrees shift together
        view_deg = {w: me.view[w][1] - 1 for w in nbrs[v] if me.view[w][0] != Color.RED}
        picks = []
        for group in (g.inn[v], g.out[v]):
            if any(me.view[w][0] == Color.GREEN or w in picks for w in group):
                continue
            live = [w for w in group if me.view[w][0] != Color.RED]
            pick = select_max_degree(live, view_deg)
            if pick is not None:
                picks.append(pick)
        broadcast([v], "degree_update", lambda s: (nodes[s].degree, int(nodes[s].color)))
        if picks:
            start = trace.rounds
            length = max(flooder.dist(v)[p] for p in picks)
            for p in picks:
                for j in range(flooder.dist(v)[p]):
                    trace.send(start + j, make_message(n, "degree_update", v, (p, int(Color.GREEN))))
            trace.ensure(start + length - 1)
        for p in picks:
            nodes[p].color = Color.GREEN
        losers = [w for w in nbrs[v] if nodes[w].color != Color.RED]
        for w in losers:
            nodes[w].degree -= 1
        broadcast(sorted(set(losers) | set(picks)), "degree_update",
                  lambda s: (nodes[s].degree, int(nodes[s].color)))

        # forced selections, from each white node's own view
        while True:
            forced = set()
            for nd in nodes:
                if nd.color != Color.WHITE:
                    continue
                for group in (g.inn[nd.v], g.out[nd.v]):
                    alive = [w for w in group if nd.view[w][0] != Color.RED]
                    if len(alive) == 1 and nd.view[alive[0]][0] != Color.GREEN:
                        forced.add((nd.v, alive[0]))
            if not forced:
                break
            start = trace.rounds
            length = max(flooder.dist(x)[y] for x, y in forced)
            for x, y in sorted(forced):
                for j in range(flooder.dist(x)[y]):
                    trace.send(start + j, make_message(n, "degree_update", x, (y, int(Color.GREEN))))
            trace.ensure(start + length - 1)
            targets = sorted({y for _, y in forced})
            for y in targets:
                nodes[y].color = Color.GREEN
            broadcast(targets, "degree_update", lambda s: (nodes[s].degree, int(nodes[s].color)))

    trace.phases["turns"] = turns
    trace.phases["end"] = trace.rounds
    trace.notes["checks"] = checks
    members = frozenset(nd.v for nd in nodes if nd.color == Color.GREEN)
    return Solution(members, "ldhd-sim", witness={"turns": turns}), trace


# ---------------------------------------------------------------------------
# reporting


@dataclass
class RoundRow:
    n: int
    diam: int
    mis_rounds: int
    connect_rounds: int
    inform_rounds: int
    total: int


@dataclass
class RoundReport:
    rows: list[RoundRow]
    constants: dict[str, float]

    def to_text(self) -> str:
        lines = ["n diam mis_rounds connect_rounds inform_rounds total"]
        lines += [f"{r.n} {r.diam} {r.mis_rounds} {r.connect_rounds} {r.inform_rounds} {r.total}"
                  for r in self.rows]
        lines += [f"# {k} {v:.4f}" for k, v in sorted(self.constants.items())]
        return "\n".join(lines) + "\n"


def round_bound_report(traces: list[RoundTrace], graphs: list[Digraph]) -> RoundReport:
    if len(traces) != len(graphs):
        raise ValueError("traces and graphs must be aligned")
    rows = []
    for t, g in zip(traces, graphs):
        rows.append(RoundRow(g.n, diameter(g), t.mis_end, t.connect_end - t.mis_end,
                             t.inform_end - t.connect_end, t.rounds))
    constants: dict[str, float] = {}
    per_diam = [r.total / r.diam for r in rows if r.diam > 0]
    per_log = [r.mis_rounds / math.log2(r.n) for r in rows if r.n > 1]
    if per_diam:
        constants["total_per_diam_max"] = max(per_diam)
        constants["total_per_diam_mean"] = sum(per_diam) / len(per_diam)
    if per_log:
        constants["mis_per_log2n_max"] = max(per_log)
        constants["mis_per_log2n_mean"] = sum(per_log) / len(per_log)
    return RoundReport(rows, constants)
