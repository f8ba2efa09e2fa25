"""Seeded random disk-graph instances and the built-in test fixtures.

Random draws come from numpy's ``Generator`` over the PCG64 bit generator,
seeded with the 64-bit ``GenConfig.seed``.  Per attempt the stream is read
in a fixed order: ``2n`` uniforms for positions (x then y, ascending id),
then ``n`` uniforms for ranges (ascending id).  Failed attempts keep
consuming the same stream, so a seed pins the whole rejection sequence.
Coordinates and ranges are quantised to micrometres and stored as exact
decimal fractions so instance files round-trip bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Digraph, DiskGraph, DiskNode, build_disk_graph, is_strongly_connected

_QUANTUM = 10**6


class GenerationError(RuntimeError):
    def __init__(self, attempts: int, cfg: "GenConfig"):
        super().__init__(f"no strongly connected instance after {attempts} attempts "
                         f"(n={cfg.n}, side={cfg.area_side}, r in [{cfg.r_min}, {cfg.r_max}], "
                         f"seed={cfg.seed})")
        self.attempts = attempts


@dataclass(frozen=True)
class GenConfig:
    n: int
    area_side: float
    r_min: float
    r_max: float
    seed: int = 0
    max_attempts: int = 10_000

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.area_side <= 0:
            raise ValueError("area_side must be positive")
        if not 0 < self.r_min <= self.r_max:
            raise ValueError("need 0 < r_min <= r_max")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class Sample:
    graph: DiskGraph
    attempts: int

    @property
    def discards(self) -> int:
        return self.attempts - 1


def _quantise(value: float) -> Fraction:
    return Fraction(round(value * _QUANTUM), _QUANTUM)


def _draw(cfg: GenConfig, rng: np.random.Generator) -> DiskGraph:
    pos = rng.random(2 * cfg.n) * cfg.area_side
    ranges = cfg.r_min + rng.random(cfg.n) * (cfg.r_max - cfg.r_min)
    nodes = []
    for i in range(cfg.n):
        # quantisation can push r_min-sized draws to zero only for r_min < 5e-7
        r = max(_quantise(ranges[i]), Fraction(1, _QUANTUM))
        nodes.append(DiskNode(i, _quantise(pos[2 * i]), _quantise(pos[2 * i + 1]), r))
    return build_disk_graph(nodes)


def sample_instance(cfg: GenConfig) -> Sample:
    """Rejection-sample a strongly connected instance, reporting the attempt count."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    for attempt in range(1, cfg.max_attempts + 1):
        g = _draw(cfg, rng)
        if is_strongly_connected(g):
            return Sample(g, attempt)
    raise GenerationError(cfg.max_attempts, cfg)


def generate_instance(cfg: GenConfig) -> DiskGraph:
    return sample_instance(cfg).graph


def _disk(*spec: tuple) -> DiskGraph:
    return build_disk_graph([DiskNode(i, *map(Fraction, t)) for i, t in enumerate(spec)])


def _fixtures() -> dict[str, Digraph]:
    return {
        # arcs 0->1, 1->0, 1->2, 2->1, 2->0
        "i1_mixed": _disk((0, 0, 1), (1, 0, 1), (1, 1, "1.5")),
        # not realisable as a disk graph, so kept abstract
        "dicycle3": Digraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)]),
        "bipath3": _disk((0, 0, 1), (1, 0, 1), (2, 0, 1)),
        "star5": _disk((0, 0, 1), (1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)),
        "k3": _disk((0, 0, 2), (1, 0, 2), (0, 1, 2)),
    }


FIXTURE_NAMES = ("i1_mixed", "dicycle3", "bipath3", "star5", "k3")


def fixture(name: str) -> Digraph:
    """Hand-built instance by name; all are DiskGraphs except ``dicycle3``."""
    table = _fixtures()
    if name not in table:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
    return table[name]
