import random
from functools import lru_cache

import pytest

from scdas.experiments import desk_side
from scdas.graph import Digraph
from scdas.instances import GenConfig, sample_instance

ACCEPTANCE_LINES: list[str] = []


def random_digraph(n, p, seed):
    rng = random.Random(seed)
    return Digraph.from_arcs(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])


def transitive_closure(g):
    """Boolean reachability matrix by Warshall's algorithm."""
    reach = [[u == v or g.has_arc(u, v) for v in range(g.n)] for u in range(g.n)]
    for k in range(g.n):
        for i in range(g.n):
            if reach[i][k]:
                for j in range(g.n):
                    if reach[k][j]:
                        reach[i][j] = True
    return reach


def hop_distances(g):
    """All-pairs hop distances by Floyd-Warshall."""
    inf = float("inf")
    d = [[0 if u == v else (1 if g.has_arc(u, v) else inf) for v in range(g.n)] for u in range(g.n)]
    for k in range(g.n):
        for i in range(g.n):
            for j in range(g.n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


@lru_cache(maxsize=None)
def desk_instance(n, seed, r_min=200, r_max=600):
    """Strongly connected instance at fixed node density (50 per km^2)."""
    return sample_instance(GenConfig(n, desk_side(n), r_min, r_max, seed)).graph


@pytest.fixture
def record_criterion():
    def record(number, passed, detail=""):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        return line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
