"""Experiment presets, the batch runner and its CSV / series outputs."""
from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterator

from .approx import approx_scdas
from .baselines import ORACLE_FEASIBLE_N, brute_force_opt, dast, gcma
from .graph import Digraph, Solution, Verdict, validate_scdas
from .instances import GenConfig, GenerationError, Sample, sample_instance
from .ldhd import ldhd

log = logging.getLogger(__name__)

KINDS = ("density_nodes", "density_area", "ratio")
ALGORITHMS: dict[str, Callable[[Digraph], Solution]] = {
    "approx": approx_scdas,
    "dast": dast,
    "gcma": gcma,
    "ldhd": lambda g: ldhd(g)[0],
    "opt": brute_force_opt,
}
PAPER_ALGORITHMS = ("approx", "dast", "gcma", "ldhd")

# Range bounds for the density studies, which do not pin them down.
DEFAULT_R_MIN = 200
DEFAULT_R_MAX = 600


class ExperimentError(RuntimeError):
    pass


@dataclass(frozen=True)
class GridPoint:
    param: float
    n: int
    side: float
    r_min: float
    r_max: float


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    kind: str
    points: tuple[GridPoint, ...]
    reps: int = 100
    seed: int = 0
    algorithms: tuple[str, ...] = PAPER_ALGORITHMS
    oracle_cap: int = ORACLE_FEASIBLE_N
    max_attempts: int = 10_000
    assumptions: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if not self.points:
            raise ValueError("experiment grid is empty")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")

    def active_algorithms(self) -> tuple[str, ...]:
        """Algorithms that will run; a zero oracle cap drops the oracle."""
        algs = tuple(sorted(self.algorithms))
        if self.oracle_cap == 0:
            algs = tuple(a for a in algs if a != "opt")
        return algs


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    param: float
    algorithm: str
    mean: float
    std: float
    reps: int
    discards: int
    seed0: int


def desk_side(n: int) -> int:
    """Square side that keeps node density equal to 50 nodes per km^2."""
    return round(1000 * math.sqrt(n / 50))


_DENSITY_NOTE = f"range bounds [{DEFAULT_R_MIN}, {DEFAULT_R_MAX}] m are assumed"
_UNIFORM_NOTE = "ranges are drawn uniformly from [r_min, r_max]"


def preset(name: str) -> ExperimentSpec:
    lo, hi = DEFAULT_R_MIN, DEFAULT_R_MAX
    if name == "density_nodes":
        pts = [GridPoint(n, n, 1000, lo, hi) for n in range(10, 131, 10)]
        return ExperimentSpec(name, "density_nodes", tuple(pts),
                              assumptions=(_DENSITY_NOTE, _UNIFORM_NOTE))
    if name == "density_area":
        pts = [GridPoint(s, 50, s, lo, hi) for s in range(600, 1401, 200)]
        return ExperimentSpec(name, "density_area", tuple(pts),
                              assumptions=(_DENSITY_NOTE, _UNIFORM_NOTE))
    if name == "ratio_a":
        pts = [GridPoint(1000 / r, 50, 1000, r, 1000) for r in range(200, 1001, 200)]
        return ExperimentSpec(name, "ratio", tuple(pts), assumptions=(_UNIFORM_NOTE,))
    if name == "ratio_b":
        pts = [GridPoint(1200 / r, 100, 1200, r, 1200) for r in range(200, 1201, 200)]
        return ExperimentSpec(name, "ratio", tuple(pts), assumptions=(_UNIFORM_NOTE,))
    if name == "desk_scale":
        pts = [GridPoint(n, n, desk_side(n), lo, hi) for n in range(8, 13)]
        return ExperimentSpec(name, "density_nodes", tuple(pts),
                              algorithms=PAPER_ALGORITHMS + ("opt",),
                              assumptions=(_DENSITY_NOTE, _UNIFORM_NOTE,
                                           "side = round(1000*sqrt(N/50)) keeps node density fixed"))
    raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


PRESETS = ("density_nodes", "density_area", "ratio_a", "ratio_b", "desk_scale")


def _num(text: str) -> float:
    value = float(text)
    return int(value) if value.is_integer() else value


def parse_spec(text: str) -> ExperimentSpec:
    """Read ``key=value`` lines.

    One of ``n``, ``side`` or ``r_min`` may be given as a ``*_values``
    comma list to form the grid; ``side=auto`` scales the square with N.
    """
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        kv[key] = value
    kind = kv.get("kind", "density_nodes")
    lists = [k for k in ("n_values", "side_values", "r_min_values") if k in kv]
    if len(lists) != 1:
        raise ValueError("give exactly one of n_values, side_values, r_min_values")
    axis = lists[0]
    values = [_num(v) for v in kv[axis].split(",") if v.strip()]
    r_max = _num(kv.get("r_max", str(DEFAULT_R_MAX)))
    pts = []
    for val in values:
        n = int(val) if axis == "n_values" else int(kv.get("n", "50"))
        if axis == "side_values":
            side = val
        elif kv.get("side", "1000") == "auto":
            side = desk_side(n)
        else:
            side = _num(kv.get("side", "1000"))
        r_min = val if axis == "r_min_values" else _num(kv.get("r_min", str(DEFAULT_R_MIN)))
        param = {"n_values": n, "side_values": side, "r_min_values": r_max / r_min}[axis]
        pts.append(GridPoint(param, n, side, r_min, r_max))
    algs = tuple(a.strip() for a in kv.get("algorithms", ",".join(PAPER_ALGORITHMS)).split(",") if a.strip())
    return ExperimentSpec(
        name=kv.get("name", kind), kind=kind, points=tuple(pts),
        reps=int(kv.get("reps", "100")), seed=int(kv.get("seed", "0")),
        algorithms=algs, oracle_cap=int(kv.get("oracle_cap", str(ORACLE_FEASIBLE_N))),
        max_attempts=int(kv.get("max_attempts", "10000")))


def with_overrides(spec: ExperimentSpec, reps=None, seed=None, oracle_cap=None) -> ExperimentSpec:
    changes = {k: v for k, v in (("reps", reps), ("seed", seed), ("oracle_cap", oracle_cap)) if v is not None}
    return replace(spec, **changes)


@dataclass
class InstanceRecord:
    point: GridPoint
    seed: int
    attempts: int
    sizes: dict[str, int] = field(default_factory=dict)


def iter_instances(spec: ExperimentSpec, point: GridPoint) -> Iterator[tuple[int, Sample]]:
    for i in range(spec.reps):
        seed = spec.seed + i
        cfg = GenConfig(point.n, point.side, point.r_min, point.r_max, seed, spec.max_attempts)
        yield seed, sample_instance(cfg)


def run_point(spec: ExperimentSpec, point: GridPoint) -> list[InstanceRecord]:
    algs = spec.active_algorithms()
    if "opt" in algs and point.n > spec.oracle_cap:
        raise ExperimentError(f"oracle requested for n={point.n} beyond cap {spec.oracle_cap}")
    records = []
    for seed, sample in iter_instances(spec, point):
        rec = InstanceRecord(point, seed, sample.attempts)
        for alg in algs:
            sol = ALGORITHMS[alg](sample.graph)
            verdict = validate_scdas(sample.graph, sol.members)
            if verdict is not Verdict.VALID:
                raise ExperimentError(f"{alg} produced an invalid backbone ({verdict}) "
                                      f"at {spec.name} param={point.param} seed={seed}")
            rec.sizes[alg] = len(sol)
        records.append(rec)
    return records


def run_experiment(spec: ExperimentSpec, failures: list | None = None,
                   records: list | None = None) -> list[ResultRow]:
    """Average backbone sizes per grid point and algorithm.

    A grid point whose instances cannot be generated is logged, appended to
    ``failures`` as ``(param, message)`` and skipped.
    """
    algs = spec.active_algorithms()
    rows = []
    for point in sorted(spec.points, key=lambda p: p.param):
        try:
            recs = run_point(spec, point)
        except GenerationError as exc:
            log.warning("grid point %s skipped: %s", point.param, exc)
            if failures is not None:
                failures.append((point.param, str(exc)))
            continue
        if records is not None:
            records.extend(recs)
        discards = sum(r.attempts - 1 for r in recs)
        for alg in algs:
            sizes = [r.sizes[alg] for r in recs]
            std = statistics.stdev(sizes) if len(sizes) > 1 else 0.0
            rows.append(ResultRow(spec.name, point.param, alg, statistics.fmean(sizes), std,
                                  len(sizes), discards, spec.seed))
    return rows


def format_param(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else f"{value:.4f}"


CSV_HEADER = "experiment,param,algorithm,mean,std,reps,discards,seed0"


def emit_csv(rows: list[ResultRow]) -> str:
    ordered = sorted(rows, key=lambda r: (r.experiment, r.param, r.algorithm))
    lines = [CSV_HEADER]
    for r in ordered:
        lines.append(f"{r.experiment},{format_param(r.param)},{r.algorithm},{r.mean:.4f},"
                     f"{r.std:.4f},{r.reps},{r.discards},{r.seed0}")
    return "\n".join(lines) + "\n"


def series(rows: list[ResultRow]) -> dict[tuple[str, str], list[ResultRow]]:
    out: dict[tuple[str, str], list[ResultRow]] = {}
    for r in sorted(rows, key=lambda r: (r.experiment, r.algorithm, r.param)):
        out.setdefault((r.experiment, r.algorithm), []).append(r)
    return out


def emit_plotdata(rows: list[ResultRow], out_dir: Path, kind: str | None = None) -> list[Path]:
    """Write one ``param mean std`` file per (experiment, algorithm) and one figure per experiment."""
    from .plotting import plot_experiment

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    grouped = series(rows)
    for (exp, alg), pts in grouped.items():
        path = out_dir / f"{exp}_{alg}.dat"
        path.write_text("".join(f"{format_param(r.param)} {r.mean:.4f} {r.std:.4f}\n" for r in pts))
        paths.append(path)
    for exp in sorted({e for e, _ in grouped}):
        by_alg = {alg: pts for (e, alg), pts in grouped.items() if e == exp}
        paths.append(plot_experiment(exp, by_alg, out_dir / f"{exp}.svg", kind))
    return paths


def write_metadata(spec: ExperimentSpec, failures: list, path: Path) -> Path:
    lines = [f"name={spec.name}", f"kind={spec.kind}", f"reps={spec.reps}", f"seed={spec.seed}",
             f"algorithms={','.join(spec.active_algorithms())}", f"oracle_cap={spec.oracle_cap}",
             f"max_attempts={spec.max_attempts}"]
    for p in spec.points:
        lines.append(f"point param={format_param(p.param)} n={p.n} side={format_param(p.side)} "
                     f"r_min={format_param(p.r_min)} r_max={format_param(p.r_max)}")
    lines += [f"assumption {a}" for a in spec.assumptions]
    lines += [f"failure param={format_param(p)} {msg}" for p, msg in failures]
    path.write_text("\n".join(lines) + "\n")
    return path
