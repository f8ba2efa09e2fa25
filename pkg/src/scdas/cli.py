"""Command-line entry point: ``scdas <subcommand> ...``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .approx import approx_scdas, cds_dgb
from .baselines import OracleConfig, brute_force_opt, dast, gcma
from .distsim import simulate_approx, simulate_ldhd
from .experiments import (PRESETS, emit_csv, emit_plotdata, parse_spec, preset, run_experiment,
                          with_overrides, write_metadata)
from .graph import GraphError, Verdict, validate_scdas, read_instance, write_instance
from .instances import FIXTURE_NAMES, GenConfig, GenerationError, fixture, sample_instance
from .ldhd import ldhd, trace_text

SOLVERS = ("opt", "ldhd", "dast", "gcma", "approx", "cds-dgb")


def _load(args):
    if getattr(args, "fixture", None):
        return fixture(args.fixture)
    if not args.input:
        raise GraphError("give --in FILE or --fixture NAME")
    return read_instance(Path(args.input).read_text(), one_based=args.one_based)


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", metavar="FILE")
    src.add_argument("--fixture", choices=FIXTURE_NAMES)
    p.add_argument("--one-based", action="store_true", help="instance ids run 1..N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scdas", description="Virtual backbones in disk graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a strongly connected disk-graph instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--side", type=float, default=1000.0)
    p.add_argument("--r-min", type=float, default=200.0)
    p.add_argument("--r-max", type=float, default=600.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-attempts", type=int, default=10_000)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--one-based", action="store_true")

    p = sub.add_parser("solve", help="compute a backbone")
    p.add_argument("--alg", choices=SOLVERS, required=True)
    _add_input(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--oracle-cap", type=int, help="largest set size the oracle may try")
    p.add_argument("--trace", action="store_true", help="print the LDHD step trace")

    p = sub.add_parser("verify", help="check whether a node set is a valid backbone")
    _add_input(p)
    p.add_argument("--set", required=True, help="comma-separated node ids")

    p = sub.add_parser("simulate", help="round-based distributed execution")
    p.add_argument("--alg", choices=("approx", "ldhd"), required=True)
    _add_input(p)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("experiment", help="run a study and write CSV, series and figures")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESETS)
    src.add_argument("--spec", metavar="FILE")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--oracle-cap", type=int)

    p = sub.add_parser("fixtures", help="list built-in instances")
    p.add_argument("--write", metavar="DIR", help="also write the disk-graph fixtures as files")
    return parser


def _env_seed() -> int | None:
    value = os.environ.get("SCDAS_SEED")
    return int(value) if value else None


def cmd_generate(args) -> int:
    seed = args.seed if args.seed is not None else (_env_seed() or 0)
    cfg = GenConfig(args.n, args.side, args.r_min, args.r_max, seed, args.max_attempts)
    sample = sample_instance(cfg)
    text = write_instance(sample.graph, one_based=args.one_based)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"attempts {sample.attempts}", file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    g = _load(args)
    trace = None
    if args.alg == "opt":
        sol = brute_force_opt(g, OracleConfig(size_cap=args.oracle_cap))
    elif args.alg == "ldhd":
        sol, trace = ldhd(g)
    elif args.alg == "dast":
        sol = dast(g)
    elif args.alg == "gcma":
        sol = gcma(g)
    elif args.alg == "approx":
        sol = approx_scdas(g, "greedy" if args.seed is None else "luby", args.seed)
    else:
        sol = cds_dgb(g, args.seed)
    verdict = validate_scdas(g, sol.members)
    sys.stdout.write(sol.to_text())
    print(f"size {len(sol)}")
    print(f"verdict {verdict}")
    if args.trace and trace is not None:
        sys.stdout.write(trace_text(trace))
    return 0 if verdict is Verdict.VALID else 1


def cmd_verify(args) -> int:
    g = _load(args)
    members = [int(x) for x in args.set.replace(" ", "").split(",") if x]
    if args.one_based:
        members = [m - 1 for m in members]
    verdict = validate_scdas(g, members)
    print(verdict)
    return 0 if verdict is Verdict.VALID else 1


def cmd_simulate(args) -> int:
    g = _load(args)
    if args.alg == "approx":
        sol, trace = simulate_approx(g, args.seed)
    else:
        sol, trace = simulate_ldhd(g)
    sys.stdout.write(sol.to_text())
    print(f"size {len(sol)}")
    print(f"rounds {trace.rounds}")
    print("phases " + " ".join(f"{k}={v}" for k, v in trace.phases.items()))
    print(f"max_message_bits {trace.max_message_bits}")
    sys.stdout.write(trace.dump())
    return 0 if validate_scdas(g, sol.members) is Verdict.VALID else 1


def cmd_experiment(args) -> int:
    spec = preset(args.preset) if args.preset else parse_spec(Path(args.spec).read_text())
    seed = args.seed if args.seed is not None else _env_seed()
    spec = with_overrides(spec, reps=args.reps, seed=seed, oracle_cap=args.oracle_cap)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failures: list = []
    rows = run_experiment(spec, failures)
    csv_path = out / f"{spec.name}.csv"
    csv_path.write_text(emit_csv(rows))
    paths = [csv_path] + emit_plotdata(rows, out, spec.kind)
    paths.append(write_metadata(spec, failures, out / f"{spec.name}.meta"))
    for p in paths:
        print(p)
    for param, msg in failures:
        print(f"grid point {param} failed: {msg}", file=sys.stderr)
    return 0


def cmd_fixtures(args) -> int:
    for name in FIXTURE_NAMES:
        g = fixture(name)
        print(f"{name} n={g.n} arcs={g.num_arcs}")
        if args.write and hasattr(g, "nodes"):
            Path(args.write).mkdir(parents=True, exist_ok=True)
            (Path(args.write) / f"{name}.txt").write_text(write_instance(g))
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "experiment": cmd_experiment,
    "fixtures": cmd_fixtures,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (GraphError, GenerationError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
