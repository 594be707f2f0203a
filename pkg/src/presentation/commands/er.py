import argparse
import math
from typing import List, Optional, Tuple

from src.adapters.serializers import dumps_json, experiment_csv, trials_csv
from src.application.experiments import (run_cycle_experiment,
                                         run_diagonality_experiment,
                                         run_pawful_experiment,
                                         run_wlln_experiment)
from src.application.random_graphs import dense_regime_p
from src.config import settings
from src.domain.exceptions import ArgumentError
from src.domain.value_objects import ErConfig, ExperimentResult
from src.presentation.commands.common import emit
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

MODES = ("sim", "cycles", "wlln", "pawful")


def parse_grid(tokens: Optional[List[str]]) -> Optional[List[float]]:
    """Values given one by one or as start:stop:step with stop included."""
    if tokens is None:
        return None
    values: List[float] = []
    for token in tokens:
        parts = token.split(":")
        try:
            numbers = [float(part) for part in parts]
        except ValueError:
            raise ArgumentError(f"grid value {token!r} is not a number or a start:stop:step range")
        if len(numbers) == 1:
            values.append(numbers[0])
            continue
        if len(numbers) != 3:
            raise ArgumentError(f"range {token!r} must read start:stop:step")
        start, stop, step = numbers
        if step <= 0 or stop < start:
            raise ArgumentError(f"range {token!r} is empty")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values.extend(round(start + i * step, 12) for i in range(count))
    if any(v < 0 for v in values):
        raise ArgumentError("grid values must be non-negative")
    return values


def parse_pairs(tokens: Optional[List[str]]) -> List[Tuple[int, int]]:
    pairs = []
    for token in tokens or ["1,1", "1,2", "2,2", "2,3"]:
        try:
            k, length = (int(part) for part in token.split(","))
        except ValueError:
            raise ArgumentError(f"pair {token!r} must read k,l")
        pairs.append((k, length))
    return pairs


def register(subparsers, parents):
    parser = subparsers.add_parser("er", help="Monte Carlo experiments on Erdős–Rényi graphs")
    modes = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sub = modes.add_parser(mode, parents=parents)
        sub.add_argument("--n", type=int, nargs="+", required=True, help="vertex counts")
        grid = sub.add_mutually_exclusive_group(required=mode != "pawful")
        grid.add_argument("--c", nargs="+", help="mean degrees c = np, values or start:stop:step")
        grid.add_argument("--p", nargs="+", help="edge probabilities, values or start:stop:step")
        sub.add_argument("--trials", type=int, default=100)
        sub.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        sub.add_argument("--lmax", type=int, default=settings.DEFAULT_LMAX)
        sub.add_argument("--out", help="write the CSV here instead of standard output")
        sub.add_argument("--trials-out", help="also write one row per trial here")
        if mode == "cycles":
            sub.add_argument("--m", type=int, default=8, help="longest cycle length counted")
        if mode == "wlln":
            sub.add_argument("--pairs", nargs="+", help="bidegrees k,l (default 1,1 1,2 2,2 2,3)")
        if mode == "pawful":
            sub.add_argument("--eps", type=float, default=0.5,
                             help="p = ((3 + eps) ln n / n)^(1/3) when no grid is given")
        sub.set_defaults(handler=run)


def build_configs(args: argparse.Namespace) -> List[ErConfig]:
    c_grid, p_grid = parse_grid(args.c), parse_grid(args.p)
    configs = []
    for n in args.n:
        if c_grid is not None:
            points = [{"c": c} for c in c_grid]
        elif p_grid is not None:
            points = [{"p": p} for p in p_grid]
        else:
            points = [{"p": dense_regime_p(n, args.eps)}]
        for point in points:
            configs.append(ErConfig(
                n=n,
                trials=args.trials,
                seed=args.seed,
                lmax=args.lmax,
                max_cycle_length=getattr(args, "m", 8),
                **point,
            ))
    return configs


def run_one(cfg: ErConfig, args: argparse.Namespace) -> ExperimentResult:
    if args.mode == "sim":
        return run_diagonality_experiment(cfg, workers=args.workers)
    if args.mode == "cycles":
        return run_cycle_experiment(cfg, args.m, workers=args.workers)
    if args.mode == "wlln":
        return run_wlln_experiment(cfg, parse_pairs(args.pairs), workers=args.workers)
    return run_pawful_experiment(cfg, workers=args.workers)


def run(args: argparse.Namespace) -> int:
    configs = build_configs(args)
    logger.info(f"Experiment {args.mode} over {len(configs)} configurations")
    results = [(cfg, run_one(cfg, args)) for cfg in configs]

    if args.output_format == "json":
        emit(dumps_json([r.model_dump(mode="json") for _, r in results]), args.out)
    else:
        emit(experiment_csv([row for _, r in results for row in r.rows]), args.out)
    if args.trials_out:
        records = [
            {"c": cfg.mean_degree, "p": cfg.edge_probability, **dict(t)}
            for cfg, r in results
            for t in r.trials
        ]
        emit(trials_csv(records), args.trials_out)
    return 0
