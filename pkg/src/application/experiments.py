"""
Monte Carlo experiments on G(n, p) and the limiting formulas they are
compared against.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln
from scipy.stats import binomtest, norm

from src.application.graph_service import (components, count_cycles_up_to,
                                           girth_edge, is_pawful,
                                           tree_vertex_count)
from src.application.homology_service import (compute_homology,
                                              decide_diagonality,
                                              magnitude_from_homology)
from src.application.random_graphs import replay_trial
from src.domain.exceptions import ArgumentError, ContractViolation, DomainError
from src.domain.value_objects import (CycleRow, CycleZeroRow,
                                      DiagonalityCurveRow, ErConfig,
                                      ExperimentResult, PawfulRow,
                                      SummaryStats, TrialRecord, WllnRow)
from src.infrastructure.workers import ordered_map
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_LEVEL = 0.95


# Limiting formulas
def limiting_nondiag_prob(c: float) -> float:
    """lim P(G(n, c/n) is non-diagonal): 1 - sqrt(1-c) exp(c/2 + c^2/4 + c^3/6 + c^4/8) below 1, else 1."""
    if c <= 0:
        raise ArgumentError(f"c must be positive, got {c}")
    if c == 1:
        raise DomainError("the limit is not determined at c = 1")
    if c > 1:
        return 1.0
    return 1.0 - math.sqrt(1.0 - c) * math.exp(c / 2 + c ** 2 / 4 + c ** 3 / 6 + c ** 4 / 8)


def u_of_c_series(c: float, terms: int = 2000) -> Tuple[float, float]:
    """
    Partial sum of u(c) = (1/c) sum_i i^{i-2}/i! (c e^{-c})^i and a bound on
    the tail from the ratio of the last two terms.
    """
    if c < 0:
        raise DomainError(f"c must be positive, got {c}")
    if terms < 1:
        raise ArgumentError(f"terms must be at least 1, got {terms}")
    if c == 0:
        return 1.0, 0.0
    i = np.arange(1, terms + 1, dtype=float)
    log_terms = (i - 2) * np.log(i) - gammaln(i + 1) + i * (math.log(c) - c) - math.log(c)
    values = np.exp(log_terms)
    total = float(values.sum())
    if terms == 1:
        return total, math.inf
    # late terms underflow; take the ratio in log space
    ratio = math.exp(float(log_terms[-1] - log_terms[-2]))
    tail = float(values[-1]) * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
    return total, tail


def u_of_c(c: float, terms: int = 2000) -> float:
    """Limit of the number of components divided by n in G(n, c/n)."""
    return u_of_c_series(c, terms)[0]


def subcritical_nondiag_bound(n: int, p: float) -> Optional[float]:
    """sum_{i >= 3} (np)^i / (2i), the expected number of cycles as n grows; None once np >= 1."""
    c = n * p
    if c >= 1:
        return None
    if c == 0:
        return 0.0
    return -0.5 * math.log1p(-c) - c / 2 - c ** 2 / 4


def poisson_cycle_mean(c: float, i: int) -> float:
    return c ** i / (2 * i)


def expected_cycle_count(n: int, p: float, i: int) -> float:
    """binom(n, i) (i-1)!/2 p^i, the exact mean number of i-cycles in G(n, p)."""
    if i < 3:
        raise ArgumentError(f"cycles have length at least 3, got {i}")
    if i > n:
        return 0.0
    return math.comb(n, i) * math.factorial(i - 1) / 2 * p ** i


def edge_density_moments(n: int, c: float) -> Tuple[float, float]:
    """Mean and variance of #E/n in G(n, c/n)."""
    p = c / n
    return c / 2 * (1 - 1 / n), c / (2 * n) * (1 - 1 / n) * (1 - p)


def binomial_ci(successes: int, trials: int, level: float = DEFAULT_LEVEL) -> Tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    ci = binomtest(successes, trials).proportion_ci(confidence_level=level, method="exact")
    return float(ci.low), float(ci.high)


def summarize(metric: str, values: Sequence[float], level: float = DEFAULT_LEVEL,
              is_frequency: bool = False) -> SummaryStats:
    values = np.asarray(values, dtype=float)
    count = len(values)
    mean = float(values.mean()) if count else 0.0
    variance = float(values.var(ddof=1)) if count > 1 else 0.0
    if is_frequency:
        low, high = binomial_ci(int(round(values.sum())), count, level)
    else:
        half = float(norm.ppf(0.5 + level / 2)) * math.sqrt(variance / count) if count else 0.0
        low, high = mean - half, mean + half
    return SummaryStats(
        metric=metric,
        count=count,
        mean=mean,
        variance=variance,
        ci_low=low,
        ci_high=high,
        level=level,
        is_frequency=is_frequency,
    )


# Trials
@dataclass(frozen=True)
class TrialTask:
    mode: str
    n: int
    p: float
    seed: int
    trial: int
    lmax: int
    max_cycle_length: int


def run_trial(task: TrialTask) -> TrialRecord:
    g = replay_trial(task.n, task.p, task.seed, task.trial)
    decomposition = components(g)
    record = dict(
        trial=task.trial,
        n=g.n,
        edge_count=g.edge_count,
        components=decomposition.count,
        circuit_rank=g.edge_count - g.n + decomposition.count,
        tree_vertices=tree_vertex_count(g, decomposition),
    )
    if task.mode == "sim":
        verdict = decide_diagonality(g, task.lmax)
        cert = verdict.certificate
        if cert.kind == "GirthWitness" and girth_edge(g, cert.edge) != cert.edge_girth:
            raise ContractViolation(f"trial {task.trial}: witness {cert.describe()} does not recheck")
        record.update(verdict=verdict.label, certificate=cert.describe())
    elif task.mode == "cycles":
        record.update(cycle_counts=count_cycles_up_to(g, task.max_cycle_length))
    elif task.mode == "wlln":
        table = compute_homology(g, task.lmax, decomposition=decomposition, workers=1)
        record.update(
            ranks={f"{e.k},{e.length}": e.rank for e in table.entries},
            magnitude=magnitude_from_homology(table).coefficients,
        )
    elif task.mode == "pawful":
        record.update(pawful=is_pawful(g).pawful)
    else:
        raise ArgumentError(f"unknown experiment mode {task.mode!r}")
    return TrialRecord(**record)


def run_trials(cfg: ErConfig, mode: str, lmax: Optional[int] = None,
               workers: Optional[int] = 1) -> List[TrialRecord]:
    tasks = [
        TrialTask(
            mode=mode,
            n=cfg.n,
            p=cfg.edge_probability,
            seed=cfg.seed,
            trial=t,
            lmax=cfg.lmax if lmax is None else lmax,
            max_cycle_length=cfg.max_cycle_length,
        )
        for t in range(cfg.trials)
    ]
    logger.info(f"Running {cfg.trials} {mode} trials at n={cfg.n}, p={cfg.edge_probability:.6g}")
    return ordered_map(run_trial, tasks, workers)


# Experiments
def run_diagonality_experiment(cfg: ErConfig, workers: Optional[int] = 1,
                               level: float = DEFAULT_LEVEL) -> ExperimentResult:
    """Non-diagonal frequency against the limiting formula, unresolved trials kept apart."""
    trials = run_trials(cfg, "sim", workers=workers)
    c = cfg.mean_degree
    nondiagonal = sum(t.verdict == "NonDiagonal" for t in trials)
    unresolved = sum(t.verdict.startswith("DiagonalUpTo") for t in trials)
    resolved = cfg.trials - unresolved
    empirical = nondiagonal / resolved if resolved else 0.0
    low, high = binomial_ci(nondiagonal, resolved, level)
    try:
        limit = limiting_nondiag_prob(c)
    except (ArgumentError, DomainError):
        limit = math.nan
    u = u_of_c(c)
    xi = [t.components / cfg.n for t in trials]
    r = [t.circuit_rank / cfg.n for t in trials]
    if unresolved:
        logger.warning(f"{unresolved} of {cfg.trials} trials unresolved at c={c:.4g}")

    row = DiagonalityCurveRow(
        n=cfg.n,
        c=c,
        trials=cfg.trials,
        nondiagonal=nondiagonal,
        unresolved=unresolved,
        empirical=empirical,
        ci_low=low,
        ci_high=high,
        limit_formula=limit,
        unresolved_fraction=unresolved / cfg.trials,
        subcritical_bound=subcritical_nondiag_bound(cfg.n, cfg.edge_probability),
        xi_over_n=float(np.mean(xi)),
        u_of_c=u,
        r_over_n=float(np.mean(r)),
        r_limit=c / 2 - 1 + u,
    )
    summaries = [
        summarize("nondiagonal", [t.verdict == "NonDiagonal" for t in trials if not t.verdict.startswith("DiagonalUpTo")], level, True),
        summarize("unresolved", [t.verdict.startswith("DiagonalUpTo") for t in trials], level, True),
        summarize("xi_over_n", xi, level),
        summarize("r_over_n", r, level),
    ]
    return ExperimentResult(summaries=summaries, rows=[row], trials=trials)


def run_cycle_experiment(cfg: ErConfig, m: Optional[int] = None, workers: Optional[int] = 1,
                         level: float = DEFAULT_LEVEL) -> ExperimentResult:
    """Cycle counts C_3..C_m against their Poisson limits c^i/(2i)."""
    m = cfg.max_cycle_length if m is None else m
    if m < 3:
        raise ArgumentError(f"maximum cycle length must be at least 3, got {m}")
    if m != cfg.max_cycle_length:
        cfg = cfg.model_copy(update={"max_cycle_length": m})
    trials = run_trials(cfg, "cycles", workers=workers)
    c, p = cfg.mean_degree, cfg.edge_probability
    rows = []
    summaries = []
    for i in range(3, m + 1):
        stats = summarize(f"C_{i}", [t.cycle_counts[i] for t in trials], level)
        summaries.append(stats)
        rows.append(CycleRow(
            n=cfg.n,
            c=c,
            i=i,
            mean=stats.mean,
            standard_error=stats.standard_error,
            poisson_mean=poisson_cycle_mean(c, i),
            finite_n_mean=expected_cycle_count(cfg.n, p, i),
        ))
    for start in (3, 5):
        if start > m:
            continue
        lengths = range(start, m + 1)
        zero = [all(t.cycle_counts[i] == 0 for i in lengths) for t in trials]
        frequency = float(np.mean(zero))
        rows.append(CycleZeroRow(
            n=cfg.n,
            c=c,
            lengths=f"{start}..{m}",
            frequency=frequency,
            standard_error=math.sqrt(frequency * (1 - frequency) / cfg.trials),
            poisson_prediction=math.exp(-sum(poisson_cycle_mean(c, i) for i in lengths)),
        ))
        summaries.append(summarize(f"zero_{start}_{m}", zero, level, True))
    return ExperimentResult(summaries=summaries, rows=rows, trials=trials)


def run_wlln_experiment(cfg: ErConfig, pairs: Sequence[Tuple[int, int]],
                        workers: Optional[int] = 1, level: float = DEFAULT_LEVEL) -> ExperimentResult:
    """rank MH_{k,l}/n against c delta_{k,l}, and chi_l/n against (-1)^l c."""
    if not pairs:
        raise ArgumentError("at least one (k, l) pair is needed")
    for k, length in pairs:
        if not 0 <= k <= length or length < 1:
            raise ArgumentError(f"({k}, {length}) is not a bidegree with 0 <= k <= l, l >= 1")
        if length > cfg.lmax:
            raise ArgumentError(f"pair ({k}, {length}) exceeds lmax={cfg.lmax}")
    top = max(length for _, length in pairs)
    trials = run_trials(cfg, "wlln", lmax=top, workers=workers)
    c = cfg.mean_degree
    rows: List[WllnRow] = []
    summaries: List[SummaryStats] = []

    def add(statistic: str, values: List[float], limit: float):
        stats = summarize(statistic, values, level)
        summaries.append(stats)
        rows.append(WllnRow(
            n=cfg.n,
            c=c,
            statistic=statistic,
            mean=stats.mean,
            standard_error=stats.standard_error,
            ci_low=stats.ci_low,
            ci_high=stats.ci_high,
            limit=limit,
        ))

    for k, length in pairs:
        add(
            f"rank({k},{length})/n",
            [t.ranks.get(f"{k},{length}", 0) / cfg.n for t in trials],
            c if k == length else 0.0,
        )
    for length in range(1, top + 1):
        add(
            f"chi_{length}/n",
            [t.magnitude[length] / cfg.n for t in trials if len(t.magnitude) > length],
            (-1) ** length * c,
        )
    return ExperimentResult(summaries=summaries, rows=rows, trials=trials)


def run_pawful_experiment(cfg: ErConfig, workers: Optional[int] = 1,
                          level: float = DEFAULT_LEVEL) -> ExperimentResult:
    """Frequency of the pawful certificate in G(n, p)."""
    trials = run_trials(cfg, "pawful", workers=workers)
    hits = sum(bool(t.pawful) for t in trials)
    low, high = binomial_ci(hits, cfg.trials, level)
    row = PawfulRow(
        n=cfg.n,
        p=cfg.edge_probability,
        trials=cfg.trials,
        pawful=hits,
        frequency=hits / cfg.trials,
        ci_low=low,
        ci_high=high,
    )
    summary = summarize("pawful", [bool(t.pawful) for t in trials], level, True)
    return ExperimentResult(summaries=[summary], rows=[row], trials=trials)

