"""Statistics, closed-form allele predictors and method comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import genome as gen
from .engine import (GAConfig, Population, fixed_zero_loci as _fixed_zero_members, iterate,
                     random_search, run)
from .landscapes import Landscape


# --------------------------------------------------------------------------
# histograms and allele bookkeeping
# --------------------------------------------------------------------------

@dataclass
class Histogram:
    bin_width: float
    bins: dict

    @property
    def total(self) -> int:
        return sum(self.bins.values())

    def rows(self):
        return sorted(self.bins.items())


def histogram(samples: Sequence[float], bin_width: float = 1) -> Histogram:
    """Counts per half-open bin ``[k*w, (k+1)*w)``, keyed by lower edge."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    if len(samples) == 0:
        raise ValueError("histogram of an empty sample")
    bins: dict = {}
    for x in samples:
        edge = math.floor(x / bin_width) * bin_width
        bins[edge] = bins.get(edge, 0) + 1
    return Histogram(bin_width, dict(sorted(bins.items())))


def fixed_zero_loci(pop) -> int:
    """Number of loci at which every member of a flat population is 0."""
    members = pop.members if isinstance(pop, Population) else pop
    return _fixed_zero_members(members)


def allele_loss_probability(n: int, L: int) -> float:
    """Probability that some locus is 0 in all ``n`` random individuals.

    ``1 - (1 - 2**-n)**L`` evaluated through log1p/expm1 so that values near
    1e-29 survive.
    """
    if n < 1 or L < 1:
        raise ValueError("n and L must be >= 1")
    return -math.expm1(L * math.log1p(-(2.0 ** -n)))


def gain_probability(k: int, p_m: float) -> float:
    """Chance that one individual flips at least one of ``k`` stuck loci."""
    if k < 0 or not 0.0 <= p_m <= 1.0:
        raise ValueError("need k >= 0 and p_m in [0, 1]")
    if k == 0:
        return 0.0
    if p_m == 1.0:
        return 1.0
    return -math.expm1(k * math.log1p(-p_m))


def generations_to_fix_estimate(p_m: float) -> float:
    """Rough generation count to switch four stuck loci with 10 parents: ``1/(10 p_m)``."""
    if p_m <= 0:
        raise ValueError("p_m must be positive")
    return 1.0 / (10.0 * p_m)


def time_to_fix(cfg: GAConfig, stuck: Sequence[int], max_generations: int = 5000) -> int | None:
    """Generations until the best member reaches the optimum.

    The run starts from clones of the all-ones genome with ``stuck`` loci
    set to 0. Returns ``None`` if the optimum is not reached within
    ``max_generations``. Intended for OneMax-like flat landscapes.
    """
    L = cfg.landscape.L
    bits = np.ones(L, dtype=np.uint8)
    bits[list(stuck)] = 0
    start = Population([gen.flat(bits)] * cfg.population_size)
    target = cfg.landscape.evaluate(np.ones(L, dtype=np.uint8))
    for pop in iterate(replace(cfg, generations=max_generations + 1), start=start):
        if pop.fitnesses.max() >= target:
            return pop.generation
    return None


def simulate_time_to_fix(cfg: GAConfig, stuck: Sequence[int], seeds: Sequence[int],
                         max_generations: int = 5000) -> list[int | None]:
    return [time_to_fix(replace(cfg, seed=s), stuck, max_generations) for s in seeds]


# --------------------------------------------------------------------------
# fitness autocorrelation
# --------------------------------------------------------------------------

@dataclass
class Walk:
    rho: float
    degenerate: bool
    fitness: np.ndarray


def lag1_autocorrelation(series: Sequence[float]) -> tuple[float, bool]:
    """Pearson correlation of consecutive values; constant series give ``(1.0, True)``."""
    x = np.asarray(series, dtype=float)
    a, b = x[:-1], x[1:]
    if a.std() == 0 or b.std() == 0:
        return 1.0, True
    return float(np.corrcoef(a, b)[0, 1]), False


def fitness_walk(landscape: Landscape | Callable, T: int, rng: np.random.Generator,
                 L: int | None = None, segment_template: Sequence[tuple[int, int]] = (),
                 g_width: int = gen.DEFAULT_ID_WIDTH) -> np.ndarray:
    """Fitness along a random walk of ``T`` single-symbol flips (``T + 1`` values).

    Flat genomes flip a uniformly chosen bit; segmented genomes flip a
    uniformly chosen ZERO/ONE symbol and never touch signals.
    """
    evaluate = landscape.evaluate if isinstance(landscape, Landscape) else landscape
    if isinstance(landscape, Landscape) and landscape.representation == "segmented":
        cur = np.array(gen.random_segmented(segment_template, rng, landscape.g_width), dtype=np.int8)
        positions = np.flatnonzero(cur != gen.SIG)
        if positions.size == 0:
            raise ValueError("segmented walk needs at least one payload or id bit")
        picks = positions[rng.integers(0, positions.size, size=T)]
        as_genome = lambda a: tuple(a.tolist())
    else:
        if L is None:
            L = landscape.L
        cur = rng.integers(0, 2, size=L, dtype=np.uint8)
        picks = rng.integers(0, L, size=T)
        as_genome = None
    out = np.empty(T + 1)
    out[0] = evaluate(as_genome(cur) if as_genome else cur)
    for t, i in enumerate(picks, start=1):
        cur[i] = 1 - cur[i]
        out[t] = evaluate(as_genome(cur) if as_genome else cur)
    return out


def autocorrelation_walk(landscape, T: int, rng: np.random.Generator, **kwargs) -> Walk:
    if T < 1000:
        raise ValueError(f"walk length T must be >= 1000, got {T}")
    series = fitness_walk(landscape, T, rng, **kwargs)
    rho, degenerate = lag1_autocorrelation(series)
    return Walk(rho, degenerate, series)


def autocorrelation(landscape, T: int, rng: np.random.Generator, **kwargs) -> float:
    """Lag-1 fitness autocorrelation of a single-flip random walk."""
    return autocorrelation_walk(landscape, T, rng, **kwargs).rho


# --------------------------------------------------------------------------
# method comparison
# --------------------------------------------------------------------------

METHODS = ("classical", "biomimetic", "random_search")
REPORT_COLUMNS = ("method", "budget", "best", "mean_best", "replicates", "seeds")


@dataclass
class MethodResult:
    method: str
    budget: int
    bests: list[float]
    initial_bests: list[float]
    evaluations: list[int]
    seeds: list[int]

    @property
    def best(self) -> float:
        return max(self.bests)

    @property
    def mean_best(self) -> float:
        return float(np.mean(self.bests))

    @property
    def replicates(self) -> int:
        return len(self.bests)

    def as_row(self):
        return (self.method, self.budget, self.best, self.mean_best, self.replicates,
                " ".join(str(s) for s in self.seeds))


@dataclass
class ComparisonReport:
    rows: list[MethodResult] = field(default_factory=list)

    def __getitem__(self, method: str) -> MethodResult:
        for r in self.rows:
            if r.method == method:
                return r
        raise KeyError(method)

    @property
    def budget(self) -> int:
        return self.rows[0].budget

    def ordering(self) -> list[str]:
        return [r.method for r in sorted(self.rows, key=lambda r: -r.mean_best)]

    def summary(self) -> str:
        lines = [f"{'method':<14}{'budget':>9}{'best':>14}{'mean_best':>14}{'reps':>6}"]
        for r in self.rows:
            lines.append(f"{r.method:<14}{r.budget:>9d}{r.best:>14.6g}{r.mean_best:>14.6g}"
                         f"{r.replicates:>6d}")
        lines.append("observed ordering by mean best: " + " > ".join(self.ordering()))
        return "\n".join(lines)


def _ga_for_budget(cfg: GAConfig, budget: int, init_mode: str) -> GAConfig:
    n = cfg.population_size
    if budget % n:
        raise ValueError(f"budget {budget} is not divisible by population size {n}")
    return replace(cfg, generations=budget // n, init_mode=init_mode)


def compare(classical_cfg: GAConfig, biomimetic_cfg: GAConfig, budget: int,
            replicates: int, seeds: Sequence[int]) -> ComparisonReport:
    """Classical GA, biomimetic GA and random search at one evaluation budget.

    The classical GA starts from a random population, the biomimetic GA from
    clones of one random genome. Replicate ``r`` seeds all three methods with
    ``seeds[r]``.
    """
    if classical_cfg.landscape != biomimetic_cfg.landscape:
        raise ValueError("both GA configs must use the same landscape")
    if len(seeds) < replicates:
        raise ValueError(f"{replicates} replicates need at least that many seeds")
    seeds = [int(s) for s in seeds[:replicates]]
    configs = {
        "classical": _ga_for_budget(classical_cfg, budget, "random"),
        "biomimetic": _ga_for_budget(biomimetic_cfg, budget, "homogeneous"),
    }
    report = ComparisonReport()
    for method, cfg in configs.items():
        res = MethodResult(method, budget, [], [], [], seeds)
        for s in seeds:
            tr = run(replace(cfg, seed=s))
            res.bests.append(tr.best)
            res.initial_bests.append(tr.rows[0].best)
            res.evaluations.append(tr.rows[-1].evaluations)
        report.rows.append(res)
    landscape = classical_cfg.landscape
    res = MethodResult("random_search", budget, [], [], [], seeds)
    for s in seeds:
        sr = random_search(budget, landscape, s, classical_cfg.segment_template)
        res.bests.append(sr.best)
        res.initial_bests.append(float(sr.samples[0]))
        res.evaluations.append(sr.samples.size)
    report.rows.append(res)
    for r in report.rows:
        if any(e != budget for e in r.evaluations):
            raise RuntimeError(f"{r.method} consumed {r.evaluations} evaluations, expected {budget}")
    return report
