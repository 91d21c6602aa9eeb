"""Generational GA loop with truncation selection, plus random search.

Generation 0 is the initial population; a run of ``G`` generations
therefore performs ``G - 1`` reproduction steps and exactly ``n * G``
fitness evaluations, all recorded in the trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import genome as gen
from .landscapes import Landscape
from .operators import FLAT_KINDS, OperatorConfig, apply_macro, crossover, point_mutate

INIT_MODES = ("random", "homogeneous")

TRACE_COLUMNS = ("generation", "best", "mean", "min", "fixed_zero_count", "diversity",
                 "evaluations")


@dataclass(frozen=True)
class GAConfig:
    landscape: Landscape
    operators: OperatorConfig = field(default_factory=OperatorConfig)
    population_size: int = 100
    generations: int = 50
    survivor_fraction: float = 0.1
    elitist: bool = True
    init_mode: str = "random"
    seed: int = 0
    # (gene_id, payload_length) pairs; segmented landscapes only
    segment_template: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.generations < 1:
            object.__setattr__(self, "generations", 1)
        if self.population_size < 2:
            raise ValueError(f"population_size must be >= 2, got {self.population_size}")
        if not 0.0 < self.survivor_fraction <= 1.0:
            raise ValueError(f"survivor_fraction must lie in (0, 1], got {self.survivor_fraction}")
        if self.init_mode not in INIT_MODES:
            raise ValueError(f"init_mode must be one of {INIT_MODES}, got {self.init_mode!r}")
        segmented = self.landscape.representation == "segmented"
        if segmented == (self.operators.crossover_kind in FLAT_KINDS):
            raise ValueError(f"crossover_kind {self.operators.crossover_kind!r} does not fit "
                             f"a {self.landscape.representation} landscape")
        if segmented:
            if not self.segment_template:
                raise ValueError("segmented landscapes need a segment_template")
            if self.operators.id_width != self.landscape.g_width:
                raise ValueError("operators id_width must equal landscape g_width")
            for gid, k in self.segment_template:
                if not 0 <= gid < 2 ** self.landscape.g_width or k < 0:
                    raise ValueError(f"bad template entry ({gid}, {k})")

    @property
    def survivors(self) -> int:
        return survivor_count(self.population_size, self.survivor_fraction)


def survivor_count(n: int, tau: float) -> int:
    return min(n, max(2, math.ceil(tau * n)))


@dataclass
class Population:
    members: list
    fitnesses: np.ndarray | None = None
    generation: int = 0

    def __len__(self):
        return len(self.members)

    @property
    def is_flat(self) -> bool:
        return isinstance(self.members[0], np.ndarray)

    def best_index(self) -> int:
        return ranking(self.fitnesses)[0]


@dataclass(frozen=True)
class TraceRow:
    generation: int
    best: float
    mean: float
    min: float
    fixed_zero_count: int | None
    diversity: float
    evaluations: int

    def as_tuple(self):
        return tuple(getattr(self, c) for c in TRACE_COLUMNS)


@dataclass
class RunTrace:
    rows: list[TraceRow]
    final: Population

    @property
    def best(self) -> float:
        return self.rows[-1].best

    def best_genome(self):
        return self.final.members[self.final.best_index()]

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]


def ranking(fitnesses: Sequence[float]) -> list[int]:
    """Indices sorted by fitness descending, ties to the lower index."""
    f = np.asarray(fitnesses)
    return [int(i) for i in np.lexsort((np.arange(f.size), -f))]


def random_genome(cfg: GAConfig, rng: np.random.Generator):
    if cfg.landscape.representation == "flat":
        return gen.random_flat(cfg.landscape.L, rng)
    return gen.random_segmented(cfg.segment_template, rng, cfg.landscape.g_width)


def init_population(cfg: GAConfig, rng: np.random.Generator) -> Population:
    n = cfg.population_size
    if cfg.init_mode == "homogeneous":
        g = random_genome(cfg, rng)
        members = [g] * n
    else:
        members = [random_genome(cfg, rng) for _ in range(n)]
    return Population(members)


def evaluate(pop: Population, landscape: Landscape) -> Population:
    pop.fitnesses = landscape.evaluate_many(pop.members)
    return pop


def step(pop: Population, cfg: GAConfig, rng: np.random.Generator) -> Population:
    """Produce and evaluate the next generation from an evaluated population."""
    n = cfg.population_size
    order = ranking(pop.fitnesses)
    survivors = [pop.members[i] for i in order[:cfg.survivors]]
    ops = cfg.operators
    nxt = []
    if cfg.elitist:
        nxt.append(pop.members[order[0]])
    while len(nxt) < n:
        i, j = rng.choice(len(survivors), size=2, replace=False)
        child = crossover(survivors[i], survivors[j], ops, rng)
        child = point_mutate(child, ops, rng)
        child = apply_macro(child, ops, rng)
        nxt.append(child)
    return evaluate(Population(nxt, generation=pop.generation + 1), cfg.landscape)


def fixed_zero_loci(members) -> int:
    """Loci at which every member carries a 0."""
    mat = np.asarray(members)
    return int(np.count_nonzero(~mat.any(axis=0)))


def _row(pop: Population, evaluations: int) -> TraceRow:
    f = pop.fitnesses
    if pop.is_flat:
        fz = fixed_zero_loci(pop.members)
        div = gen.diversity(pop.members)
    else:
        fz = None
        div = gen.stream_diversity(pop.members)
    return TraceRow(pop.generation, float(f.max()), float(f.mean()), float(f.min()),
                    fz, div, evaluations)


def iterate(cfg: GAConfig, start: Population | None = None):
    """Yield evaluated populations for generations ``0 .. G-1``.

    ``start`` replaces random initialisation, e.g. to continue a finished
    run; its members are re-evaluated as generation 0.
    """
    rng = np.random.default_rng(cfg.seed)
    if start is None:
        pop = init_population(cfg, rng)
    else:
        if len(start) != cfg.population_size:
            raise ValueError("start population size does not match population_size")
        pop = Population(list(start.members))
    pop = evaluate(pop, cfg.landscape)
    yield pop
    for _ in range(cfg.generations - 1):
        pop = step(pop, cfg, rng)
        yield pop


def run(cfg: GAConfig, start: Population | None = None) -> RunTrace:
    """Run the GA; the trace has one row per generation."""
    rows = []
    pop = None
    for pop in iterate(cfg, start):
        rows.append(_row(pop, cfg.population_size * (pop.generation + 1)))
    return RunTrace(rows, pop)


def continue_run(trace: RunTrace, cfg: GAConfig) -> RunTrace:
    """Continue from the final population of ``trace`` with a new config."""
    return run(cfg, start=trace.final)


@dataclass
class SearchResult:
    best: float
    genome: object
    samples: np.ndarray


def random_search(budget: int, landscape: Landscape, seed: int,
                  segment_template: Sequence[tuple[int, int]] = ()) -> SearchResult:
    """Evaluate ``budget`` independent uniform genomes and keep the best."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    if landscape.representation == "flat":
        genomes = rng.integers(0, 2, size=(budget, landscape.L), dtype=np.uint8)
        samples = landscape.evaluate_many(genomes)
        k = int(np.argmax(samples))
        best_genome = gen.flat(genomes[k])
    else:
        if not segment_template:
            raise ValueError("segmented landscapes need a segment_template")
        genomes = [gen.random_segmented(segment_template, rng, landscape.g_width)
                   for _ in range(budget)]
        samples = landscape.evaluate_many(genomes)
        k = int(np.argmax(samples))
        best_genome = genomes[k]
    return SearchResult(float(samples[k]), best_genome, samples)


def with_seed(cfg: GAConfig, seed: int) -> GAConfig:
    return replace(cfg, seed=seed)
