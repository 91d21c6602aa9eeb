"""Command-line experiment harness.

Subcommands: ``run``, ``fig1``, ``fig2``, ``autocorr`` and ``compare``.
Exit status is 0 on success, 1 on invalid input and 2 on I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis
from .config import DEFAULT_SEEDS, ConfigError, load, parse_seeds, parse_template
from .engine import TRACE_COLUMNS, GAConfig, random_search, run
from .landscapes import KINDS, Landscape
from .operators import CROSSOVER_KINDS, OperatorConfig

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

HIST_COLUMNS = ("bin", "count")
FIG2_COLUMNS = ("generation", "phase", "p_m", "best", "mean", "min", "fixed_zero_count")
SIDECAR_COLUMNS = ("quantity", "n", "L", "k", "p_m", "value")
WALK_COLUMNS = ("step", "fitness")

FIG1_L = 100
FIG1_N = 100
FIG1_G = 50
FIG1_BUDGET = 5000


class UsageError(Exception):
    pass


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return int(v)
    return v


def write_csv(path: str | Path, header, rows) -> Path:
    """Write a CSV atomically: temp file in the target directory, then rename."""
    path = Path(path)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(buf.getvalue())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _out_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _seeds(args, default=DEFAULT_SEEDS) -> tuple[int, ...]:
    if getattr(args, "seeds", None):
        try:
            seeds = parse_seeds(args.seeds)
        except ValueError:
            raise UsageError(f"--seeds: cannot read {args.seeds!r}") from None
        if not seeds:
            raise UsageError("--seeds: empty list")
        return seeds
    if getattr(args, "seed", None) is not None:
        return (args.seed,)
    return tuple(default)


def _plot(path: Path, draw) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    draw(ax)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# --------------------------------------------------------------------------
# run
# --------------------------------------------------------------------------

def cmd_run(args) -> int:
    cfg = load(args.config, mode="run")
    ga = cfg.ga
    if args.seed is not None:
        ga = replace(ga, seed=args.seed)
    out = _out_dir(args.out or cfg.out_dir)
    trace = run(ga)
    path = write_csv(out / cfg.trace_name, TRACE_COLUMNS, (r.as_tuple() for r in trace.rows))
    if args.plot:
        gens = trace.column("generation")
        _plot(path.with_suffix(".svg"), lambda ax: (
            ax.plot(gens, trace.column("best"), label="best"),
            ax.plot(gens, trace.column("mean"), label="mean"),
            ax.plot(gens, trace.column("min"), label="min"),
            ax.set_xlabel("generation"), ax.set_ylabel("fitness"), ax.legend()))
    print(f"final best {trace.best!r}")
    return EXIT_OK


# --------------------------------------------------------------------------
# fig1
# --------------------------------------------------------------------------

def fig1_config(seed: int, p_m: float = 0.0, crossover_kind: str = "uniform_flat") -> GAConfig:
    return GAConfig(Landscape("onemax", L=FIG1_L),
                    OperatorConfig(p_m=p_m, crossover_kind=crossover_kind),
                    population_size=FIG1_N, generations=FIG1_G, survivor_fraction=0.1,
                    elitist=True, init_mode="random", seed=seed)


def cmd_fig1(args) -> int:
    seeds = _seeds(args)
    out = _out_dir(args.out)
    for s in seeds:
        cfg = fig1_config(s, args.pm, args.crossover)
        trace = run(cfg)
        ga_hist = analysis.histogram(trace.final.fitnesses, 1)
        rs = random_search(args.budget, cfg.landscape, s)
        rs_hist = analysis.histogram(rs.samples, 1)
        rs_path = write_csv(out / f"fig1_random_seed{s}.csv", HIST_COLUMNS, rs_hist.rows())
        ga_path = write_csv(out / f"fig1_ga_seed{s}.csv", HIST_COLUMNS, ga_hist.rows())
        if args.plot:
            def draw(ax, rs_hist=rs_hist, ga_hist=ga_hist):
                for h, label in ((rs_hist, "random search"), (ga_hist, "GA final population")):
                    edges, counts = zip(*h.rows())
                    ax.bar(edges, counts, width=1.0, align="edge", alpha=0.7, label=label)
                ax.set_xlabel("fitness (sum of bits)")
                ax.set_ylabel("count")
                ax.legend()
            _plot(out / f"fig1_seed{s}.svg", draw)
        f = trace.final.fitnesses
        print(f"seed {s}: random [{rs.samples.min():g}, {rs.samples.max():g}]  "
              f"GA [{f.min():g}, {f.max():g}]  -> {rs_path.name}, {ga_path.name}")
    return EXIT_OK


# --------------------------------------------------------------------------
# fig2
# --------------------------------------------------------------------------

def cmd_fig2(args) -> int:
    seed = args.seed if args.seed is not None else DEFAULT_SEEDS[0]
    if args.pm <= 0:
        raise UsageError("--pm must be positive")
    out = _out_dir(args.out)
    base = fig1_config(seed, 0.0, args.crossover)
    first = run(base)
    cont_cfg = replace(base, operators=replace(base.operators, p_m=args.pm),
                       generations=args.extra + 1, seed=seed + 1_000_000)
    cont = run(cont_cfg, start=first.final)

    rows = [(r.generation, 1, 0.0, r.best, r.mean, r.min, r.fixed_zero_count) for r in first.rows]
    offset = first.rows[-1].generation
    rows += [(offset + r.generation, 2, args.pm, r.best, r.mean, r.min, r.fixed_zero_count)
             for r in cont.rows[1:]]
    traj = write_csv(out / "fig2_trajectory.csv", FIG2_COLUMNS, rows)

    k_obs = first.rows[-1].fixed_zero_count
    optimum = float(base.landscape.L)
    reached = next((r.generation for r in cont.rows if r.best >= optimum), None)
    side = [
        ("allele_loss_probability", 100, 100, None, None, analysis.allele_loss_probability(100, 100)),
        ("allele_loss_probability", 10, 100, None, None, analysis.allele_loss_probability(10, 100)),
        ("gain_probability", None, None, k_obs, args.pm, analysis.gain_probability(k_obs, args.pm)),
        ("generations_to_fix_estimate", None, None, None, 0.001,
         analysis.generations_to_fix_estimate(0.001)),
        ("observed_fixed_zero_count", FIG1_N, FIG1_L, k_obs, 0.0, k_obs),
        ("observed_generations_to_optimum", FIG1_N, FIG1_L, k_obs, args.pm,
         "" if reached is None else reached),
    ]
    if args.pm != 0.001:
        side.insert(4, ("generations_to_fix_estimate", None, None, None, args.pm,
                        analysis.generations_to_fix_estimate(args.pm)))
    sidecar = write_csv(out / "fig2_predictions.csv", SIDECAR_COLUMNS, side)
    if args.plot:
        gens = [r[0] for r in rows]
        _plot(out / "fig2_trajectory.svg", lambda ax: (
            ax.plot(gens, [r[3] for r in rows], label="best"),
            ax.plot(gens, [r[6] for r in rows], label="fixed-zero loci"),
            ax.axvline(offset, color="grey", linestyle=":"),
            ax.set_xlabel("generation"), ax.legend()))
    print(f"fixed-zero loci after {FIG1_G} generations: {k_obs}; "
          f"optimum reached {'never' if reached is None else f'{reached} generations later'} "
          f"(estimate {analysis.generations_to_fix_estimate(args.pm):g})")
    print(f"wrote {traj.name}, {sidecar.name}")
    return EXIT_OK


# --------------------------------------------------------------------------
# autocorr
# --------------------------------------------------------------------------

def _flag_landscape(args) -> tuple[Landscape, tuple]:
    kind = args.landscape
    template = ()
    try:
        if kind == "second_order":
            land = Landscape(kind, c=args.c, m=args.m, seed=args.landscape_seed)
        elif kind == "segmented_sum":
            template = parse_template(args.segments)
            weights = tuple(float(w) for w in args.weights.split(",")) if args.weights else None
            land = Landscape(kind, g_width=args.g_width, weights=weights, seed=args.landscape_seed)
        else:
            land = Landscape(kind, L=args.L, K=args.K, seed=args.landscape_seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return land, template


def cmd_autocorr(args) -> int:
    if args.T < 1000:
        raise UsageError(f"--T must be >= 1000, got {args.T}")
    land, template = _flag_landscape(args)
    if land.representation == "segmented" and not template:
        raise UsageError("--segments is required for segmented_sum")
    seed = args.seed if args.seed is not None else DEFAULT_SEEDS[0]
    walk = analysis.autocorrelation_walk(land, args.T, np.random.default_rng(seed),
                                         segment_template=template)
    out = _out_dir(args.out)
    path = write_csv(out / f"autocorr_{land.kind}.csv", WALK_COLUMNS, enumerate(walk.fitness))
    flag = "  (constant fitness series)" if walk.degenerate else ""
    print(f"rho(1) = {walk.rho:.6f}{flag}")
    print(f"wrote {path.name}")
    return EXIT_OK


# --------------------------------------------------------------------------
# compare
# --------------------------------------------------------------------------

def cmd_compare(args) -> int:
    cfg = load(args.config, mode="compare")
    seeds = _seeds(args, cfg.seeds)
    replicates = len(seeds) if (args.seeds or args.seed is not None) else cfg.replicates
    report = analysis.compare(cfg.classical, cfg.biomimetic, cfg.budget, replicates, seeds)
    out = _out_dir(args.out or cfg.out_dir)
    path = write_csv(out / "compare.csv", analysis.REPORT_COLUMNS,
                     (r.as_row() for r in report.rows))
    print(report.summary())
    print(f"wrote {path.name}")
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="biomimga", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_default="."):
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--seeds", default=None, help="comma-separated seed list")
        sp.add_argument("--out", default=out_default, help="output directory")
        sp.add_argument("--plot", action="store_true", help="also write SVG plots")

    sp = sub.add_parser("run", help="run one GA from a config file")
    sp.add_argument("--config", required=True)
    common(sp, out_default=None)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("fig1", help="OneMax GA vs random sampling histograms")
    common(sp)
    sp.add_argument("--pm", type=float, default=0.0)
    sp.add_argument("--crossover", choices=CROSSOVER_KINDS[:2], default="uniform_flat")
    sp.add_argument("--budget", type=int, default=FIG1_BUDGET)
    sp.set_defaults(func=cmd_fig1)

    sp = sub.add_parser("fig2", help="convergence, stuck loci and mutation-driven fixing")
    common(sp)
    sp.add_argument("--pm", type=float, default=0.001)
    sp.add_argument("--extra", type=int, default=500, help="continuation generations")
    sp.add_argument("--crossover", choices=CROSSOVER_KINDS[:2], default="uniform_flat")
    sp.set_defaults(func=cmd_fig2)

    sp = sub.add_parser("autocorr", help="lag-1 fitness autocorrelation of a random walk")
    common(sp)
    sp.add_argument("--landscape", choices=KINDS, default="onemax")
    sp.add_argument("--L", type=int, default=100)
    sp.add_argument("--K", type=int, default=0)
    sp.add_argument("--c", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--g-width", type=int, default=4)
    sp.add_argument("--segments", default="", help="segment template, e.g. 0:8,1:8")
    sp.add_argument("--weights", default="", help="comma-separated per-id weights")
    sp.add_argument("--landscape-seed", type=int, default=0)
    sp.add_argument("--T", type=int, default=100_000)
    sp.set_defaults(func=cmd_autocorr)

    sp = sub.add_parser("compare", help="classical GA vs biomimetic GA vs random search")
    sp.add_argument("--config", required=True)
    common(sp, out_default=None)
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        return args.func(args)
    except (ValueError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
