"""Variation operators.

Point mutation and crossover work on both representations; inversion,
translocation and duplication rearrange whole segments of a segmented
genome. Every operator is a pure function of its inputs and the
``numpy.random.Generator`` passed in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .genome import DEFAULT_ID_WIDTH, ONE, SIG, ZERO, flat, join_units, parse, split_units

CROSSOVER_KINDS = ("one_point_flat", "uniform_flat", "one_point_stream", "segment_aligned")
FLAT_KINDS = ("one_point_flat", "uniform_flat")


@dataclass(frozen=True)
class OperatorConfig:
    """Operator rates.

    ``p_m`` and ``p_sig`` are per-symbol probabilities; the three macro rates
    are per-offspring probabilities of applying that operator once.
    """

    p_m: float = 0.0
    p_sig: float = 0.0
    crossover_kind: str = "one_point_flat"
    p_inversion: float = 0.0
    p_translocation: float = 0.0
    p_duplication: float = 0.0
    id_width: int = DEFAULT_ID_WIDTH

    def __post_init__(self):
        for name in ("p_m", "p_sig", "p_inversion", "p_translocation", "p_duplication"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.p_m + self.p_sig > 1.0:
            raise ValueError("p_m + p_sig must not exceed 1")
        if self.crossover_kind not in CROSSOVER_KINDS:
            raise ValueError(f"crossover_kind must be one of {CROSSOVER_KINDS}, "
                             f"got {self.crossover_kind!r}")
        if self.id_width < 1:
            raise ValueError("id_width must be >= 1")


def is_flat(genome) -> bool:
    return isinstance(genome, np.ndarray)


def point_mutate(genome, cfg: OperatorConfig, rng: np.random.Generator):
    """Independent per-symbol mutation; length is preserved.

    Flat genomes flip each bit with probability ``p_m``. In segmented
    genomes a bit flips with ``p_m`` or turns into SIG with ``p_sig``, and a
    SIG turns into a random bit with ``p_sig``.
    """
    if is_flat(genome):
        if cfg.p_m == 0.0:
            return genome
        mask = rng.random(genome.size) < cfg.p_m
        return flat(genome ^ mask.astype(np.uint8))

    if cfg.p_m == 0.0 and cfg.p_sig == 0.0:
        return tuple(genome)
    sym = np.asarray(genome, dtype=np.int8)
    u = rng.random(sym.size)
    coin = rng.integers(0, 2, size=sym.size, dtype=np.int8)
    out = sym.copy()
    is_bit = sym != SIG
    flip = is_bit & (u < cfg.p_m)
    to_sig = is_bit & (u >= cfg.p_m) & (u < cfg.p_m + cfg.p_sig)
    from_sig = ~is_bit & (u < cfg.p_sig)
    out[flip] = 1 - sym[flip]
    out[to_sig] = SIG
    out[from_sig] = coin[from_sig]
    return tuple(int(s) for s in out)


def _segment_boundaries(stream, g):
    gm = parse(stream, g)
    return [s.start for s in gm.segments] + [len(stream)]


def crossover(a, b, cfg: OperatorConfig, rng: np.random.Generator, cut: int | None = None):
    """Produce one offspring from two parents.

    ``cut`` pins the cut index of ``one_point_flat`` (used by tests and
    reproductions); otherwise it is drawn uniformly from ``[1, L-1]``.
    Identical parents always yield an exact copy.
    """
    kind = cfg.crossover_kind
    if kind in FLAT_KINDS:
        if not (is_flat(a) and is_flat(b)):
            raise TypeError(f"{kind} crossover needs flat genomes")
        if a.size != b.size:
            raise ValueError(f"length mismatch: {a.size} != {b.size}")
        if np.array_equal(a, b) or a.size < 2:
            return a
        if kind == "one_point_flat":
            if cut is None:
                cut = int(rng.integers(1, a.size))
            return flat(np.concatenate([a[:cut], b[cut:]]))
        pick = rng.random(a.size) < 0.5
        return flat(np.where(pick, a, b))

    if is_flat(a) or is_flat(b):
        raise TypeError(f"{kind} crossover needs segmented genomes")
    a = tuple(a)
    b = tuple(b)
    if a == b:
        return a
    if kind == "one_point_stream":
        ca = int(rng.integers(0, len(a) + 1))
        cb = int(rng.integers(0, len(b) + 1))
    else:
        ba = _segment_boundaries(a, cfg.id_width)
        bb = _segment_boundaries(b, cfg.id_width)
        ca = ba[int(rng.integers(len(ba)))]
        cb = bb[int(rng.integers(len(bb)))]
    return a[:ca] + b[cb:]


def inversion(genome, rng: np.random.Generator, g: int = DEFAULT_ID_WIDTH):
    """Reverse the order of a random contiguous run of at least two segments."""
    prefix, units = split_units(genome, g)
    m = len(units)
    if m < 2:
        return tuple(genome)
    i, j = sorted(int(x) for x in rng.choice(m, size=2, replace=False))
    units = units[:i] + units[i:j + 1][::-1] + units[j + 1:]
    return join_units(prefix, units)


def translocation(genome, rng: np.random.Generator, g: int = DEFAULT_ID_WIDTH):
    """Move a random run of whole segments to a random segment boundary."""
    prefix, units = split_units(genome, g)
    m = len(units)
    if m < 2:
        return tuple(genome)
    length = int(rng.integers(1, m))
    start = int(rng.integers(0, m - length + 1))
    run = units[start:start + length]
    rest = units[:start] + units[start + length:]
    at = int(rng.integers(0, len(rest) + 1))
    return join_units(prefix, rest[:at] + run + rest[at:])


def duplication(genome, rng: np.random.Generator, g: int = DEFAULT_ID_WIDTH):
    """Copy one segment and insert the copy at a boundary after the original.

    The copy carries only the segment itself, never trailing non-coding
    fragments, so the stream grows by exactly its serialized length.
    """
    prefix, units = split_units(genome, g)
    m = len(units)
    if m < 1:
        return tuple(genome)
    i = int(rng.integers(0, m))
    seg = parse(units[i], g).segments[0]
    copy = units[i][:1 + g + len(seg.payload)]
    at = int(rng.integers(i + 1, m + 1))
    return join_units(prefix, units[:at] + (copy,) + units[at:])


def apply_macro(genome, cfg: OperatorConfig, rng: np.random.Generator):
    """Apply each macro-operator once with its configured probability."""
    if is_flat(genome):
        return genome
    g = cfg.id_width
    if cfg.p_inversion and rng.random() < cfg.p_inversion:
        genome = inversion(genome, rng, g)
    if cfg.p_translocation and rng.random() < cfg.p_translocation:
        genome = translocation(genome, rng, g)
    if cfg.p_duplication and rng.random() < cfg.p_duplication:
        genome = duplication(genome, rng, g)
    return genome


__all__ = [
    "CROSSOVER_KINDS", "OperatorConfig", "point_mutate", "crossover", "inversion",
    "translocation", "duplication", "apply_macro", "ZERO", "ONE", "SIG",
]
