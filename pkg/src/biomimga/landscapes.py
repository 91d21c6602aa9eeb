"""Fitness landscapes.

Each evaluator is a deterministic function of the genome and, where random
tables are involved, of a seed. :class:`Landscape` bundles a kind with its
parameters and offers single and batched evaluation.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .genome import DEFAULT_ID_WIDTH, decode_extended, parse

KINDS = ("onemax", "second_order", "rugged_nk", "random_table", "segmented_sum")


def eval_onemax(genome) -> float:
    return float(np.count_nonzero(np.asarray(genome)))


def relevant_bits(ones: int, c: int, m: int) -> int:
    """Round-half-up of ``ones / c * m`` in exact integer arithmetic."""
    return (2 * ones * m + c) // (2 * c)


def eval_second_order(genome, c: int, m: int) -> float:
    """Controller bits decide how many leading target bits count.

    The first ``c`` bits form an extended gene whose value ``v`` sets
    ``r = round(v * m)``; fitness is the number of ones among the first
    ``r`` of the remaining ``m`` target bits.
    """
    bits = np.asarray(genome)
    if c < 1 or m < 0 or bits.size != c + m:
        raise ValueError(f"layout mismatch: genome length {bits.size} != c + m = {c} + {m}")
    r = relevant_bits(int(np.count_nonzero(bits[:c])), c, m)
    return float(np.count_nonzero(bits[c:c + r]))


def nk_tables(L: int, K: int, seed: int) -> np.ndarray:
    """Per-locus contribution tables, shape ``(L, 2**(K+1))``, uniform in [0, 1)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    if not 0 <= K <= L - 1:
        raise ValueError(f"K must lie in [0, L-1] = [0, {L - 1}], got {K}")
    return np.random.default_rng(seed).random((L, 2 ** (K + 1)))


def nk_indices(bits: np.ndarray, K: int) -> np.ndarray:
    """Table index of each locus: own bit, then K circular right neighbours, big-endian."""
    bits = np.atleast_2d(np.asarray(bits, dtype=np.int64))
    idx = np.zeros_like(bits)
    for j in range(K + 1):
        idx = (idx << 1) | np.roll(bits, -j, axis=1)
    return idx


def eval_rugged_nk(genome, K: int, seed: int, tables: np.ndarray | None = None) -> float:
    bits = np.asarray(genome)
    if tables is None:
        tables = nk_tables(bits.size, K, seed)
    idx = nk_indices(bits, K)[0]
    return float(tables[np.arange(bits.size), idx].mean())


def eval_random_table(genome, seed: int) -> float:
    """Hash of (bits, seed) mapped to [0, 1); neighbouring genomes are unrelated."""
    bits = np.asarray(genome, dtype=np.uint8)
    h = hashlib.blake2b(digest_size=8, key=int(seed).to_bytes(8, "little", signed=False))
    h.update(bits.size.to_bytes(8, "little"))
    h.update(np.packbits(bits).tobytes())
    return (int.from_bytes(h.digest(), "little") >> 11) * 2.0 ** -53


def eval_segmented_sum(stream, weights: Sequence[float], g_width: int = DEFAULT_ID_WIDTH) -> float:
    """Weighted sum of decoded extended genes over the gene map."""
    if len(weights) < 2 ** g_width:
        raise ValueError(f"need {2 ** g_width} weights for id width {g_width}")
    gm = parse(stream, g_width)
    # fsum keeps the result independent of gene order
    return math.fsum(weights[gid] * decode_extended(p) for gid, p in gm.entries.items())


@dataclass(frozen=True)
class Landscape:
    """A configured fitness landscape.

    ``L`` is the flat genome length (derived as ``c + m`` for
    ``second_order``); segmented landscapes use ``g_width`` and ``weights``.
    """

    kind: str
    L: int | None = None
    K: int = 0
    c: int | None = None
    m: int | None = None
    g_width: int = DEFAULT_ID_WIDTH
    weights: tuple[float, ...] | None = None
    seed: int = 0
    _tables: np.ndarray | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown landscape kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "second_order":
            if self.c is None or self.m is None:
                raise ValueError("second_order needs c and m")
            if self.c < 1 or self.m < 0:
                raise ValueError("second_order needs c >= 1 and m >= 0")
            object.__setattr__(self, "L", self.c + self.m)
        elif self.kind == "segmented_sum":
            w = self.weights
            if w is None:
                w = (1.0,) * 2 ** self.g_width
            w = tuple(float(x) for x in w)
            if len(w) != 2 ** self.g_width:
                raise ValueError(f"weights must have {2 ** self.g_width} entries for "
                                 f"g_width={self.g_width}, got {len(w)}")
            object.__setattr__(self, "weights", w)
        else:
            if self.L is None or self.L < 1:
                raise ValueError(f"{self.kind} needs L >= 1")
        if self.kind == "rugged_nk":
            object.__setattr__(self, "_tables", nk_tables(self.L, self.K, self.seed))
            self._tables.setflags(write=False)

    @property
    def representation(self) -> str:
        return "segmented" if self.kind == "segmented_sum" else "flat"

    def evaluate(self, genome) -> float:
        kind = self.kind
        if kind == "onemax":
            return eval_onemax(genome)
        if kind == "second_order":
            return eval_second_order(genome, self.c, self.m)
        if kind == "rugged_nk":
            return eval_rugged_nk(genome, self.K, self.seed, self._tables)
        if kind == "random_table":
            return eval_random_table(genome, self.seed)
        return eval_segmented_sum(genome, self.weights, self.g_width)

    __call__ = evaluate

    def evaluate_many(self, genomes) -> np.ndarray:
        """Evaluate a batch; flat batches on onemax and rugged_nk are vectorised."""
        if self.kind in ("onemax", "rugged_nk") and len(genomes):
            mat = np.asarray(genomes, dtype=np.int64)
            if mat.ndim == 2:
                if self.kind == "onemax":
                    return mat.sum(axis=1).astype(float)
                idx = nk_indices(mat, self.K)
                return self._tables[np.arange(mat.shape[1]), idx].mean(axis=1)
        return np.array([self.evaluate(x) for x in genomes], dtype=float)
