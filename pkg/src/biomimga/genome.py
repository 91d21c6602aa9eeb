"""Genome representations and the segment codec.

Two representations are used throughout the package:

* flat genomes: read-only 1-D ``numpy.uint8`` arrays of 0/1 bits, the
  classical GA individual;
* segmented genomes: tuples of symbols drawn from ``ZERO``, ``ONE`` and
  ``SIG``. A ``SIG`` symbol starts a gene header of ``g`` id symbols
  (big-endian) followed by a payload of bits running up to the next ``SIG``.

Parsing a segmented genome is total: every symbol sequence is valid, and
regions that cannot be read as a gene are simply non-coding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ZERO = 0
ONE = 1
SIG = 2

DEFAULT_ID_WIDTH = 4

_LITERAL = {"0": ZERO, "1": ONE, "S": SIG}
_LITERAL_OUT = {ZERO: "0", ONE: "1", SIG: "S"}


# --------------------------------------------------------------------------
# flat genomes
# --------------------------------------------------------------------------

def flat(bits: Iterable[int]) -> np.ndarray:
    """Build a read-only flat genome from an iterable of 0/1 values."""
    arr = np.array(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("flat genome must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise ValueError("flat genome bits must be 0 or 1")
    arr.setflags(write=False)
    return arr


def random_flat(length: int, rng: np.random.Generator) -> np.ndarray:
    return flat(rng.integers(0, 2, size=length, dtype=np.uint8))


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of positions at which two equal-length genomes differ."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} != {b.size}")
    return int(np.count_nonzero(a != b))


def diversity(pop: Sequence[Sequence[int]]) -> float:
    """Mean pairwise Hamming distance over all unordered pairs.

    Computed per locus from allele counts: a locus with ``c`` ones among
    ``n`` members contributes ``c * (n - c)`` differing pairs.
    """
    n = len(pop)
    if n < 2:
        raise ValueError("diversity needs at least 2 individuals")
    lengths = {len(g) for g in pop}
    if len(lengths) != 1:
        raise ValueError("diversity needs equal-length genomes")
    mat = np.asarray(pop, dtype=np.int64)
    ones = mat.sum(axis=0)
    return float(np.sum(ones * (n - ones))) / (n * (n - 1) / 2)


# --------------------------------------------------------------------------
# segmented genomes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    gene_id: int
    payload: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "payload", tuple(int(b) for b in self.payload))
        if self.gene_id < 0:
            raise ValueError("gene_id must be non-negative")
        if any(b not in (ZERO, ONE) for b in self.payload):
            raise ValueError("payload must contain only 0/1 symbols")


@dataclass(frozen=True)
class ParsedSegment:
    """A segment located in a stream; ``start`` indexes its SIG symbol."""

    gene_id: int
    payload: tuple[int, ...]
    start: int
    shadowed: bool

    @property
    def segment(self) -> Segment:
        return Segment(self.gene_id, self.payload)


@dataclass(frozen=True)
class GeneMap:
    """Parsed view of a segmented genome.

    ``entries`` maps each gene id to the payload of its first occurrence;
    ``segments`` lists every parsed segment in stream order, later copies of
    an id flagged as shadowed.
    """

    entries: dict[int, tuple[int, ...]]
    segments: tuple[ParsedSegment, ...] = field(default=())

    def __len__(self):
        return len(self.entries)

    def as_segments(self) -> list[Segment]:
        return [s.segment for s in self.segments]


def _check_width(g: int) -> None:
    if g < 1:
        raise ValueError(f"id width must be >= 1, got {g}")


def _read_id(symbols: Sequence[int]) -> int:
    value = 0
    for s in symbols:
        value = (value << 1) | int(s)
    return value


def parse(stream: Sequence[int], g: int = DEFAULT_ID_WIDTH) -> GeneMap:
    """Parse a symbol stream into a :class:`GeneMap`.

    Symbols before the first SIG are non-coding. A SIG inside a header
    abandons that header and restarts at the new SIG; a header cut short by
    the end of the stream is non-coding. For duplicate ids the first
    occurrence wins.
    """
    _check_width(g)
    entries: dict[int, tuple[int, ...]] = {}
    segments = []
    n = len(stream)
    i = 0
    while i < n and stream[i] != SIG:
        i += 1
    while i < n:
        # stream[i] is SIG
        header = stream[i + 1:i + 1 + g]
        restart = next((k for k, s in enumerate(header) if s == SIG), None)
        if restart is not None:
            i = i + 1 + restart
            continue
        if len(header) < g:
            break
        j = i + 1 + g
        while j < n and stream[j] != SIG:
            j += 1
        gene_id = _read_id(header)
        payload = tuple(int(s) for s in stream[i + 1 + g:j])
        shadowed = gene_id in entries
        if not shadowed:
            entries[gene_id] = payload
        segments.append(ParsedSegment(gene_id, payload, i, shadowed))
        i = j
    return GeneMap(entries, tuple(segments))


def serialize(segments: Iterable[Segment], g: int = DEFAULT_ID_WIDTH) -> tuple[int, ...]:
    """Emit SIG, the big-endian id and the payload for each segment in order."""
    _check_width(g)
    out: list[int] = []
    for seg in segments:
        if seg.gene_id >= 1 << g:
            raise ValueError(f"gene id {seg.gene_id} does not fit in {g} symbols")
        out.append(SIG)
        out.extend((seg.gene_id >> (g - 1 - k)) & 1 for k in range(g))
        out.extend(seg.payload)
    return tuple(out)


def split_units(stream: Sequence[int], g: int = DEFAULT_ID_WIDTH):
    """Split a stream into a non-coding prefix and self-delimiting units.

    Each unit starts with one complete segment and carries any abandoned
    header fragments that follow it. Units parse identically wherever they
    are placed, so reordering them never changes the segments they hold.
    Fragments before the first complete segment stay in the prefix.

    Returns ``(prefix, units)`` as tuples of symbol tuples.
    """
    stream = tuple(stream)
    gm = parse(stream, g)
    starts = [s.start for s in gm.segments]
    if not starts:
        return stream, ()
    prefix = stream[:starts[0]]
    bounds = starts + [len(stream)]
    units = tuple(stream[bounds[k]:bounds[k + 1]] for k in range(len(starts)))
    return prefix, units


def join_units(prefix: Sequence[int], units: Iterable[Sequence[int]]) -> tuple[int, ...]:
    out = list(prefix)
    for u in units:
        out.extend(u)
    return tuple(out)


def random_segmented(template: Sequence[tuple[int, int]], rng: np.random.Generator,
                     g: int = DEFAULT_ID_WIDTH) -> tuple[int, ...]:
    """Random stream from a template of ``(gene_id, payload_length)`` pairs."""
    segs = [Segment(gid, tuple(int(b) for b in rng.integers(0, 2, size=k)))
            for gid, k in template]
    return serialize(segs, g)


def stream_diversity(pop: Sequence[Sequence[int]]) -> float:
    """Mean pairwise symbol mismatch for segmented streams.

    Shorter streams are padded with a sentinel that matches nothing, so a
    length difference counts as that many mismatches.
    """
    n = len(pop)
    if n < 2:
        raise ValueError("diversity needs at least 2 individuals")
    width = max(len(s) for s in pop)
    mat = np.full((n, width), -1, dtype=np.int8)
    for r, s in enumerate(pop):
        mat[r, :len(s)] = s
    agree = 0
    for sym in (ZERO, ONE, SIG):
        c = np.count_nonzero(mat == sym, axis=0).astype(np.int64)
        agree += int(np.sum(c * (c - 1) // 2))
    pairs = n * (n - 1) // 2
    return (pairs * width - agree) / pairs


# --------------------------------------------------------------------------
# extended genes
# --------------------------------------------------------------------------

def decode_extended_checked(payload: Sequence[int]) -> tuple[float, bool]:
    """Decode an extended gene; returns ``(value, empty)``.

    An empty payload decodes to 0.0 with ``empty`` set.
    """
    k = len(payload)
    if k == 0:
        return 0.0, True
    return float(np.count_nonzero(np.asarray(payload) == ONE)) / k, False


def decode_extended(payload: Sequence[int]) -> float:
    """Fraction of ones in the payload; one flipped bit moves it by 1/k."""
    return decode_extended_checked(payload)[0]


# --------------------------------------------------------------------------
# text literals
# --------------------------------------------------------------------------

def from_literal(text: str) -> tuple[int, ...]:
    """Read a genome literal such as ``"S10 110"`` (whitespace ignored)."""
    out = []
    for ch in text:
        if ch.isspace():
            continue
        try:
            out.append(_LITERAL[ch.upper()])
        except KeyError:
            raise ValueError(f"invalid genome literal character {ch!r}") from None
    return tuple(out)


def to_literal(stream: Sequence[int]) -> str:
    return "".join(_LITERAL_OUT[int(s)] for s in stream)
