import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biomimga.genome import (ONE, SIG, ZERO, Segment, decode_extended, decode_extended_checked,
                             diversity, flat, from_literal, hamming, parse, serialize,
                             split_units, stream_diversity, to_literal)

symbols = st.sampled_from([ZERO, ONE, SIG])
bits = st.lists(st.sampled_from([ZERO, ONE]), max_size=12)


def segment_lists(g=4, max_size=8):
    return st.lists(st.builds(Segment, st.integers(0, 2 ** g - 1), bits), max_size=max_size)


# -- parse ------------------------------------------------------------------

def test_parse_single_segment():
    gm = parse(from_literal("S10 110"), 2)
    assert gm.entries == {2: (1, 1, 0)}


def test_parse_ignores_junk_prefix():
    gm = parse(from_literal("01 S01 1"), 2)
    assert gm.entries == {1: (1,)}
    assert gm.segments[0].start == 2


def test_parse_first_occurrence_wins():
    gm = parse(from_literal("S011 S010"), 2)
    assert gm.entries == {1: (1,)}
    assert [s.shadowed for s in gm.segments] == [False, True]
    assert gm.segments[1].payload == (0,)


def test_parse_header_interrupted_by_signal_restarts():
    # S0 is abandoned at the second S; S11 then reads id 3 with payload 0
    gm = parse(from_literal("S0S110"), 2)
    assert gm.entries == {3: (0,)}


def test_parse_truncated_header_is_noncoding():
    assert parse(from_literal("S011S1"), 2).entries == {1: (1,)}
    assert parse(from_literal("S1"), 2).entries == {}


def test_parse_big_endian_ids():
    assert parse(from_literal("S0110"), 4).entries == {6: ()}


def test_parse_empty_and_rejects_bad_width():
    assert parse((), 4).entries == {}
    with pytest.raises(ValueError):
        parse((SIG,), 0)


# -- serialize --------------------------------------------------------------

def test_serialize_examples():
    assert to_literal(serialize([Segment(2, [1, 1, 0])], 2)) == "S10110"
    assert serialize([], 2) == ()
    assert to_literal(serialize([Segment(1, [1]), Segment(1, [0])], 2)) == "S011S010"


def test_serialize_id_overflow():
    with pytest.raises(ValueError):
        serialize([Segment(4, [])], 2)


def test_literal_round_trip():
    text = "01S10110S0"
    assert to_literal(from_literal(text)) == text
    with pytest.raises(ValueError):
        from_literal("S1x")


@settings(max_examples=1000, deadline=None)
@given(segment_lists())
def test_round_trip(segs):
    gm = parse(serialize(segs, 4), 4)
    assert gm.as_segments() == segs


@settings(max_examples=1000, deadline=None)
@given(st.lists(symbols, max_size=500), st.integers(1, 6))
def test_parse_is_total(stream, g):
    gm = parse(stream, g)
    again = parse(serialize(gm.as_segments(), g), g)
    assert again.as_segments() == gm.as_segments()
    assert again.entries == gm.entries


@given(segment_lists(), st.lists(st.sampled_from([ZERO, ONE]), max_size=20))
def test_noncoding_prefix_is_neutral(segs, junk):
    stream = serialize(segs, 4)
    assert parse(tuple(junk) + stream, 4).entries == parse(stream, 4).entries


@given(st.lists(symbols, max_size=200), st.integers(0, 15), bits)
def test_appended_duplicate_is_shadowed(stream, gid, payload):
    base = parse(stream, 4)
    if gid not in base.entries:
        return
    extended = tuple(stream) + serialize([Segment(gid, payload)], 4)
    assert parse(extended, 4).entries == base.entries


@given(st.lists(symbols, max_size=200), st.integers(1, 4))
def test_split_units_reassembles(stream, g):
    prefix, units = split_units(stream, g)
    assert prefix + sum(units, ()) == tuple(stream)
    assert len(units) == len(parse(stream, g).segments)
    for u in units:
        assert len(parse(u, g).segments) == 1


# -- extended genes ---------------------------------------------------------

@pytest.mark.parametrize("payload, value", [
    ([1] * 8, 1.0),
    ([0] * 8, 0.0),
    ([1, 0] * 4, 0.5),
])
def test_decode_extended(payload, value):
    assert decode_extended(payload) == value


def test_decode_extended_empty_is_flagged():
    assert decode_extended_checked(()) == (0.0, True)
    assert decode_extended(()) == 0.0


@pytest.mark.parametrize("k", range(1, 65))
def test_single_flip_moves_extended_value_by_one_over_k(k):
    rng = np.random.default_rng(k)
    for _ in range(20):
        p = rng.integers(0, 2, size=k)
        i = rng.integers(k)
        q = p.copy()
        q[i] ^= 1
        assert abs(decode_extended(q) - decode_extended(p)) == pytest.approx(1 / k, abs=1e-15)


# -- hamming / diversity ----------------------------------------------------

@pytest.mark.parametrize("a, b, d", [("0000", "0000", 0), ("0000", "1111", 4), ("0110", "0101", 2)])
def test_hamming(a, b, d):
    ga, gb = flat(map(int, a)), flat(map(int, b))
    assert hamming(ga, gb) == d == hamming(gb, ga)


def test_hamming_length_mismatch():
    with pytest.raises(ValueError):
        hamming(flat([0, 1]), flat([0]))


def test_diversity_examples():
    g = flat([1, 0, 1, 1])
    assert diversity([g] * 7) == 0.0
    assert diversity([flat([0] * 4), flat([1] * 4)]) == 4.0
    with pytest.raises(ValueError):
        diversity([g])


def test_diversity_matches_pairwise_enumeration():
    rng = np.random.default_rng(0)
    pop = [flat(rng.integers(0, 2, 30)) for _ in range(12)]
    pairs = [hamming(pop[i], pop[j]) for i in range(12) for j in range(i + 1, 12)]
    assert diversity(pop) == pytest.approx(np.mean(pairs))


def test_diversity_of_random_pairs_near_half_length():
    # Monte-Carlo oracle: independent uniform bits differ with probability 1/2
    rng = np.random.default_rng(1)
    d = [diversity([flat(rng.integers(0, 2, 100)), flat(rng.integers(0, 2, 100))])
         for _ in range(1000)]
    assert np.mean(d) == pytest.approx(50.0, abs=1.5)


def test_stream_diversity_pads_length_differences():
    a = from_literal("S01")
    assert stream_diversity([a, a]) == 0.0
    assert stream_diversity([a, from_literal("S0")]) == 1.0
    assert stream_diversity([a, from_literal("S10")]) == 2.0
