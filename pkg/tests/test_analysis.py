import itertools

import numpy as np
import pytest
from mpmath import mp, mpf

from biomimga.analysis import (_ga_for_budget, allele_loss_probability, autocorrelation, autocorrelation_walk,
                               compare, fixed_zero_loci, gain_probability,
                               generations_to_fix_estimate, histogram, lag1_autocorrelation,
                               simulate_time_to_fix)
from biomimga.engine import GAConfig, Population, random_search
from biomimga.genome import flat
from biomimga.landscapes import Landscape
from biomimga.operators import OperatorConfig


def high_precision_loss(n, L):
    mp.dps = 60
    return float(1 - (1 - mpf(2) ** -n) ** L)


# -- histogram --------------------------------------------------------------

def test_histogram_examples():
    assert histogram([1, 1, 1], 1).bins == {1: 3}
    assert histogram([0.5, 1.5], 1).bins == {0: 1, 1: 1}
    h = histogram([0.1, 0.2, 0.5, 0.74, 1.0], 0.25)
    assert h.bins == {0.0: 2, 0.5: 2, 1.0: 1}


def test_histogram_conserves_counts():
    samples = random_search(5000, Landscape("onemax", L=100), 1).samples
    h = histogram(samples, 1)
    assert h.total == 5000
    assert all(c > 0 for c in h.bins.values())


def test_histogram_errors():
    with pytest.raises(ValueError):
        histogram([], 1)
    with pytest.raises(ValueError):
        histogram([1.0], 0)


# -- fixed-zero loci --------------------------------------------------------

def test_fixed_zero_loci():
    assert fixed_zero_loci([flat([0] * 7)] * 3) == 7
    assert fixed_zero_loci([flat([0] * 7), flat([1] * 7)]) == 0
    # loci 3 and 4 are 0 in both members
    assert fixed_zero_loci(Population([flat([1, 1, 0, 0]), flat([0, 1, 0, 0])])) == 2


# -- closed forms -----------------------------------------------------------

def test_allele_loss_values():
    assert allele_loss_probability(100, 100) == pytest.approx(7.888609052210118e-29, rel=1e-6)
    assert allele_loss_probability(100, 100) == pytest.approx(high_precision_loss(100, 100), rel=1e-12)
    assert allele_loss_probability(10, 100) == pytest.approx(0.0930, abs=1e-4)
    assert allele_loss_probability(1, 1) == 0.5


def test_allele_loss_matches_high_precision_on_grid():
    for n, L in itertools.product([1, 2, 5, 20, 60, 200], [1, 10, 100, 1000]):
        assert allele_loss_probability(n, L) == pytest.approx(high_precision_loss(n, L), rel=1e-12)


def test_allele_loss_monotone():
    for n, L in itertools.product(range(1, 21), range(1, 21)):
        p = allele_loss_probability(n, L)
        assert allele_loss_probability(n + 1, L) < p
        assert allele_loss_probability(n, L + 1) > p


def test_gain_probability_values():
    assert gain_probability(4, 0.001) == pytest.approx(1 - 0.999 ** 4, rel=1e-12)
    assert abs(gain_probability(4, 0.001) - 0.004) <= 6e-6
    assert gain_probability(0, 0.3) == 0.0
    assert gain_probability(0, 1.0) == 0.0
    assert gain_probability(5, 1.0) == 1.0


def test_gain_probability_monotone_and_union_bound():
    ps = [0.0, 1e-4, 1e-3, 0.01, 0.05, 0.1]
    for k, p in itertools.product(range(0, 11), ps):
        g = gain_probability(k, p)
        assert g <= k * p + 1e-15
        assert gain_probability(k + 1, p) >= g
    for k in range(1, 11):
        vals = [gain_probability(k, p) for p in ps]
        assert vals == sorted(vals)


def test_generations_to_fix_estimate():
    assert generations_to_fix_estimate(0.001) == 100
    assert generations_to_fix_estimate(0.01) == pytest.approx(10)
    with pytest.raises(ValueError):
        generations_to_fix_estimate(0)


def test_time_to_fix_same_order_as_estimate():
    cfg = GAConfig(Landscape("onemax", L=100),
                   OperatorConfig(p_m=0.001, crossover_kind="uniform_flat"))
    times = simulate_time_to_fix(cfg, [3, 30, 60, 90], range(50))
    assert None not in times
    est = generations_to_fix_estimate(0.001)
    assert est / 5 <= np.mean(times) <= est * 5


# -- autocorrelation --------------------------------------------------------

@pytest.mark.parametrize("L", [20, 50, 100])
def test_onemax_autocorrelation_is_one_minus_two_over_L(L):
    rho = autocorrelation(Landscape("onemax", L=L), 100000, np.random.default_rng(L))
    assert rho == pytest.approx(1 - 2 / L, abs=0.01)


def test_constant_landscape_is_degenerate():
    walk = autocorrelation_walk(lambda g: 1.0, 1000, np.random.default_rng(0), L=10)
    assert walk.rho == 1.0
    assert walk.degenerate
    assert walk.fitness.size == 1001


def test_walk_length_minimum():
    with pytest.raises(ValueError):
        autocorrelation(Landscape("onemax", L=10), 999, np.random.default_rng(0))


def test_lag1_autocorrelation_of_alternating_series():
    assert lag1_autocorrelation([0, 1] * 50)[0] == pytest.approx(-1.0)


def test_segmented_walk_autocorrelation():
    land = Landscape("segmented_sum", g_width=2, weights=(1, 1, 1, 1))
    walk = autocorrelation_walk(land, 5000, np.random.default_rng(0),
                                segment_template=((0, 8), (1, 8), (2, 8), (3, 8)))
    assert not walk.degenerate
    assert 0.5 < walk.rho < 1.0


# -- compare ----------------------------------------------------------------

def _pair(land, p_m):
    ops = OperatorConfig(p_m=p_m, crossover_kind="uniform_flat")
    return GAConfig(land, ops, population_size=50), GAConfig(land, ops, population_size=50)


def test_compare_onemax_classical_beats_random():
    land = Landscape("onemax", L=64)
    c, b = _pair(land, 1 / 64)
    rep = compare(c, b, 2000, 10, list(range(1, 11)))
    assert rep["classical"].mean_best >= rep["random_search"].mean_best
    assert [r.method for r in rep.rows] == ["classical", "biomimetic", "random_search"]
    for r in rep.rows:
        assert r.evaluations == [2000] * 10
        assert r.budget == 2000


def test_compare_deterministic():
    land = Landscape("rugged_nk", L=24, K=4, seed=1)
    c, b = _pair(land, 0.04)
    a1 = compare(c, b, 1000, 3, [5, 6, 7])
    a2 = compare(c, b, 1000, 3, [5, 6, 7])
    assert [r.as_row() for r in a1.rows] == [r.as_row() for r in a2.rows]
    assert "observed ordering" in a1.summary()


def test_compare_forces_init_modes_and_generations():
    land = Landscape("onemax", L=32)
    c, b = _pair(land, 0.03)
    assert _ga_for_budget(c, 500, "random").generations == 10
    assert _ga_for_budget(b, 500, "homogeneous").init_mode == "homogeneous"
    rep = compare(c, b, 500, 2, [1, 2])
    assert rep["biomimetic"].evaluations == [500, 500]


def test_compare_errors():
    land = Landscape("onemax", L=16)
    c, b = _pair(land, 0.05)
    with pytest.raises(ValueError, match="divisible"):
        compare(c, b, 1010, 2, [1, 2])
    with pytest.raises(ValueError, match="landscape"):
        compare(c, GAConfig(Landscape("onemax", L=17), b.operators), 1000, 2, [1, 2])
    with pytest.raises(ValueError, match="seeds"):
        compare(c, b, 1000, 3, [1, 2])
