"""Classical and biomimetic genetic algorithms on bit-string landscapes."""

from .analysis import (ComparisonReport, Histogram, allele_loss_probability, autocorrelation,
                       compare, fixed_zero_loci, gain_probability, generations_to_fix_estimate,
                       histogram)
from .engine import GAConfig, Population, RunTrace, init_population, random_search, run, step
from .genome import (ONE, SIG, ZERO, GeneMap, Segment, decode_extended, diversity, flat,
                     from_literal, hamming, parse, serialize, to_literal)
from .landscapes import Landscape
from .operators import (OperatorConfig, crossover, duplication, inversion, point_mutate,
                        translocation)

__version__ = "0.1.0"
