"""Simply normal β-expansions: exact-enclosure arithmetic, β-expansion
enumeration, Thue–Morse component catalogs and a digit-balancing normalizer."""
from .numerics import (
    BETA_KL, BETA_T, EXAMPLE43, GOLDEN, MULTINACCI4, AlgebraicReal, IntPolynomial,
    Interval, PrecisionExhausted, PrecisionReal, Rational, isolate_root, parse_real,
    solve_value_equation,
)
from .words import EPSeq, Word, parse_seq, parse_word, tm_chain
from .expansions import (
    BetaContext, CountLimits, Verdict, count_expansions, enumerate_expansions,
    greedy_expansion, is_univoque_seq, lazy_expansion, pi_beta,
)
from .components import Catalog, build_catalog, locate, phi_map, tm_intervals
from .normalizer import NormalizerConfig, NormalizerState, simply_normal_digits
from .ergodic import frequency_experiment, mbeta_digits

__version__ = "0.1.0"
