"""Exact computations with generalized Wronskians of germs in several variables."""

__version__ = "0.1.0"

from .wordcomb import (
    WordSet,
    canonical_full_set,
    enumerate_full_sets,
    is_admissible,
    is_full,
    set_stats,
)
from .polyring import Polynomial, TruncatedSeries, parse_poly, format_poly
from .jetdiff import DiffPoly
from .wronskian import WronskianCombination, eval_wronskian, is_geometric
from .dependence import decide, distinct_order_reduction, independence_witness, rank_oracle
from .vandermonde import eval_V, eval_V_tilde, zero_set_certify
from .fermat import FermatConfig

__all__ = [
    "WordSet", "canonical_full_set", "enumerate_full_sets", "is_admissible", "is_full",
    "set_stats", "Polynomial", "TruncatedSeries", "parse_poly", "format_poly", "DiffPoly",
    "WronskianCombination", "eval_wronskian", "is_geometric", "decide",
    "distinct_order_reduction", "independence_witness", "rank_oracle", "eval_V",
    "eval_V_tilde", "zero_set_certify", "FermatConfig",
]
