"""Exact n(A) for small groups: canonical exhaustive search and a SAT model."""
from .search import (DEFAULT_NODE_BUDGET, SearchBudgetExceeded, SearchResult, SearchStats, compute_nA,
                     exists_zero_sum_free, iter_zero_sum_free, zero_sum_free_extensions)
from .cnf import (SAT_MAX_N, CnfInstance, ModelError, arc_order, decode_model, parse_model, sat_export,
                  sat_import_verify, sat_solve)
from .dpll import DpllBudgetExceeded, dpll
