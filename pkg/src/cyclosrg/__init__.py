"""Strongly regular Cayley graphs from cyclotomic classes and index-4 Gauss sums."""
from .config import Budgets, BudgetExceeded
from .field import FieldElement, FieldSpec, build_field
from .cyclotomy import (ConnectionSet, CycInt, TraceHistogram, gauss_periods,
                        restricted_eigenvalues, trace_histogram)
from .quartic import (Index4Error, Undecided, classify_srg, eta_values, predicted_spectrum,
                      quartic_decomposition, solve_m_system)
from .srg import SrgParams, brute_force_check, build_cayley, family_params, spectral_check
from .search import search_pairs
from .pipeline import verify

__version__ = "0.1.0"
