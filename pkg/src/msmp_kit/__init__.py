"""Minimal subsets under monotone predicates, computed with QuickXPlain."""

from .core import (
    NO_P_SET,
    SPLITS,
    ConfigurationError,
    EvaluationError,
    InstanceError,
    MinimalPSet,
    NoPSet,
    ProblemInstance,
    QxError,
    get,
    is_minimal_p_set,
    is_p_set,
    qx,
    qx_prime,
    split_half,
    split_prefix,
    split_suffix,
)
from .cnf import (
    CnfFormula,
    McsPredicate,
    MusPredicate,
    SupersetPredicate,
    dpll_sat,
    mcs,
    mus,
    parse_dimacs,
)
from .trace import TraceRecorder, check_invar, check_tree, render_flat, run_traced
from .verification import check_monotone, counting_wrapper, enumerate_minimal_p_sets

__version__ = "0.1.0"
