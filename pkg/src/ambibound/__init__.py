"""Join-size upper bounds from one- and two-sided degree moments.

Typical use::

    from ambibound import parse_edge_list, lookup_named_query, compute_bound
    rel = parse_edge_list("graph.txt", symmetrize=True)
    res = compute_bound(lookup_named_query("K3"), rel, "ambidextrous")
    print(res.bound)
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .catalog import (CATALOG_NAMES, QueryGraph, canonical_code, enumerate_connected_graphs,
                      experiment_queries, lookup_named_query, make_query)
from .entropic import (AMBIDEXTROUS, DEXTEROUS, BoundResult, EntropicProgram, Row,
                       build_program, compute_bound, elemental_inequalities, solve_lp,
                       statistics_constraints)
from .errors import (BudgetExceededError, ConfigurationError, EdgeListParseError,
                     EmptyRelationError, UnboundedProgramError)
from .experiment import (ExperimentRow, FitResult, aggregate_geomean, fit_origin_slope,
                         read_csv, run_experiment, write_csv)
from .homcount import DataGraph, count_homomorphisms, cycle_count_via_matrix, estimate_work
from .moments import (GridSpec, MomentGrid, build_grid_from_spec, build_moment_grid,
                      enumerate_claw_pairs, ln_bivariate_moment, ln_dexterous_norm,
                      load_or_build_grid)
from .relation import Relation, parse_edge_list, relation_from_pairs, symmetrize
from .venn import VennCover, VennVerdict, check_cover, refine_single_term, venn_basis

__all__ = [
    "BACKEND", "CATALOG_NAMES", "QueryGraph", "canonical_code", "enumerate_connected_graphs",
    "experiment_queries", "lookup_named_query", "make_query",
    "AMBIDEXTROUS", "DEXTEROUS", "BoundResult", "EntropicProgram", "Row", "build_program",
    "compute_bound", "elemental_inequalities", "solve_lp", "statistics_constraints",
    "BudgetExceededError", "ConfigurationError", "EdgeListParseError", "EmptyRelationError",
    "UnboundedProgramError",
    "ExperimentRow", "FitResult", "aggregate_geomean", "fit_origin_slope", "read_csv",
    "run_experiment", "write_csv",
    "DataGraph", "count_homomorphisms", "cycle_count_via_matrix", "estimate_work",
    "GridSpec", "MomentGrid", "build_grid_from_spec", "build_moment_grid",
    "enumerate_claw_pairs", "ln_bivariate_moment", "ln_dexterous_norm", "load_or_build_grid",
    "Relation", "parse_edge_list", "relation_from_pairs", "symmetrize",
    "VennCover", "VennVerdict", "check_cover", "refine_single_term", "venn_basis",
]
