"""thinpath — directed-hypergraph toolkit for the thinnest path problem.

A *hyperpath* is a chain of directed hyperedges whose transmitter hops are
drawn from the previous edge's destination set; its *width* is the number of
distinct vertices it exposes (union of destination sets plus the origin).
This package ships exact and approximate minimum-width solvers, a linear-time
solver for 1-D instances, geometric instance builders, worst-case instance
families, a dominating-set reduction, and a batch experiment harness with a
CLI front end.
"""

from .hypercore import (
    Cover,
    DEFAULT_VERTEX_CAP,
    Hyperedge,
    Hypergraph,
    HypergraphError,
    Hyperpath,
    UnknownEdgeError,
    bits_of,
    check_monotone_nesting,
    cover_mask_of,
    cover_of,
    instance_from_json,
    instance_to_json,
    mask_of,
    path_length,
    validate_hyperpath,
)
from .geom import (
    AreaRelation,
    CoveredArea,
    DegenerateGeometryError,
    DimensionMismatchError,
    GeometricInstance,
    GeometryError,
    area_contains,
    area_subset,
    build_disk_graph,
    build_hypergraph,
    build_ring_hypergraph,
    compute_alpha,
    covered_area,
    dist2,
    geometric_from_json,
    geometric_to_json,
    ring_width_bound,
)
from .solvers import (
    BoundReport,
    BudgetExceededError,
    DEFAULT_STATE_BUDGET,
    SolveResult,
    TieBreakMode,
    brute_force_thinnest,
    check_tsba_tree_property,
    exact,
    iter_simple_hyperpaths,
    result_to_json,
    spba,
    spba_bound,
    spba_bound_holds,
    tsba,
    tsba_bound,
    tsba_bound_holds,
    verify_ratio_bounds,
)
from .nbi import (
    EveField,
    LineInstance,
    LineInstanceError,
    PredecessorChain,
    UnsupportedModelError,
    build_line_hypergraph,
    line_from_geometric,
    line_from_json,
    line_to_json,
    nbi_operation_count,
    nbi_solve,
    path_cost_1p5d,
    power_needed,
    predecessor,
    reaches,
)
from .gadgets import (
    Family,
    FamilyParams,
    GadgetError,
    ReductionInstance,
    SimpleGraph,
    build_family,
    calibrate_spba_worst,
    default_k_prime,
    load_fig5,
    mds_bruteforce,
    reduce_mds,
    shared_block_avoider,
)
from .harness import (
    CSV_HEADER,
    ExperimentConfig,
    ExperimentRow,
    gen_line_benchmark,
    gen_random_disk,
    gen_random_graph,
    gen_random_line,
    rows_to_csv,
    run_experiment,
    trial_rng,
)

__version__ = "0.1.0"

__all__ = [
    # hypercore
    "Cover", "DEFAULT_VERTEX_CAP", "Hyperedge", "Hypergraph", "HypergraphError",
    "Hyperpath", "UnknownEdgeError", "bits_of", "check_monotone_nesting",
    "cover_mask_of", "cover_of", "instance_from_json", "instance_to_json",
    "mask_of", "path_length", "validate_hyperpath",
    # geom
    "AreaRelation", "CoveredArea", "DegenerateGeometryError",
    "DimensionMismatchError", "GeometricInstance", "GeometryError",
    "area_contains", "area_subset", "build_disk_graph", "build_hypergraph",
    "build_ring_hypergraph", "compute_alpha", "covered_area", "dist2",
    "geometric_from_json", "geometric_to_json", "ring_width_bound",
    # solvers
    "BoundReport", "BudgetExceededError", "DEFAULT_STATE_BUDGET", "SolveResult",
    "TieBreakMode", "brute_force_thinnest", "check_tsba_tree_property", "exact",
    "iter_simple_hyperpaths", "result_to_json", "spba", "spba_bound",
    "spba_bound_holds", "tsba", "tsba_bound", "tsba_bound_holds",
    "verify_ratio_bounds",
    # nbi
    "EveField", "LineInstance", "LineInstanceError", "PredecessorChain",
    "UnsupportedModelError", "build_line_hypergraph", "line_from_geometric",
    "line_from_json", "line_to_json", "nbi_operation_count", "nbi_solve",
    "path_cost_1p5d", "power_needed", "predecessor", "reaches",
    # gadgets
    "Family", "FamilyParams", "GadgetError", "ReductionInstance", "SimpleGraph",
    "build_family", "calibrate_spba_worst", "default_k_prime", "load_fig5",
    "mds_bruteforce", "reduce_mds", "shared_block_avoider",
    # harness
    "CSV_HEADER", "ExperimentConfig", "ExperimentRow", "gen_line_benchmark",
    "gen_random_disk", "gen_random_graph", "gen_random_line", "rows_to_csv",
    "run_experiment", "trial_rng",
    "__version__",
]
