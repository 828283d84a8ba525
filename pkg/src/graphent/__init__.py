"""Certified entanglement bounds for graph states."""

from .bounds import (
    BipartitionResult,
    MisResult,
    best_bipartite_lower_bound,
    bipartite_entanglement,
    independent_set_upper_bound,
    max_independent_set,
    schmidt_rank_oracle,
    witness_product_state,
)
from .graph_core import (
    MAX_VERTICES,
    Gf2Matrix,
    Graph,
    GraphError,
    GraphParseError,
    GraphSizeError,
    cross_block,
    gf2_rank,
    induced_edge_parity,
    labels,
    named_graph,
    parse_graph,
    serialize_graph,
    toggle_edge,
    vertex_set,
)
from .optimize import (
    BoundsReport,
    ConsistencyError,
    OptimizerConfig,
    OptimumResult,
    entanglement_bounds_report,
    optimize_product_fidelity,
    optimize_symmetric,
)
from .state import (
    ProductState,
    amplitude,
    basis_amplitude,
    fidelity,
    product_overlap,
    symmetric_coefficients,
    symmetric_fidelity,
    symmetric_overlap,
    verify_stabilizer,
)

__version__ = "0.1.0"
