"""Path counts, entropy bounds and AF-algebra truncation checks for locally
finite directed graphs."""

from __future__ import annotations

__version__ = "0.1.0"

from .af import (
    AlgebraElement,
    Path,
    PathPair,
    PhiRepresentation,
    SparseMatrix,
    adjoint,
    dimension_report,
    multiply,
    omega,
    phi,
    phi_E,
    phi_E_power,
    rank_bound_sequences,
    verify_homomorphism,
    verify_independence,
)
from .counting import (
    CountSeries,
    FirstReturnSeries,
    PathClass,
    convolution_check,
    count_class,
    count_through_set,
    first_return_counts,
    renewal_failures,
)
from .entropy import (
    EntropyEstimate,
    SandwichReport,
    block_entropy,
    coblock_entropy,
    finite_entropy,
    growth_rate,
    loop_entropy,
    radius_inverse,
    sandwich,
    spectral_radius,
    subgraph_supremum,
)
from .errors import (
    GraphentError,
    DanglingEndpoint,
    DuplicateEdgeId,
    OracleInconsistency,
    LocalFinitenessViolation,
    WindowTooSmall,
    InvalidParams,
    ParseError,
    UnknownFamily,
    AllZeroTail,
    NotIrreducible,
    HypothesisViolated,
    NotInOmega,
    NoCycleWarning,
)
from .families import load_family, random_strongly_connected, salama, salama_2_8, salama_pp
from .graph import (
    Edge,
    FiniteGraph,
    GraphWindow,
    build_finite,
    edge_matrix,
    full_window,
    is_irreducible,
    materialize,
    read_edge_list,
    transpose,
)
