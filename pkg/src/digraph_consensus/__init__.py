"""Laplacian spectra, out-forests and consensus dynamics of weighted digraphs."""

__version__ = "0.1.0"

from .graph import (
    GraphFormatError,
    PerronMatrix,
    WeightedDigraph,
    averaging_matrix,
    build_laplacian,
    centering_matrix,
    complement,
    max_step_size,
    perron_from_laplacian,
    perron_from_standardized,
    random_digraph,
    standardize,
)
from .structure import (
    SizeLimitError,
    decompose,
    forest_dimension,
    has_spanning_diverging_tree,
    laplacian_rank,
    unilateral_components,
)
from .forests import (
    asymptotic_state,
    cesaro_limit,
    eigenprojection_audit,
    enumerate_max_out_forests,
    normalized_forest_matrix,
    forest_matrix_audit,
)
from .spectral import (
    circulant_laplacian,
    eigenvalues,
    h_exact,
    polygon_contains,
    polygon_vertices,
    region_contains,
)
from .dynamics import (
    SimConfig,
    convergence_report,
    simulate_continuous,
    simulate_discrete,
    simulate_double_integrator,
    simulate_oscillator,
)

__all__ = [
    "__version__",
    "GraphFormatError",
    "PerronMatrix",
    "WeightedDigraph",
    "averaging_matrix",
    "build_laplacian",
    "centering_matrix",
    "complement",
    "max_step_size",
    "perron_from_laplacian",
    "perron_from_standardized",
    "random_digraph",
    "standardize",
    "SizeLimitError",
    "decompose",
    "forest_dimension",
    "has_spanning_diverging_tree",
    "laplacian_rank",
    "unilateral_components",
    "asymptotic_state",
    "cesaro_limit",
    "eigenprojection_audit",
    "enumerate_max_out_forests",
    "normalized_forest_matrix",
    "forest_matrix_audit",
    "circulant_laplacian",
    "eigenvalues",
    "h_exact",
    "polygon_contains",
    "polygon_vertices",
    "region_contains",
    "SimConfig",
    "convergence_report",
    "simulate_continuous",
    "simulate_discrete",
    "simulate_double_integrator",
    "simulate_oscillator",
]
