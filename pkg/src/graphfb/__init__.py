"""Critically sampled two-channel wavelet filterbanks on weighted graphs.

The package covers the full pipeline: graph model and bipartite
decomposition (`graph`), normalized-Laplacian spectral analysis
(`spectral`), quadrature-mirror kernel design with Chebyshev approximation
(`kernels`), critically sampled analysis/synthesis banks (`filterbank`),
text formats (`io`), fixture generators (`fixtures`), and the ``graphfb``
command line (`cli`).
"""

from .graph import (
    Bipartition,
    BipartiteDecomposition,
    Coloring,
    DecompositionStage,
    Graph,
    bfs_distances,
    connected_components,
    greedy_coloring,
    harary_decompose,
    image_graph,
    is_bipartite,
    is_proper,
    lattice_parity_coloring,
    stage_graph,
    subgraph_restricted,
    validate_decomposition,
)
from .spectral import (
    DEFAULT_DENSE_LIMIT,
    DownsamplingMap,
    FoldingReport,
    GraphSignal,
    NormalizedLaplacian,
    Spectrum,
    du_operator,
    du_spectral_decomposition,
    eigendecompose,
    gft,
    igft,
    normalized_laplacian,
    spectrum_symmetric_about_one,
    verify_spectral_folding,
)
from .kernels import (
    KernelSet,
    PolynomialKernel,
    SpectralKernel,
    apply_exact_filter,
    apply_polynomial_filter,
    chebyshev_apply,
    chebyshev_fit,
    custom_kernel,
    ideal_kernel,
    meyer_kernel,
    meyer_nu,
    mirror_kernel,
    polynomial_spectral_kernel,
    power_complementarity_residual,
    qmf_companions,
    response_table,
)
from .filterbank import (
    Channel,
    ChannelEnergyReport,
    MultiresLevel,
    PRConditionReport,
    SeparableBank,
    SubbandTree,
    TwoChannelBank,
    analysis_operator,
    analyze_separable,
    analyze_two_channel,
    channel_energy_report,
    channel_labels,
    downsampled_graph,
    make_two_channel_bank,
    stage_orthogonality_residuals,
    synthesize_separable,
    synthesize_two_channel,
    verify_commutation,
    verify_pr_conditions,
)
from .io import (
    FormatError,
    load_coloring,
    load_decomposition,
    load_graph,
    load_polynomial,
    load_signal,
    load_subband_tree,
    save_coloring,
    save_decomposition,
    save_graph,
    save_polynomial,
    save_signal,
    save_spectrum,
    save_subband_tree,
    save_table,
)

__version__ = "0.1.0"
