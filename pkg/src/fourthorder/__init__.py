"""Fourth-order interference of weak coherent states at a multiport splitter,
the post-selected two-qubit state it leaves behind, and its geometric discord."""
from .correlations import (
    BipartiteQubitState,
    bell_decomposition,
    bloch_decompose,
    geometric_discord_closed,
    geometric_discord_general,
    local_coherence,
    maximize_discord,
    postselect_bipartite,
    purity,
)
from .fock import (
    TransferMatrix,
    TwoPhotonDensityMatrix,
    b4_matrix,
    canonical_basis,
    check_unitary,
    transform_density_matrix,
    transform_monomial,
)
from .interference import (
    coincidence_table,
    distinguishability_sweep,
    output_density_matrix,
    simulate_counts,
    two_photon_fringe,
    two_photon_subblock,
)
from .kernels import BACKEND
from .noise import NoiseParams, apply_noise, discord_vs_coherence_curve
from .sources import WcsPair, build_input_state, poisson_photon_prob, two_photon_sector_probability

__version__ = "0.1.0"
