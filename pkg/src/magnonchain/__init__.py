"""Two-magnon band structure and topology of a modulated XXZ spin chain.

The package builds magnon-sector Hamiltonians of a periodically modulated
XXZ ring, reduces them to cotranslational momentum blocks, and computes
bound-pair bands, their Chern numbers on the (momentum, phase) torus, edge
states of open chains, an effective pair model with its deformation path,
and a butterfly spectrum over modulation fractions.
"""

__version__ = "0.1.0"

from .blocks import (BlochBlock, OrbitBasis, bloch_block, block_k_points,
                     build_orbit_basis, covariance_unitary, lift_block_vector,
                     momentum_phase_vector, reduce_to_block,
                     verify_block_decomposition)
from .chern import (BZGrid, ChernResult, berry_link, chern_from_vectors,
                    chern_numbers, chern_table, collect_grid_vectors,
                    plaquette_field)
from .config import COMMANDS, RunConfig, build_run, parse_angle, parse_config
from .deform import (GapTrace, auxiliary_hamiltonian, embed_effective,
                     embedded_parts, gap_trace)
from .effective import (BandComparison, HarperParams, alignment_shift,
                        build_effective, compare_bound_band, effective_bloch,
                        effective_chern_numbers, harper_params,
                        presentation_shift)
from .errors import (BandOverlapError, CommensurabilityError, ConvergenceError,
                     DegenerateLinkError, GapClosingError, MagnonChainError,
                     ResolutionError, TopologicalObstructionError,
                     ValidationError)
from .model import (MagnonBasis, ModelParams, build_basis, build_hamiltonian,
                    check_cotranslation_symmetry, cotranslate,
                    cotranslation_permutation, hopping_matrix,
                    map_bose_hubbard, potential_diagonal, potential_energy)
from .spectra import (BandSet, EdgeState, EigenSystem, bound_band, butterfly,
                      butterfly_envelope, butterfly_lambda, correlation_matrix,
                      delta_sweep, density_profile, eig_dense, eig_lowest,
                      find_edge_states, gershgorin_floor)

__all__ = [
    "__version__",
    # model
    "ModelParams", "MagnonBasis", "build_basis", "build_hamiltonian",
    "hopping_matrix", "potential_diagonal", "potential_energy",
    "cotranslate", "cotranslation_permutation", "check_cotranslation_symmetry",
    "map_bose_hubbard",
    # momentum blocks
    "OrbitBasis", "BlochBlock", "build_orbit_basis", "block_k_points",
    "bloch_block", "reduce_to_block", "momentum_phase_vector",
    "covariance_unitary", "lift_block_vector", "verify_block_decomposition",
    # spectra
    "EigenSystem", "BandSet", "EdgeState", "eig_dense", "eig_lowest",
    "gershgorin_floor", "bound_band", "density_profile", "correlation_matrix",
    "delta_sweep", "butterfly", "butterfly_lambda", "butterfly_envelope",
    "find_edge_states",
    # topology
    "BZGrid", "ChernResult", "berry_link", "plaquette_field",
    "chern_from_vectors", "collect_grid_vectors", "chern_numbers",
    "chern_table",
    # effective pair model
    "HarperParams", "BandComparison", "harper_params", "build_effective",
    "effective_bloch", "effective_chern_numbers", "alignment_shift",
    "presentation_shift", "compare_bound_band",
    # deformation
    "GapTrace", "embed_effective", "embedded_parts", "auxiliary_hamiltonian",
    "gap_trace",
    # configuration
    "COMMANDS", "RunConfig", "parse_config", "parse_angle", "build_run",
    # errors
    "MagnonChainError", "ValidationError", "CommensurabilityError",
    "ConvergenceError", "ResolutionError", "TopologicalObstructionError",
    "GapClosingError", "BandOverlapError", "DegenerateLinkError",
]
