"""Minimal decomposition entropy of multipartite qudit states.

The decomposition entropy of a pure state is the Renyi entropy of its
computational-basis weights; its minimum over local unitaries is an
LU-invariant measure of how far the state is from any product basis.
"""
from .designs import (
    KNOWN_STATES,
    LatinSquare,
    OrthogonalArray,
    canonicalize,
    known_state,
    latin_square,
    mols_pair,
    oa_from_ls,
    oa_from_mols,
    state_from_oa,
)
from .ensemble import EnsembleReport, EnsembleSpec, export, load_report, run_ensemble
from .entropy import ame_lower_bound, ipr, max_entropy, renyi_entropy, support, support_upper_bound
from .generate import GenConfig, GenResult, generate_kuniform, nearest_isometry
from .lppca import LppcaResult, lppca_maximize
from .minentropy import MinEntropyConfig, OptResult, entropy_vs_q_sweep, minimize_entropy
from .seesaw import ProductState, SeesawResult, s_infinity_min
from .states import (
    State,
    apply_local_unitaries,
    basis_state,
    random_haar_state,
    random_unitary,
    read_state,
    reshape_bipartition,
    state_from_amplitudes,
    write_state,
)
from .uniformity import UniformityReport, is_ame, k_uniformity_deviation

__version__ = "0.1.0"
