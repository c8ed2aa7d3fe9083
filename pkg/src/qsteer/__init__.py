"""qsteer: steering mixed quantum states onto target pure states using only
sequential projective measurements of two non-commuting observables."""

from .bases import (
    OrthonormalBasis,
    OverlapMatrix,
    ScanResult,
    basis_2d,
    dephase_in_basis,
    extend_to_basis,
    fourier_basis,
    haar_random_basis,
    hs_optimality_scan,
    overlap_matrix,
    squared_overlaps,
    unbiasedness_defect,
)
from .formulas import (
    BipartiteTargetSpec,
    avg_ps,
    avg_ps_large_n,
    ps_2d,
    ps_2d_max,
    ps_bipartite,
    ps_bipartite_bound,
    ps_copies,
    ps_mub,
    ps_mub_asymptotic,
    ps_multi_target,
)
from .mc import BACKEND, available_backends
from .protocol import (
    InfeasibleError,
    MarkovModel,
    MonteCarloResult,
    Protocol,
    TrajectoryResult,
    born_probabilities,
    brute_force_success,
    build_markov,
    exact_success,
    measure_in_basis,
    monte_carlo_success,
    run_trajectory,
    trajectory_model,
)
from .states import (
    DensityMatrix,
    PureState,
    QubitLikeSpec,
    haar_random_pure,
    hs_distance_sq,
    maximally_mixed,
    qubit_like_density,
    target_overlap,
    tensor,
)

__version__ = "0.1.0"
