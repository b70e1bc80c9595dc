"""Covariant quantum cloning for N-level systems.

Bell-state families, Cerf cloning states, covariance constraints, optimal
cloners and the reduction of symmetric qubit attacks to Cerf states.
"""

from .bases import (
    OrthonormalBasis,
    computational_basis,
    fourier_basis,
    hadamard_basis,
    hadamard_matrix,
    interferometric_bases,
    klein_group,
)
from .bell import (
    BellFamily,
    bell_family,
    error_operator,
    fourier_bell,
    generalized_bell,
    hadamard_bell,
    hadamard_bijection_check,
)
from .cloner import (
    CloneReport,
    cerf_state,
    clone_densities,
    clone_report,
    dual_amplitudes,
    entropic_bound,
    fidelity_and_disturbances,
    mutual_information,
    reexpand,
)
from .covariance import (
    AmplitudePattern,
    covariant_pattern,
    isotropic_abc_pattern,
    overlap_matrix,
    universal_pattern,
    verify_covariance,
    xyz_pattern,
)
from .optimize import (
    InfeasibleError,
    OptimalCloner,
    TradeoffCurve,
    ck_verdict,
    isotropy_residual,
    self_dual_point,
    symmetric_optimum,
    tradeoff_curve,
    universal_cloner,
)
from .qubit_theorem import (
    AttackStatistics,
    SymmetricQubitState,
    attack_statistics,
    build_symmetric_state,
    effective_ra_density,
    mixture_decomposition,
)

__version__ = "0.1.0"
