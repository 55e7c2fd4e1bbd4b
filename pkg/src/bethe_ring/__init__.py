"""Bethe spectrum, coordinate-energy transform, and one-point function for
the periodic anisotropic (XXZ) spin-1/2 ring in a fixed up-spin sector."""

from .core import (
    AssumptionViolationError,
    BetheRingError,
    ContinuationError,
    DegenerateJacobianError,
    DegenerateRootError,
    DuplicateClassError,
    IKSingularityError,
    ModelParams,
    RootTuple,
    SolverError,
    SpectralSet,
    WaveFunction,
    ZeroBetheVectorError,
    canonicalize,
    config_rank,
    config_unrank,
    enumerate_configurations,
)
from .basis import (
    DEFAULT_LAMBDA_VARIANT,
    amplitude,
    ell_coeff,
    energy,
    lambda_matrix,
    u_coeff,
)
from .solver import (
    ContinuationPlan,
    bethe_jacobian,
    bethe_residual,
    enumerate_spectrum,
    kaczmarz_sweep,
    read_spectrum,
    seed_roots,
    solve_from_seed,
    write_spectrum,
)
from .hamiltonian import apply_hxxz, dense_sector_matrix, eigen_residual
from .completeness import (
    bethe_vector,
    identity_report,
    select_lambda_variant,
    transition_matrix,
    verify_identity,
)
from .dynamics import config_probability, one_point_naive, wavefunction
from .fastpoint import (
    b_sigma,
    f_kernel,
    f_prod,
    g_fn,
    gamma_det,
    one_point_fast,
    verify_identities,
)

__version__ = "0.1.0"
