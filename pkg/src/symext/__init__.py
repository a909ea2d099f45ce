"""Extendability and marginal-consistency criteria for bipartite quantum states.

The package decides, via analytic necessary conditions, whether bipartite
marginals can come from one global state (k-symmetric / k-bosonic
extension), cross-checks those conditions on closed-form state families,
and ships an independent numerical feasibility oracle.
"""

from .consistency import (
    MARGINAL_MISMATCH,
    MarginalSet,
    a_marginal_spread,
    average_marginals,
    consistency_verdict,
    werner_pentagon,
)
from .criteria import (
    BOSONIC,
    INCONCLUSIVE,
    SYMMETRIC,
    VIOLATED,
    CriterionVerdict,
    DefinettiGap,
    ExtensionProblem,
    bosonic_extension_verdict,
    definetti_gap,
    generalized_coefficients,
    generalized_hat,
    hat_state,
    necessary_separability,
    ppt_test,
    sufficient_separability,
    symmetric_extension_verdict,
    tilde_state,
)
from .errors import (
    LayoutError,
    MarginalMismatchError,
    ResourceLimitError,
    ValidationError,
)
from .families import (
    BELL_VECTORS,
    bell_exact_2ext,
    bell_polytope_condition,
    bell_ssa,
    bell_state,
    ckw_check,
    ssa_check,
    werner_exact_threshold,
    werner_hat_psi,
    werner_state,
    werner_tilde_psi,
    werner_tilde_threshold,
    wootters_concurrence,
)
from .linalg import (
    DensityMatrix,
    hermitian_eigs,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    permutation_operator,
    pure_state,
    random_density,
    symmetric_projector,
    tensor_product,
    trace_distance,
    trace_norm,
    twirl_channel,
    von_neumann_entropy,
)
from .oracle import (
    FEASIBLE,
    INFEASIBLE,
    UNDECIDED,
    OracleConfig,
    OracleResult,
    oracle_feasibility,
    project_invariant_marginal,
    project_marginal_affine,
    project_permutation_invariant,
    project_psd,
)

__version__ = "0.1.0"

__all__ = [
    "BELL_VECTORS",
    "BOSONIC",
    "CriterionVerdict",
    "DefinettiGap",
    "DensityMatrix",
    "ExtensionProblem",
    "FEASIBLE",
    "INCONCLUSIVE",
    "INFEASIBLE",
    "LayoutError",
    "MARGINAL_MISMATCH",
    "MarginalMismatchError",
    "MarginalSet",
    "OracleConfig",
    "OracleResult",
    "ResourceLimitError",
    "SYMMETRIC",
    "UNDECIDED",
    "VIOLATED",
    "ValidationError",
    "a_marginal_spread",
    "average_marginals",
    "bell_exact_2ext",
    "bell_polytope_condition",
    "bell_ssa",
    "bell_state",
    "bosonic_extension_verdict",
    "ckw_check",
    "consistency_verdict",
    "definetti_gap",
    "generalized_coefficients",
    "generalized_hat",
    "hat_state",
    "hermitian_eigs",
    "maximally_mixed",
    "necessary_separability",
    "oracle_feasibility",
    "partial_trace",
    "partial_transpose",
    "permutation_operator",
    "ppt_test",
    "project_invariant_marginal",
    "project_marginal_affine",
    "project_permutation_invariant",
    "project_psd",
    "pure_state",
    "random_density",
    "ssa_check",
    "sufficient_separability",
    "symmetric_extension_verdict",
    "symmetric_projector",
    "tensor_product",
    "tilde_state",
    "trace_distance",
    "trace_norm",
    "twirl_channel",
    "von_neumann_entropy",
    "werner_exact_threshold",
    "werner_hat_psi",
    "werner_pentagon",
    "werner_state",
    "werner_tilde_psi",
    "werner_tilde_threshold",
    "wootters_concurrence",
]
