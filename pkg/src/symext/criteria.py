"""Extendability criteria built from derived states.

A state with a k-symmetric extension has a separable tilde state
``(d_B rho_A x I + k rho) / (d_B^2 + k)``; a state with a k-bosonic
extension has a separable hat state ``(rho_A x I + k rho) / (d_B + k)``.
Testing the derived state with the partial-transpose criterion therefore
gives a necessary condition for extendability whose cost does not grow
with k.  ``Violated`` means non-extendability is proven; ``Inconclusive``
means the necessary condition passed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .errors import LayoutError, ResourceLimitError, ValidationError
from .linalg import (
    DIM_GUARD,
    SYM_SUPPORT_TOL,
    DensityMatrix,
    _ptrace_mat,
    hermitize,
    partial_trace,
    partial_transpose,
    trace_norm,
)
from .linalg import _sym_projector

VIOLATED = "Violated"
INCONCLUSIVE = "Inconclusive"

SYMMETRIC = "symmetric"
BOSONIC = "bosonic"

# Eigenvalue threshold for claiming a violation; anything within the band
# counts as numerical noise and reports Inconclusive with a boundary flag.
PPT_VIOLATION_TOL = 1e-9


@dataclass(frozen=True)
class ExtensionProblem:
    """A bipartite marginal together with the extension count and flavor."""

    marginal: DensityMatrix
    k: int
    flavor: str = SYMMETRIC

    def __post_init__(self):
        if len(self.marginal.dims) != 2:
            raise LayoutError(f"extension problems need a bipartite marginal, got layout {self.marginal.dims}")
        if self.k < 1:
            raise ValidationError(f"extension count must be >= 1, got {self.k}")
        if self.flavor not in (SYMMETRIC, BOSONIC):
            raise ValidationError(f"flavor must be '{SYMMETRIC}' or '{BOSONIC}', got {self.flavor!r}")


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of a necessary-condition test plus its numeric witness."""

    status: str
    criterion: str
    witness: Mapping[str, float] = field(default_factory=dict)


class DefinettiGap(NamedTuple):
    gap: float
    bound: float


def _require_bipartite(rho: DensityMatrix) -> tuple[int, int]:
    if len(rho.dims) != 2:
        raise LayoutError(f"expected a bipartite layout, got {rho.dims}")
    return rho.dims


def tilde_state(rho_ab: DensityMatrix, k: int) -> DensityMatrix:
    """Derived state whose separability is necessary for a k-symmetric extension."""
    d_a, d_b = _require_bipartite(rho_ab)
    if k < 1:
        raise ValidationError(f"extension count must be >= 1, got {k}")
    rho_a = partial_trace(rho_ab, [0])
    mat = (d_b * np.kron(rho_a.mat, np.eye(d_b)) + k * rho_ab.mat) / (d_b**2 + k)
    return DensityMatrix(mat, rho_ab.dims, tol=rho_ab.tol)


def hat_state(rho_ab: DensityMatrix, k: int) -> DensityMatrix:
    """Derived state whose separability is necessary for a k-bosonic extension."""
    d_a, d_b = _require_bipartite(rho_ab)
    if k < 1:
        raise ValidationError(f"extension count must be >= 1, got {k}")
    rho_a = partial_trace(rho_ab, [0])
    mat = (np.kron(rho_a.mat, np.eye(d_b)) + k * rho_ab.mat) / (d_b + k)
    return DensityMatrix(mat, rho_ab.dims, tol=rho_ab.tol)


def generalized_coefficients(k: int, d: int, r: int) -> np.ndarray:
    """Mixing weights p_0..p_r of the multi-factor hat construction.

    p_s = C(k, s) C(d + r - 1, r - s) / C(d + k + r - 1, r); they sum to one.
    """
    if r < 1:
        raise ValidationError(f"need r >= 1, got {r}")
    if k < r:
        raise ValidationError(f"need k >= r, got k={k}, r={r}")
    if d < 2:
        raise ValidationError(f"need d >= 2, got {d}")
    denom = math.comb(d + k + r - 1, r)
    return np.array([math.comb(k, s) * math.comb(d + r - 1, r - s) / denom for s in range(r + 1)])


def generalized_hat(rho: DensityMatrix, k: int) -> DensityMatrix:
    """Multi-factor hat state for a marginal on A and r equal B factors.

    Each term embeds the marginal on A,B_1..B_s into all r B factors with
    identities, compresses with the symmetric projector, and rescales by the
    symmetric-subspace dimension ratio; the terms are mixed with the weights
    from :func:`generalized_coefficients`.  With r = 1 this reduces to
    :func:`hat_state`.  For r >= 2 the input must be supported on the
    symmetric subspace of its B factors (true of any marginal of a bosonic
    state, and required for the output to have unit trace).
    """
    dims = rho.dims
    if len(dims) < 2:
        raise LayoutError(f"need a layout [d_A, d_B, ...], got {dims}")
    d_a = dims[0]
    d_b = dims[1]
    r = len(dims) - 1
    if any(d != d_b for d in dims[1:]):
        raise LayoutError(f"all B factors must share one dimension, got layout {dims}")
    if k < r:
        raise ValidationError(f"need k >= r, got k={k}, r={r}")
    if d_b**r > DIM_GUARD:
        raise ResourceLimitError(f"symmetric compression on dimension {d_b**r} exceeds the guard {DIM_GUARD}")
    proj = _sym_projector(d_b, r)
    proj_full = np.kron(np.eye(d_a, dtype=complex), proj)
    if r >= 2:
        defect = float(np.max(np.abs(proj_full @ rho.mat @ proj_full - rho.mat)))
        if defect > SYM_SUPPORT_TOL:
            raise ValidationError(
                f"B factors are not supported on the symmetric subspace: defect {defect:.1e}"
            )
    weights = generalized_coefficients(k, d_b, r)
    d_r = math.comb(d_b + r - 1, r)
    acc = np.zeros((rho.side, rho.side), dtype=complex)
    for s in range(r + 1):
        marg = _ptrace_mat(rho.mat, dims, keep=range(s + 1))
        lifted = np.kron(marg, np.eye(d_b ** (r - s), dtype=complex))
        d_s = math.comb(d_b + s - 1, s)
        acc += weights[s] * (d_s / d_r) * (proj_full @ lifted @ proj_full)
    return DensityMatrix(hermitize(acc), dims, tol=rho.tol)


def ppt_test(rho: DensityMatrix, cut: int = 1) -> CriterionVerdict:
    """Partial-transpose criterion across the given factor.

    Violated iff the minimal eigenvalue of the partial transpose falls below
    -1e-9; the witness records the eigenvalue.  For 2x2 and 2x3 layouts the
    test is exact (witness key ``exact`` is 1.0); elsewhere a pass is only a
    PPT relaxation.  Eigenvalues within the tolerance band report
    Inconclusive with a ``boundary`` flag.
    """
    pt = partial_transpose(rho, cut)
    lo = float(np.linalg.eigvalsh(hermitize(pt))[0])
    exact = len(rho.dims) == 2 and tuple(sorted(rho.dims)) in ((2, 2), (2, 3))
    witness = {"min_pt_eig": lo, "exact": 1.0 if exact else 0.0}
    if lo < -PPT_VIOLATION_TOL:
        return CriterionVerdict(VIOLATED, "ppt", witness)
    if abs(lo) < PPT_VIOLATION_TOL:
        witness["boundary"] = 1.0
    return CriterionVerdict(INCONCLUSIVE, "ppt", witness)


def _derived_verdict(problem: ExtensionProblem, derived: DensityMatrix, criterion: str) -> CriterionVerdict:
    inner = ppt_test(derived, cut=1)
    witness = dict(inner.witness)
    witness["k"] = float(problem.k)
    return CriterionVerdict(inner.status, criterion, witness)


def symmetric_extension_verdict(problem: ExtensionProblem) -> CriterionVerdict:
    """Necessary-condition verdict for the k-symmetric extension problem.

    Violated proves there is no k-symmetric extension.  Two-qubit inputs with
    k = 2 route through the hat state, which is strictly stronger there
    because a two-qubit 2-symmetric extension implies a 2-bosonic one.
    """
    if problem.flavor != SYMMETRIC:
        raise ValidationError(f"expected a symmetric-flavor problem, got {problem.flavor!r}")
    if problem.marginal.dims == (2, 2) and problem.k == 2:
        return _derived_verdict(problem, hat_state(problem.marginal, problem.k), "hat-ppt")
    return _derived_verdict(problem, tilde_state(problem.marginal, problem.k), "tilde-ppt")


def bosonic_extension_verdict(problem: ExtensionProblem) -> CriterionVerdict:
    """Necessary-condition verdict for the k-bosonic extension problem."""
    if problem.flavor != BOSONIC:
        raise ValidationError(f"expected a bosonic-flavor problem, got {problem.flavor!r}")
    return _derived_verdict(problem, hat_state(problem.marginal, problem.k), "hat-ppt")


def definetti_gap(rho_ab: DensityMatrix, k: int) -> DefinettiGap:
    """Trace-norm distance to the tilde state and its closed-form bound 2 d_B^2 / (d_B^2 + k).

    The gap never exceeds the bound, which shrinks like 1/k: highly
    extendable states sit close to a separable state.
    """
    _, d_b = _require_bipartite(rho_ab)
    gap = trace_norm(rho_ab.mat - tilde_state(rho_ab, k).mat)
    bound = 2 * d_b**2 / (d_b**2 + k)
    return DefinettiGap(gap=gap, bound=float(bound))


def sufficient_separability(sigma: DensityMatrix) -> bool:
    """True when (d_B + 1) sigma - sigma_A x I is PSD, which certifies separability."""
    _, d_b = _require_bipartite(sigma)
    sigma_a = partial_trace(sigma, [0])
    m = (d_b + 1) * sigma.mat - np.kron(sigma_a.mat, np.eye(d_b))
    return float(np.linalg.eigvalsh(hermitize(m))[0]) >= -PPT_VIOLATION_TOL


def necessary_separability(sigma: DensityMatrix) -> bool:
    """True when sigma_A x I - sigma is PSD; every separable state passes."""
    _, d_b = _require_bipartite(sigma)
    sigma_a = partial_trace(sigma, [0])
    m = np.kron(sigma_a.mat, np.eye(d_b)) - sigma.mat
    return float(np.linalg.eigvalsh(hermitize(m))[0]) >= -PPT_VIOLATION_TOL
