"""Numerical feasibility oracle for extension problems.

Decides k-symmetric / k-bosonic extendability at desk scale with
Dykstra-corrected projections between the PSD cone and the affine set of
permutation-invariant extension candidates with the prescribed marginal.
The inter-set gap converges to the distance between the two sets: it
vanishes exactly when an extension exists, so a stabilized positive gap
certifies infeasibility.  The bosonic flavor runs in the occupation-number
basis of the symmetric subspace to shrink the iterate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np

from .criteria import BOSONIC, SYMMETRIC, ExtensionProblem
from .errors import LayoutError, ResourceLimitError, ValidationError
from .linalg import DIM_GUARD, DensityMatrix, _ptrace_mat, hermitize

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
UNDECIDED = "Undecided"

# Infeasibility is declared once the gap has stopped moving: relative change
# below STABLE_RTOL across a window of STABLE_WINDOW iterations.
STABLE_WINDOW = 50
STABLE_RTOL = 1e-9


@dataclass(frozen=True)
class OracleConfig:
    tol_feasible: float = 1e-7
    tol_gap: float = 1e-6
    max_iters: int = 5000
    dim_limit: int = 256

    def __post_init__(self):
        if min(self.tol_feasible, self.tol_gap, self.max_iters, self.dim_limit) <= 0:
            raise ValidationError("all oracle configuration values must be positive")
        if self.tol_feasible >= self.tol_gap:
            raise ValidationError(
                f"tol_feasible must be below tol_gap, got {self.tol_feasible} >= {self.tol_gap}"
            )


@dataclass(frozen=True)
class OracleResult:
    status: str
    residual: float
    iterations: int
    certificate: Mapping[str, float] = field(default_factory=dict)


def project_psd(m: np.ndarray) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm: clip negative eigenvalues."""
    w, v = np.linalg.eigh(hermitize(np.asarray(m, dtype=complex)))
    return hermitize((v * np.clip(w, 0.0, None)) @ v.conj().T)


def _check_extension_layout(dims) -> tuple[int, int, int]:
    dims = tuple(dims)
    if len(dims) < 2:
        raise LayoutError(f"need a layout [d_A, d_B, ..., d_B], got {dims}")
    d_a, d_b = dims[0], dims[1]
    if any(d != d_b for d in dims[1:]):
        raise LayoutError(f"all B factors must share one dimension, got layout {dims}")
    return d_a, d_b, len(dims) - 1


@lru_cache(maxsize=None)
def _b_perm_sources(d_a: int, d_b: int, k: int) -> tuple[np.ndarray, ...]:
    """Basis-relabeling source indices for conjugation by I_A x W_pi, all pi in S_k."""
    if d_b**k > DIM_GUARD:
        raise ResourceLimitError(f"permutation average on dimension {d_b**k} exceeds the guard {DIM_GUARD}")
    words = np.array(list(itertools.product(range(d_b), repeat=k)), dtype=np.intp).reshape(-1, k)
    block = d_b**k
    offsets = np.arange(d_a, dtype=np.intp)[:, None] * block
    out = []
    for pi in itertools.permutations(range(k)):
        src_b = np.ravel_multi_index(words[:, pi].T, (d_b,) * k)
        src = (offsets + src_b[None, :]).ravel()
        src.setflags(write=False)
        out.append(src)
    return tuple(out)


def _transposition_source(d_a: int, d_b: int, k: int, i: int) -> np.ndarray:
    pi = list(range(k))
    pi[0], pi[i] = pi[i], pi[0]
    words = np.array(list(itertools.product(range(d_b), repeat=k)), dtype=np.intp).reshape(-1, k)
    src_b = np.ravel_multi_index(words[:, pi].T, (d_b,) * k)
    block = d_b**k
    return (np.arange(d_a, dtype=np.intp)[:, None] * block + src_b[None, :]).ravel()


@lru_cache(maxsize=None)
def _transposition_sources(d_a: int, d_b: int, k: int) -> tuple[np.ndarray, ...]:
    out = []
    for i in range(k):
        src = _transposition_source(d_a, d_b, k, i)
        src.setflags(write=False)
        out.append(src)
    return tuple(out)


def project_permutation_invariant(x: np.ndarray, dims) -> np.ndarray:
    """Group average over permutations of the B factors; an orthogonal projection."""
    d_a, d_b, k = _check_extension_layout(dims)
    x = np.asarray(x, dtype=complex)
    acc = np.zeros_like(x)
    for src in _b_perm_sources(d_a, d_b, k):
        acc += x[np.ix_(src, src)]
    return acc / math.factorial(k)


def project_marginal_affine(x: np.ndarray, dims, target: DensityMatrix) -> np.ndarray:
    """Orthogonal projection onto {X Hermitian : marginal on the first two factors = target}.

    Adds the deficit tensored with identity, divided by d_B^(k-1); the output
    trace is one because the correction carries exactly the trace deficit.
    """
    d_a, d_b, k = _check_extension_layout(dims)
    if target.dims != (d_a, d_b):
        raise LayoutError(f"target layout {target.dims} does not match extension layout {tuple(dims)}")
    x = np.asarray(x, dtype=complex)
    marg = _ptrace_mat(x, dims, keep=[0, 1])
    delta = (target.mat - marg) / d_b ** (k - 1)
    return x + np.kron(delta, np.eye(d_b ** (k - 1), dtype=complex))


def project_invariant_marginal(x: np.ndarray, dims, target: DensityMatrix) -> np.ndarray:
    """Exact orthogonal projection onto the intersection of the two affine sets.

    Symmetrize first, then apply the marginal correction solved within the
    permutation-invariant subspace: the corrector W satisfies the normal
    equations of the symmetrized marginal map, and its symmetrized placement
    restores the marginal without leaving the subspace.
    """
    d_a, d_b, k = _check_extension_layout(dims)
    if target.dims != (d_a, d_b):
        raise LayoutError(f"target layout {target.dims} does not match extension layout {tuple(dims)}")
    z = project_permutation_invariant(x, dims)
    v = target.mat - _ptrace_mat(z, dims, keep=[0, 1])
    v_a = _ptrace_mat(v, (d_a, d_b), keep=[0])
    w = (k / d_b ** (k - 1)) * v - ((k - 1) / d_b**k) * np.kron(v_a, np.eye(d_b, dtype=complex))
    placed = np.kron(w, np.eye(d_b ** (k - 1), dtype=complex))
    acc = np.zeros_like(z)
    for src in _transposition_sources(d_a, d_b, k):
        acc += placed[np.ix_(src, src)]
    return z + acc / k


@lru_cache(maxsize=None)
def _occupation_isometry(d: int, k: int) -> np.ndarray:
    """Isometry from the occupation-number basis of the symmetric subspace into d^k."""
    if d**k > DIM_GUARD:
        raise ResourceLimitError(f"occupation isometry on dimension {d**k} exceeds the guard {DIM_GUARD}")
    groups: dict[tuple[int, ...], list[int]] = {}
    for idx, word in enumerate(itertools.product(range(d), repeat=k)):
        groups.setdefault(tuple(sorted(word)), []).append(idx)
    keys = sorted(groups)
    iso = np.zeros((d**k, len(keys)), dtype=complex)
    for col, key in enumerate(keys):
        rows = groups[key]
        iso[rows, col] = 1.0 / math.sqrt(len(rows))
    iso.setflags(write=False)
    return iso


@lru_cache(maxsize=None)
def _bosonic_lift(d_a: int, d_b: int, k: int) -> np.ndarray:
    lift = np.kron(np.eye(d_a, dtype=complex), _occupation_isometry(d_b, k))
    lift.setflags(write=False)
    return lift


def _bosonic_marginal(y: np.ndarray, lift: np.ndarray, dims_full) -> np.ndarray:
    return _ptrace_mat(lift @ y @ lift.conj().T, dims_full, keep=[0, 1])


# --- facial reduction -------------------------------------------------------
#
# A kernel vector v of the marginal forces every PSD candidate X to satisfy
# X (v tensor w) = 0 on each (A, B_i) placement: the marginal constraint puts
# zero weight on v, and a PSD matrix with zero expectation on a projector
# annihilates its range.  Restricting the iteration to that forced support
# face restores linear convergence for rank-deficient marginals, where the
# feasible set would otherwise touch the PSD cone tangentially.

KERNEL_TOL = 1e-12
FACE_RANK_RTOL = 1e-10


def _state_kernel(rho: DensityMatrix) -> np.ndarray | None:
    """Kernel basis of the marginal as columns, or None when full rank."""
    eigs, vecs = np.linalg.eigh(rho.mat)
    cols = vecs[:, eigs <= KERNEL_TOL]
    return cols if cols.shape[1] else None


def _nullspace_projector(rows: np.ndarray) -> np.ndarray:
    _, svals, vh = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(svals > FACE_RANK_RTOL * svals[0])) if svals.size else 0
    basis = vh[rank:].conj().T
    return basis @ basis.conj().T


def _face_projector_symmetric(kernel: np.ndarray, d_a: int, d_b: int, k: int) -> np.ndarray:
    rest = d_b ** (k - 1)
    base = np.kron(kernel.conj().T, np.eye(rest, dtype=complex))  # <v|_{AB_1} (x) I
    rows = [base]
    for src in _transposition_sources(d_a, d_b, k)[1:]:
        rows.append(base[:, src])
    return _nullspace_projector(np.vstack(rows))


def _face_projector_bosonic(kernel: np.ndarray, lift: np.ndarray, d_b: int, k: int) -> np.ndarray:
    # permutation invariance of lifted candidates makes the B_1 placement
    # carry all the other placements with it
    rest = d_b ** (k - 1)
    rows = np.kron(kernel.conj().T, np.eye(rest, dtype=complex)) @ lift
    return _nullspace_projector(rows)


def _normal_equations_pinv(phi, marg, marg_adj, n_ab: int) -> np.ndarray:
    """Pseudoinverse of W -> marg(phi(marg_adj(W))), flattened over Herm(AB)."""
    gmat = np.zeros((n_ab * n_ab, n_ab * n_ab), dtype=complex)
    unit = np.zeros((n_ab, n_ab), dtype=complex)
    for i in range(n_ab):
        for j in range(n_ab):
            unit[i, j] = 1.0
            gmat[:, i * n_ab + j] = marg(phi(marg_adj(unit))).ravel()
            unit[i, j] = 0.0
    return np.linalg.pinv(gmat)


def _structured_affine_projector(phi, marg, marg_adj, gpinv, target_mat):
    """Projection onto {X : phi(X) = X, marg(X) = target} and the target's reach residual.

    phi must be an orthogonal projector onto a subspace compatible with the
    constraints; the marginal correction solves the normal equations of marg
    restricted to that subspace.  A nonzero reach residual means no candidate
    on the subspace reproduces the target marginal at all.
    """
    n_ab = target_mat.shape[0]

    def project(x: np.ndarray) -> np.ndarray:
        z = phi(x)
        deficit = target_mat - marg(z)
        w = (gpinv @ deficit.ravel()).reshape(n_ab, n_ab)
        return z + phi(marg_adj(w))

    def reach_residual() -> float:
        w = (gpinv @ target_mat.ravel()).reshape(n_ab, n_ab)
        return float(np.linalg.norm(marg(phi(marg_adj(w))) - target_mat))

    return project, reach_residual


def _run_dykstra(
    x0: np.ndarray,
    project_affine: Callable[[np.ndarray], np.ndarray],
    marginal_residual: Callable[[np.ndarray], float],
    cfg: OracleConfig,
) -> OracleResult:
    x = project_affine(x0)
    p = np.zeros_like(x)
    gaps: list[float] = []
    status = UNDECIDED
    y = x
    gap = float("inf")
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        y = project_psd(x + p)
        p = x + p - y
        x = project_affine(y)
        gap = float(np.linalg.norm(x - y))
        gaps.append(gap)
        if gap <= cfg.tol_feasible:
            status = FEASIBLE
            break
        if len(gaps) >= STABLE_WINDOW:
            window = gaps[-STABLE_WINDOW:]
            hi, lo = max(window), min(window)
            if lo >= cfg.tol_gap and (hi - lo) <= STABLE_RTOL * hi:
                status = INFEASIBLE
                break
    certificate = {
        "marginal_residual": marginal_residual(y),
        "min_eig": float(np.linalg.eigvalsh(hermitize(x))[0]),
        "gap_estimate": gap,
    }
    return OracleResult(status=status, residual=gap, iterations=iterations, certificate=certificate)


@lru_cache(maxsize=None)
def _bosonic_gpinv(d_a: int, d_b: int, k: int) -> np.ndarray:
    lift = _bosonic_lift(d_a, d_b, k)
    dims_full = (d_a,) + (d_b,) * k
    rest = d_b ** (k - 1)
    marg = lambda y: _bosonic_marginal(y, lift, dims_full)
    marg_adj = lambda w: lift.conj().T @ np.kron(w, np.eye(rest, dtype=complex)) @ lift
    gpinv = _normal_equations_pinv(lambda x: x, marg, marg_adj, d_a * d_b)
    gpinv.setflags(write=False)
    return gpinv


def oracle_feasibility(problem: ExtensionProblem, cfg: OracleConfig | None = None) -> OracleResult:
    """Decide extendability numerically, independent of the derived-state criteria.

    Feasible: a PSD iterate sits within tol_feasible of the constraint set.
    Infeasible: the inter-set gap stabilized at or above tol_gap, or the
    support face forced by the marginal's kernel cannot reproduce the
    marginal at all.  Undecided: the iteration budget ran out first
    (expected near the feasibility boundary, where first-order methods
    converge slowly).
    """
    cfg = cfg or OracleConfig()
    rho = problem.marginal
    d_a, d_b = rho.dims
    k = problem.k
    dims_full = (d_a,) + (d_b,) * k
    rest = d_b ** (k - 1)
    kernel = _state_kernel(rho)

    if problem.flavor == SYMMETRIC:
        side = d_a * d_b**k
        if side > cfg.dim_limit:
            raise ResourceLimitError(f"extension space side {side} exceeds the limit {cfg.dim_limit}")
        start = np.kron(rho.mat, np.eye(rest, dtype=complex) / rest)
        start = project_permutation_invariant(start, dims_full)
        marg = lambda x: _ptrace_mat(x, dims_full, keep=[0, 1])
        if kernel is None:
            project = lambda y: project_invariant_marginal(y, dims_full, rho)
            reach = None
        else:
            face = _face_projector_symmetric(kernel, d_a, d_b, k)
            phi = lambda x: face @ project_permutation_invariant(x, dims_full) @ face
            marg_adj = lambda w: np.kron(w, np.eye(rest, dtype=complex))
            gpinv = _normal_equations_pinv(phi, marg, marg_adj, d_a * d_b)
            project, reach = _structured_affine_projector(phi, marg, marg_adj, gpinv, rho.mat)
    else:
        # bosonic flavor: iterate on A tensor Sym^k(B) in the occupation basis
        lift = _bosonic_lift(d_a, d_b, k)
        side = lift.shape[1]
        if side > cfg.dim_limit:
            raise ResourceLimitError(f"compressed extension space side {side} exceeds the limit {cfg.dim_limit}")
        big0 = np.kron(rho.mat, np.eye(rest, dtype=complex) / rest)
        start = lift.conj().T @ big0 @ lift
        tr = float(np.trace(start).real)
        start = start / tr if tr > 1e-9 else np.eye(side, dtype=complex) / side
        marg = lambda y: _bosonic_marginal(y, lift, dims_full)
        marg_adj = lambda w: lift.conj().T @ np.kron(w, np.eye(rest, dtype=complex)) @ lift
        if kernel is None:
            phi = lambda y: y
            gpinv = _bosonic_gpinv(d_a, d_b, k)
        else:
            face = _face_projector_bosonic(kernel, lift, d_b, k)
            phi = lambda y: face @ y @ face
            gpinv = _normal_equations_pinv(phi, marg, marg_adj, d_a * d_b)
        project, reach = _structured_affine_projector(phi, marg, marg_adj, gpinv, rho.mat)

    if kernel is not None and reach is not None:
        deficit = reach()
        if deficit >= cfg.tol_gap:
            # no candidate on the forced support face matches the marginal
            certificate = {"marginal_residual": deficit, "min_eig": 0.0, "gap_estimate": deficit}
            return OracleResult(INFEASIBLE, residual=deficit, iterations=0, certificate=certificate)

    residual = lambda y: float(np.linalg.norm(marg(y) - rho.mat))
    return _run_dykstra(start, project, residual, cfg)
