"""Bell-diagonal and Werner state families with their closed-form criteria.

These families make every criterion in the package checkable by hand: the
derived states stay inside the family, so the PPT verdicts reduce to simple
parameter inequalities.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import LayoutError, MarginalMismatchError, ValidationError
from .linalg import (
    DensityMatrix,
    partial_trace,
    permutation_operator,
    trace_distance,
    von_neumann_entropy,
)

# Bell basis columns: (|00>+|11>), (|00>-|11>), (|01>+|10>), (|01>-|10>), each /sqrt(2).
BELL_VECTORS = (
    np.array(
        [
            [1, 1, 0, 0],
            [0, 0, 1, 1],
            [0, 0, 1, -1],
            [1, -1, 0, 0],
        ],
        dtype=complex,
    )
    / math.sqrt(2)
)

A_MARGINAL_TOL = 1e-8
SSA_SLACK = 1e-9
CKW_SLACK = 1e-9

_YY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


def _check_bell_probs(p: Sequence[float]) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise ValidationError(f"need four probabilities, got shape {p.shape}")
    if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
        raise ValidationError(f"probabilities must lie in [0, 1], got {p.tolist()}")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValidationError(f"probabilities must sum to 1, got sum {p.sum()!r}")
    return np.clip(p, 0.0, 1.0)


def bell_state(p: Sequence[float]) -> DensityMatrix:
    """Mixture of the four Bell projectors with weights p."""
    p = _check_bell_probs(p)
    mat = (BELL_VECTORS * p) @ BELL_VECTORS.conj().T
    return DensityMatrix(mat, (2, 2))


def bell_polytope_condition(p: Sequence[float]) -> bool:
    """Closed-form 2-extendability test from the hat state: max p_i <= 3/4."""
    p = _check_bell_probs(p)
    return bool(p.max() <= 0.75)


def bell_exact_2ext(p: Sequence[float]) -> bool:
    """Exact 2-symmetric extendability: 1/2 >= sum p_i^2 - 4 sqrt(p1 p2 p3 p4)."""
    p = _check_bell_probs(p)
    return bool(np.sum(p**2) - 4 * math.sqrt(float(np.prod(p))) <= 0.5)


def bell_ssa(p: Sequence[float]) -> bool:
    """Entropy form of strong subadditivity for Bell-diagonal pairs: H(p) >= 1 bit."""
    p = _check_bell_probs(p)
    nz = p[p > 1e-12]
    return bool(-np.sum(nz * np.log2(nz)) >= 1.0 - 1e-12)


def werner_state(d: int, psi: float) -> DensityMatrix:
    """Two-qudit state invariant under U x U, parameterized by psi in [-1, 1].

    Mixes the normalized projectors onto the symmetric and antisymmetric
    subspaces with weights (1 + psi)/2 and (1 - psi)/2; separable (and PPT)
    exactly when psi >= 0.
    """
    if d < 2:
        raise ValidationError(f"need local dimension >= 2, got {d}")
    if not -1.0 <= psi <= 1.0:
        raise ValidationError(f"parameter must lie in [-1, 1], got {psi}")
    swap = permutation_operator(d, 2, (1, 0))
    eye = np.eye(d * d, dtype=complex)
    sym = (eye + swap) / 2
    anti = (eye - swap) / 2
    mat = (1 + psi) / 2 * sym / (d * (d + 1) / 2) + (1 - psi) / 2 * anti / (d * (d - 1) / 2)
    return DensityMatrix(mat, (d, d))


def werner_tilde_psi(d: int, k: int, psi: float) -> float:
    """Parameter of the tilde state of a Werner state: (d + k psi) / (d^2 + k)."""
    return (d + k * psi) / (d**2 + k)


def werner_hat_psi(d: int, k: int, psi: float) -> float:
    """Parameter of the hat state of a Werner state: (1 + k psi) / (d + k)."""
    return (1 + k * psi) / (d + k)


def werner_tilde_threshold(d: int, k: int) -> float:
    """Below -d/k the tilde criterion proves a Werner state has no k-symmetric extension."""
    return -d / k


def werner_exact_threshold(d: int, k: int) -> float:
    """Known necessary and sufficient k-symmetric extendability threshold -(d-1)/k."""
    return -(d - 1) / k


def ssa_check(rho_ab: DensityMatrix, rho_ac: DensityMatrix) -> bool:
    """Entropy consistency test S(AB) + S(AC) >= S(B) + S(C) for a marginal pair.

    Both inputs must be bipartite with matching A marginals; a mismatch is
    already a proof of inconsistency and raises.
    """
    if len(rho_ab.dims) != 2 or len(rho_ac.dims) != 2:
        raise LayoutError(f"both marginals must be bipartite, got {rho_ab.dims} and {rho_ac.dims}")
    if rho_ab.dims[0] != rho_ac.dims[0]:
        raise LayoutError(f"A dimensions differ: {rho_ab.dims[0]} vs {rho_ac.dims[0]}")
    dist = trace_distance(partial_trace(rho_ab, [0]), partial_trace(rho_ac, [0]))
    if dist > A_MARGINAL_TOL:
        raise MarginalMismatchError(f"A marginals differ: trace distance {dist:.3e}", dist)
    s_b = von_neumann_entropy(partial_trace(rho_ab, [1]))
    s_c = von_neumann_entropy(partial_trace(rho_ac, [1]))
    return von_neumann_entropy(rho_ab) + von_neumann_entropy(rho_ac) >= s_b + s_c - SSA_SLACK


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence from the spin-flipped spectrum.

    max{0, l1 - l2 - l3 - l4} with l_i the descending square roots of the
    eigenvalues of rho (Y x Y) rho* (Y x Y).
    """
    if rho.dims != (2, 2):
        raise LayoutError(f"concurrence needs a two-qubit layout, got {rho.dims}")
    m = rho.mat @ _YY @ rho.mat.conj() @ _YY
    lams = np.sqrt(np.clip(np.linalg.eigvals(m).real, 0.0, None))
    lams = np.sort(lams)[::-1]
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def ckw_check(rho_ab: DensityMatrix, rho_ac: DensityMatrix, c_abc: float) -> bool:
    """Monogamy test C_AB^2 + C_AC^2 <= C_A(BC)^2 with the global concurrence supplied.

    The caller provides c_abc (it equals 1 for the Werner-pair comparison);
    computing tripartite concurrences is out of scope here.
    """
    if not 0.0 <= c_abc <= 1.0:
        raise ValidationError(f"global concurrence must lie in [0, 1], got {c_abc}")
    c_ab = wootters_concurrence(rho_ab)
    c_ac = wootters_concurrence(rho_ac)
    return c_ab**2 + c_ac**2 <= c_abc**2 + CKW_SLACK
