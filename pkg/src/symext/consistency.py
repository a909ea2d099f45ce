"""Reduction from heterogeneous overlapping marginals to one extension problem.

If states rho_AB1..rho_ABk are marginals of one global state, their average
has a k-symmetric extension (symmetrize the global state over the B
factors), so the extendability criteria apply to the average.  A-marginal
disagreement is already a definitive inconsistency and short-circuits the
criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .criteria import (
    BOSONIC,
    SYMMETRIC,
    VIOLATED,
    CriterionVerdict,
    ExtensionProblem,
    bosonic_extension_verdict,
    symmetric_extension_verdict,
)
from .errors import LayoutError, MarginalMismatchError, ValidationError
from .families import A_MARGINAL_TOL
from .linalg import DensityMatrix, partial_trace, trace_distance

MARGINAL_MISMATCH = "marginal-mismatch"


@dataclass(frozen=True)
class MarginalSet:
    """Two or more bipartite marginals sharing the A factor."""

    marginals: tuple[DensityMatrix, ...]

    def __init__(self, marginals):
        marginals = tuple(marginals)
        if len(marginals) < 2:
            raise ValidationError(f"need at least two marginals, got {len(marginals)}")
        dims = marginals[0].dims
        if len(dims) != 2:
            raise LayoutError(f"marginals must be bipartite, got layout {dims}")
        for rho in marginals[1:]:
            if rho.dims != dims:
                raise LayoutError(f"marginal layouts differ: {dims} vs {rho.dims}")
        object.__setattr__(self, "marginals", marginals)

    @property
    def k(self) -> int:
        return len(self.marginals)

    @property
    def dims(self) -> tuple[int, int]:
        return self.marginals[0].dims


def a_marginal_spread(ms: MarginalSet) -> float:
    """Largest pairwise trace distance between the A marginals."""
    reduced = [partial_trace(rho, [0]) for rho in ms.marginals]
    return max(trace_distance(a, b) for a, b in combinations(reduced, 2))


def average_marginals(ms: MarginalSet) -> ExtensionProblem:
    """Average the marginals into an ExtensionProblem with k = number of marginals.

    Two-qubit pairs route to the bosonic flavor (the strictly stronger hat
    test applies there); everything else stays symmetric.  Raises
    MarginalMismatchError when the A marginals disagree beyond tolerance,
    which is already a proof of inconsistency.
    """
    spread = a_marginal_spread(ms)
    if spread > A_MARGINAL_TOL:
        raise MarginalMismatchError(f"A marginals differ: trace distance {spread:.3e}", spread)
    avg = sum(rho.mat for rho in ms.marginals) / ms.k
    flavor = BOSONIC if ms.dims == (2, 2) and ms.k == 2 else SYMMETRIC
    tol = max(rho.tol for rho in ms.marginals)
    return ExtensionProblem(DensityMatrix(avg, ms.dims, tol=tol), ms.k, flavor)


def consistency_verdict(ms: MarginalSet) -> CriterionVerdict:
    """Necessary-condition verdict for the joint consistency of the marginals.

    Violated proves no global state has these marginals.  The criterion
    field records which rule fired: ``marginal-mismatch``,
    ``averaging+hat``, or ``averaging+tilde``.
    """
    try:
        problem = average_marginals(ms)
    except MarginalMismatchError as err:
        return CriterionVerdict(
            VIOLATED, MARGINAL_MISMATCH, {"a_marginal_trace_distance": err.trace_distance}
        )
    if problem.flavor == BOSONIC:
        inner = bosonic_extension_verdict(problem)
    else:
        inner = symmetric_extension_verdict(problem)
    rule = "averaging+hat" if inner.criterion == "hat-ppt" else "averaging+tilde"
    return CriterionVerdict(inner.status, rule, dict(inner.witness))


def werner_pentagon(psi1: float, psi2: float) -> bool:
    """Closed form of the two-qubit Werner-pair consistency criterion: psi1 + psi2 >= -1."""
    for psi in (psi1, psi2):
        if not -1.0 <= psi <= 1.0:
            raise ValidationError(f"parameters must lie in [-1, 1], got {psi}")
    return psi1 + psi2 >= -1.0
