"""Werner states: criterion thresholds versus the exact extendability threshold.

The tilde state of a Werner state is Werner again with parameter
(d + k psi) / (d^2 + k), so the k-symmetric criterion fires exactly below
psi = -d/k.  The known exact threshold is -(d-1)/k: the criterion is close
but not optimal, and the numerical oracle exposes the gap.
"""

import numpy as np

from symext import (
    SYMMETRIC,
    ExtensionProblem,
    oracle_feasibility,
    symmetric_extension_verdict,
    werner_exact_threshold,
    werner_state,
    werner_tilde_threshold,
)

print("criterion threshold -d/k vs exact threshold -(d-1)/k:")
for d in (2, 3):
    for k in (2, 3, 4):
        print(
            f"  d={d} k={k}:  criterion {werner_tilde_threshold(d, k):+.4f}"
            f"   exact {werner_exact_threshold(d, k):+.4f}"
        )

print("\nd=2, k=3 scan (criterion verdict vs oracle):")
print("  psi    verdict        oracle")
for psi in np.linspace(-0.70, -0.20, 11):
    problem = ExtensionProblem(werner_state(2, float(psi)), 3, SYMMETRIC)
    verdict = symmetric_extension_verdict(problem)
    oracle = oracle_feasibility(problem)
    marker = "  <- criterion misses this" if (
        verdict.status == "Inconclusive" and oracle.status == "Infeasible"
    ) else ""
    print(f"  {psi:+.2f}  {verdict.status:<13} {oracle.status}{marker}")

print("\nthe window between -2/3 and -1/3 is where the oracle proves")
print("non-extendability that the analytic criterion cannot see")
