"""Bell-diagonal states: where does the 2-extendability criterion bite?

A two-qubit Bell-diagonal state is a mixture of the four Bell projectors
with weights p.  Its 2-extension hat state is Bell-diagonal again with
weights 1/8 + p_i/2, so the derived-state separability test reduces to the
polytope max p_i <= 3/4.  This script compares that polytope with the exact
2-extendability region and the entropy (SSA) condition on a coarse grid,
then estimates both region volumes by seeded Monte Carlo.
"""

import numpy as np

from symext import (
    BOSONIC,
    INCONCLUSIVE,
    ExtensionProblem,
    bell_exact_2ext,
    bell_polytope_condition,
    bell_ssa,
    bell_state,
    bosonic_extension_verdict,
)
from symext.cli import main as cli


def simplex_grid(ticks):
    values = np.linspace(0.0, 1.0, ticks)
    for p1 in values:
        for p2 in values:
            for p3 in values:
                p4 = 1.0 - p1 - p2 - p3
                if p4 >= -1e-12:
                    yield (float(p1), float(p2), float(p3), max(float(p4), 0.0))


counts = {"polytope": 0, "exact": 0, "ssa": 0, "hat_ppt": 0, "total": 0}
disagreements = 0
for p in simplex_grid(15):
    counts["total"] += 1
    poly = bell_polytope_condition(p)
    exact = bell_exact_2ext(p)
    ssa = bell_ssa(p)
    verdict = bosonic_extension_verdict(ExtensionProblem(bell_state(p), 2, BOSONIC))
    ppt = verdict.status == INCONCLUSIVE
    counts["polytope"] += poly
    counts["exact"] += exact
    counts["ssa"] += ssa
    counts["hat_ppt"] += ppt
    if poly != ppt:
        disagreements += 1
    if exact and not poly:
        raise AssertionError("the polytope must contain the exact region")

print(f"grid points: {counts['total']}")
print(f"polytope condition passes: {counts['polytope']}")
print(f"exact 2-extendability passes: {counts['exact']}  (subset of the polytope)")
print(f"entropy condition passes: {counts['ssa']}  (incomparable with the polytope)")
print(f"hat-state PPT passes: {counts['hat_ppt']}  (disagreements with polytope: {disagreements})")

print("\nMonte Carlo volumes (1e6 samples, seed 7):")
for which, reference in (("polytope", "15/96 = 0.15625"), ("exact", "about 0.15115")):
    cli(["volume", "--which", which, "--samples", "1000000", "--seed", "7"])
    print(f"  reference value for {which}: {reference}")
