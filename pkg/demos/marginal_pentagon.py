"""Consistency of two Werner marginals sharing one party.

If rho_AB and rho_AC are marginals of one three-qubit state, their average
has a 2-symmetric extension, so the derived-state criterion applies to it.
For Werner pairs this reduces to the pentagon psi1 + psi2 >= -1, which is
strictly sharper than the CKW monogamy bound in the entangled quadrant and
incomparable with the entropy (SSA) condition.
"""

import numpy as np

from symext import (
    INCONCLUSIVE,
    MarginalSet,
    ckw_check,
    consistency_verdict,
    ssa_check,
    werner_pentagon,
    werner_state,
)

psis = np.linspace(-1.0, 0.0, 21)
states = {float(psi): werner_state(2, float(psi)) for psi in psis}

pentagon_only = ckw_only = ssa_only_vs_pentagon = 0
for psi1 in psis:
    for psi2 in psis:
        s1, s2 = states[float(psi1)], states[float(psi2)]
        verdict = consistency_verdict(MarginalSet([s1, s2]))
        pentagon = verdict.status == INCONCLUSIVE
        assert pentagon == werner_pentagon(float(psi1), float(psi2)) or abs(psi1 + psi2 + 1) < 1e-9
        ckw = ckw_check(s1, s2, 1.0)
        ssa = ssa_check(s1, s2)
        if ckw and not pentagon:
            pentagon_only += 1  # pentagon detects, CKW silent
        if pentagon and not ckw:
            ckw_only += 1  # would contradict the containment
        if pentagon and not ssa:
            ssa_only_vs_pentagon += 1

print(f"grid: {len(psis)}x{len(psis)} points with psi in [-1, 0]")
print(f"points where the pentagon detects inconsistency and CKW does not: {pentagon_only}")
print(f"points where CKW detects and the pentagon does not: {ckw_only} (always 0)")
print(f"points where SSA detects something the pentagon allows: {ssa_only_vs_pentagon}")
print("\nexamples:")
for pair in ((-0.5, -0.5), (-0.7, -0.7), (-0.9, -0.3), (-0.75, -0.1)):
    v = consistency_verdict(MarginalSet([werner_state(2, pair[0]), werner_state(2, pair[1])]))
    print(f"  psi = {pair}: {v.status} via {v.criterion}")
