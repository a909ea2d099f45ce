"""Shared sample generators for the test suite."""

import numpy as np

from symext import DensityMatrix, random_density, symmetric_projector


def random_separable(dims, rng, terms=6):
    """Convex mixture of random product states: separable by construction."""
    d_a, d_b = dims
    weights = rng.random(terms)
    weights /= weights.sum()
    mat = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
    for w in weights:
        mat += w * np.kron(random_density([d_a], rng).mat, random_density([d_b], rng).mat)
    return DensityMatrix(mat, dims)


def random_symmetric_supported(d, k, rng):
    """Random full-support state on the symmetric subspace of k factors."""
    proj = symmetric_projector(d, k)
    side = d**k
    g = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    mat = proj @ (g @ g.conj().T) @ proj
    return DensityMatrix(mat / np.trace(mat).real, (d,) * k)


def random_bosonic_marginal(d_a, d_b, k, r, rng):
    """Marginal on A,B_1..B_r of a random state on A tensor Sym^k(B)."""
    from symext.oracle import _occupation_isometry
    from symext import partial_trace

    iso = _occupation_isometry(d_b, k)
    lift = np.kron(np.eye(d_a, dtype=complex), iso)
    m = lift.shape[1]
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    y = g @ g.conj().T
    y /= np.trace(y).real
    big = DensityMatrix(lift @ y @ lift.conj().T, (d_a,) + (d_b,) * k)
    return partial_trace(big, range(r + 1))
