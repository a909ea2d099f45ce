"""Feasibility oracle: projections and end-to-end decisions."""

import math

import numpy as np
import pytest

from helpers import random_separable
from symext import (
    BOSONIC,
    INCONCLUSIVE,
    SYMMETRIC,
    VIOLATED,
    ExtensionProblem,
    FEASIBLE,
    INFEASIBLE,
    OracleConfig,
    ResourceLimitError,
    UNDECIDED,
    ValidationError,
    bell_exact_2ext,
    bell_state,
    bosonic_extension_verdict,
    maximally_mixed,
    oracle_feasibility,
    project_invariant_marginal,
    project_marginal_affine,
    project_permutation_invariant,
    project_psd,
    random_density,
    symmetric_extension_verdict,
    symmetric_projector,
    tensor_product,
    werner_state,
)
from symext.linalg import _ptrace_mat
from symext.oracle import _bosonic_gpinv, _bosonic_lift, _bosonic_marginal, _occupation_isometry


def _random_hermitian(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def test_project_psd():
    rng = np.random.default_rng(50)
    psd = random_density([2, 2], rng).mat
    assert np.max(np.abs(project_psd(psd) - psd)) < 1e-12

    clipped = project_psd(np.diag([1.0, -1.0]))
    assert np.max(np.abs(clipped - np.diag([1.0, 0.0]))) < 1e-15

    h = _random_hermitian(8, rng)
    p = project_psd(h)
    assert np.linalg.eigvalsh(p)[0] > -1e-12
    assert np.max(np.abs(project_psd(p) - p)) < 1e-12


def test_project_permutation_invariant():
    rng = np.random.default_rng(51)
    dims = (2, 2, 2)
    rho_a = random_density([2], rng).mat
    s1 = random_density([2], rng).mat
    s2 = random_density([2], rng).mat
    x = np.kron(rho_a, np.kron(s1, s2))
    out = project_permutation_invariant(x, dims)
    expected = (np.kron(rho_a, np.kron(s1, s2)) + np.kron(rho_a, np.kron(s2, s1))) / 2
    assert np.max(np.abs(out - expected)) < 1e-12

    h = _random_hermitian(8, rng)
    out = project_permutation_invariant(h, dims)
    assert abs(np.trace(out) - np.trace(h)) < 1e-12
    assert np.max(np.abs(project_permutation_invariant(out, dims) - out)) < 1e-12


def test_projections_nonexpansive():
    rng = np.random.default_rng(52)
    dims = (2, 2, 2)
    target = random_density((2, 2), rng)
    for _ in range(5):
        x = _random_hermitian(8, rng)
        y = _random_hermitian(8, rng)
        base = np.linalg.norm(x - y)
        for proj in (
            project_psd,
            lambda m: project_permutation_invariant(m, dims),
            lambda m: project_marginal_affine(m, dims, target),
            lambda m: project_invariant_marginal(m, dims, target),
        ):
            assert np.linalg.norm(proj(x) - proj(y)) <= base + 1e-12


def test_project_marginal_affine():
    rng = np.random.default_rng(53)
    dims = (2, 2, 2)
    target = bell_state([1, 0, 0, 0])

    matching = np.kron(target.mat, np.eye(2) / 2)
    assert np.max(np.abs(project_marginal_affine(matching, dims, target) - matching)) < 1e-12

    x = np.eye(8) / 8
    out = project_marginal_affine(x, dims, target)
    assert np.max(np.abs(_ptrace_mat(out, dims, [0, 1]) - target.mat)) < 1e-12
    assert abs(np.trace(out) - 1.0) < 1e-12

    h = _random_hermitian(8, rng)
    out = project_marginal_affine(h, dims, target)
    assert abs(np.trace(out) - 1.0) < 1e-12  # correction carries the trace deficit
    assert np.max(np.abs(project_marginal_affine(out, dims, target) - out)) < 1e-12


@pytest.mark.parametrize("d_a,d_b,k", [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)])
def test_project_invariant_marginal_exactness(d_a, d_b, k):
    rng = np.random.default_rng(54 + d_a + d_b + k)
    dims = (d_a,) + (d_b,) * k
    n = d_a * d_b**k
    target = random_density((d_a, d_b), rng)
    x = _random_hermitian(n, rng)
    px = project_invariant_marginal(x, dims, target)

    # membership in both affine sets
    assert np.max(np.abs(project_permutation_invariant(px, dims) - px)) < 1e-12
    assert np.max(np.abs(_ptrace_mat(px, dims, [0, 1]) - target.mat)) < 1e-12
    # idempotence
    assert np.max(np.abs(project_invariant_marginal(px, dims, target) - px)) < 1e-12
    # agrees with the alternating-projection limit (exact projection onto the
    # intersection of two affine sets)
    z = x.copy()
    for _ in range(800):
        z = project_permutation_invariant(project_marginal_affine(z, dims, target), dims)
    assert np.max(np.abs(z - px)) < 1e-8
    # the displacement is orthogonal to the direction space of the intersection
    c1 = project_invariant_marginal(_random_hermitian(n, rng), dims, target)
    c2 = project_invariant_marginal(_random_hermitian(n, rng), dims, target)
    inner = np.real(np.trace((x - px).conj().T @ (c1 - c2)))
    assert abs(inner) < 1e-10


@pytest.mark.parametrize("d,k", [(2, 2), (2, 3), (3, 2)])
def test_occupation_isometry(d, k):
    iso = _occupation_isometry(d, k)
    dim_sym = math.comb(d + k - 1, k)
    assert iso.shape == (d**k, dim_sym)
    assert np.max(np.abs(iso.conj().T @ iso - np.eye(dim_sym))) < 1e-12
    assert np.max(np.abs(iso @ iso.conj().T - symmetric_projector(d, k))) < 1e-12


def test_bosonic_affine_projection():
    rng = np.random.default_rng(55)
    d_a, d_b, k = 2, 2, 2
    lift = _bosonic_lift(d_a, d_b, k)
    gpinv = _bosonic_gpinv(d_a, d_b, k)
    side = lift.shape[1]
    dims_full = (d_a,) + (d_b,) * k
    target = random_density((d_a, d_b), rng)
    y = _random_hermitian(side, rng)
    deficit = target.mat - _bosonic_marginal(y, lift, dims_full)
    w = (gpinv @ deficit.ravel()).reshape(d_a * d_b, d_a * d_b)
    py = y + lift.conj().T @ np.kron(w, np.eye(d_b ** (k - 1))) @ lift
    # marginal satisfied through the lift
    assert np.max(np.abs(_bosonic_marginal(py, lift, dims_full) - target.mat)) < 1e-10
    # hermiticity preserved
    assert np.max(np.abs(py - py.conj().T)) < 1e-12


def test_oracle_product_state_feasible():
    rng = np.random.default_rng(56)
    prod = tensor_product(random_density([2], rng), random_density([2], rng))
    res = oracle_feasibility(ExtensionProblem(prod, 3, SYMMETRIC))
    assert res.status == FEASIBLE
    assert res.residual <= 1e-7


def test_oracle_bell_infeasible_both_flavors():
    bell = bell_state([1, 0, 0, 0])
    for flavor in (SYMMETRIC, BOSONIC):
        res = oracle_feasibility(ExtensionProblem(bell, 2, flavor))
        assert res.status == INFEASIBLE
        assert res.residual >= 1e-2
        assert res.certificate["marginal_residual"] >= 1e-2


def test_oracle_werner_nonoptimality_gap():
    # at psi = -0.5, d=2, k=3: the tilde criterion is silent but the exact
    # threshold -(d-1)/k = -1/3 is crossed; the oracle must see infeasibility
    rho = werner_state(2, -0.5)
    verdict = symmetric_extension_verdict(ExtensionProblem(rho, 3, SYMMETRIC))
    assert verdict.status == INCONCLUSIVE
    res = oracle_feasibility(ExtensionProblem(rho, 3, SYMMETRIC))
    assert res.status == INFEASIBLE

    res = oracle_feasibility(ExtensionProblem(werner_state(2, -0.2), 3, SYMMETRIC))
    assert res.status == FEASIBLE


def test_oracle_flavors_agree_for_two_qubit_k2():
    for p in ([0.25] * 4, [0.7, 0.1, 0.1, 0.1], [0.8, 0.2, 0, 0], [1, 0, 0, 0]):
        rho = bell_state(p)
        sym = oracle_feasibility(ExtensionProblem(rho, 2, SYMMETRIC))
        bos = oracle_feasibility(ExtensionProblem(rho, 2, BOSONIC))
        assert sym.status == bos.status == (FEASIBLE if bell_exact_2ext(p) else INFEASIBLE)


def test_oracle_never_contradicts_criteria():
    rng = np.random.default_rng(57)
    # wherever the analytic criterion proves a violation, the oracle must not
    # report feasibility
    for _ in range(8):
        p = rng.dirichlet([1, 1, 1, 1])
        rho = bell_state(p)
        verdict = bosonic_extension_verdict(ExtensionProblem(rho, 2, BOSONIC))
        if verdict.status == VIOLATED:
            res = oracle_feasibility(ExtensionProblem(rho, 2, BOSONIC))
            assert res.status != FEASIBLE
    for psi in (-0.9, -0.75):
        rho = werner_state(2, psi)
        verdict = symmetric_extension_verdict(ExtensionProblem(rho, 3, SYMMETRIC))
        if verdict.status == VIOLATED:
            res = oracle_feasibility(ExtensionProblem(rho, 3, SYMMETRIC))
            assert res.status != FEASIBLE


def test_oracle_maximally_mixed_quick():
    res = oracle_feasibility(ExtensionProblem(maximally_mixed([2, 2]), 4, SYMMETRIC))
    assert res.status == FEASIBLE
    assert res.iterations <= 10


def test_oracle_separable_feasible():
    rng = np.random.default_rng(58)
    for _ in range(3):
        rho = random_separable((2, 2), rng)
        res = oracle_feasibility(ExtensionProblem(rho, 3, SYMMETRIC))
        assert res.status in (FEASIBLE, UNDECIDED)
        assert res.status == FEASIBLE or res.residual < 1e-4


def test_oracle_rank_deficient_marginals():
    # a zero Bell weight makes the marginal singular; the forced support face
    # keeps the oracle decisive instead of stalling on the tangent geometry
    feasible_p = (0.0, 1 / 9, 3 / 9, 5 / 9)
    assert bell_exact_2ext(feasible_p)
    res = oracle_feasibility(ExtensionProblem(bell_state(feasible_p), 2, SYMMETRIC))
    assert res.status == FEASIBLE

    infeasible_p = (0.8, 0.2, 0.0, 0.0)
    assert not bell_exact_2ext(infeasible_p)
    res = oracle_feasibility(ExtensionProblem(bell_state(infeasible_p), 2, SYMMETRIC))
    assert res.status == INFEASIBLE
    assert res.iterations == 0  # the face cannot reproduce the marginal at all
    assert res.certificate["marginal_residual"] > 1e-2

    # rank-1 marginal, both flavors
    singlet = werner_state(2, -1.0)
    assert oracle_feasibility(ExtensionProblem(singlet, 2, BOSONIC)).status == INFEASIBLE
    assert oracle_feasibility(ExtensionProblem(singlet, 3, SYMMETRIC)).status == INFEASIBLE


def test_face_projector_annihilates_kernel_placements():
    from symext.oracle import _face_projector_symmetric, _state_kernel

    rho = bell_state([0.0, 0.5, 0.3, 0.2])
    kernel = _state_kernel(rho)
    assert kernel is not None and kernel.shape[1] == 1
    face = _face_projector_symmetric(kernel, 2, 2, 2)
    # the face annihilates the kernel vector placed on either B slot
    v = kernel[:, 0]
    for w_idx in range(2):
        w = np.zeros(2)
        w[w_idx] = 1.0
        placed_b1 = np.kron(v, w)
        assert np.linalg.norm(face @ placed_b1) < 1e-12
        placed_b2 = np.einsum("ab,c->acb", v.reshape(2, 2), w).reshape(-1)
        assert np.linalg.norm(face @ placed_b2) < 1e-12


def test_structured_projector_matches_closed_form_for_full_rank():
    from symext.oracle import _normal_equations_pinv, _structured_affine_projector

    rng = np.random.default_rng(59)
    d_a, d_b, k = 2, 2, 2
    dims = (d_a,) + (d_b,) * k
    rest = d_b ** (k - 1)
    target = random_density((d_a, d_b), rng)
    phi = lambda x: project_permutation_invariant(x, dims)
    marg = lambda x: _ptrace_mat(x, dims, keep=[0, 1])
    marg_adj = lambda w: np.kron(w, np.eye(rest, dtype=complex))
    gpinv = _normal_equations_pinv(phi, marg, marg_adj, d_a * d_b)
    project, reach = _structured_affine_projector(phi, marg, marg_adj, gpinv, target.mat)
    assert reach() < 1e-12
    x = _random_hermitian(d_a * d_b**k, rng)
    assert np.max(np.abs(project(x) - project_invariant_marginal(x, dims, target))) < 1e-10


@pytest.mark.parametrize("k", [2, 3])
def test_oracle_werner_transition_location(k):
    # the feasibility transition sits within +/- 0.02 of -(d-1)/k at d=2
    threshold = -1 / k
    lo = int(round((threshold - 0.08) * 100))
    hi = int(round((threshold + 0.08) * 100))
    statuses = {}
    for i in range(lo, hi + 1):
        psi = i / 100
        res = oracle_feasibility(ExtensionProblem(werner_state(2, psi), k, SYMMETRIC))
        statuses[psi] = res.status
    infeasible = [psi for psi, s in statuses.items() if s == INFEASIBLE]
    feasible = [psi for psi, s in statuses.items() if s == FEASIBLE]
    assert infeasible and feasible
    assert max(infeasible) <= threshold + 0.02 + 1e-9
    assert min(feasible) >= threshold - 0.02 - 1e-9


def test_oracle_bell_soundness_full_grid():
    # 20^3 simplex grid against the exact inequality, outside a 0.02 band
    from test_acceptance import _exact_boundary_cloud, _simplex_grid

    cloud = _exact_boundary_cloud()
    mismatches = undecided = checked = 0
    for p1, p2, p3, p4 in _simplex_grid(20):
        point = np.array([p1, p2, p3])
        if float(np.sqrt(((cloud - point) ** 2).sum(axis=1).min())) < 0.02:
            continue
        checked += 1
        expected = FEASIBLE if bell_exact_2ext((p1, p2, p3, p4)) else INFEASIBLE
        res = oracle_feasibility(ExtensionProblem(bell_state((p1, p2, p3, p4)), 2, SYMMETRIC))
        if res.status == UNDECIDED:
            undecided += 1
        elif res.status != expected:
            mismatches += 1
    assert checked > 1000
    assert mismatches == 0 and undecided == 0


def test_oracle_resource_guard_and_config():
    with pytest.raises(ResourceLimitError):
        oracle_feasibility(ExtensionProblem(maximally_mixed([2, 2]), 8, SYMMETRIC))
    with pytest.raises(ValidationError):
        OracleConfig(tol_feasible=1e-5, tol_gap=1e-6)
    with pytest.raises(ValidationError):
        OracleConfig(max_iters=0)
    cfg = OracleConfig(max_iters=3)
    res = oracle_feasibility(ExtensionProblem(werner_state(2, -0.5), 3, SYMMETRIC), cfg)
    assert res.status == UNDECIDED
    assert res.iterations == 3
