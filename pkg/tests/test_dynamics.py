import numpy as np
import pytest

from hvqm import (
    HermitianOperator,
    KaehlerFunction,
    StateVector,
    decompose_automorphism,
    expect,
    hamiltonian_flow,
    integrate_field,
    projective_compare,
    ray_distance,
    rotate,
    symmetry_sign,
    unitary_evolve,
    vector_field,
)
from hvqm.dynamics import (
    HamiltonianSystem,
    _adaptive_simpson,
    conjugation_matrix,
    real_form,
)
from hvqm.errors import (
    NotComplexOrConjugateLinear,
    PhaseNotOrbitConstant,
    StepTooLarge,
)

from .conftest import random_hermitian, random_state


def test_unitary_evolve_qubit():
    # e^{-i t sigma_z} e_0 = e^{-i t} e_0
    phi = StateVector.basis(2, 0)
    out = unitary_evolve(HermitianOperator.pauli("z"), 0.7, phi)
    assert np.allclose(out.cvec, np.exp(-0.7j) * phi.cvec, atol=1e-12)


def test_unitary_evolve_preserves_inner_products(rng):
    A = random_hermitian(3, rng)
    phi, psi = random_state(3, rng), random_state(3, rng)
    from hvqm import herm_inner

    before = herm_inner(phi, psi)
    after = herm_inner(unitary_evolve(A, 1.3, phi), unitary_evolve(A, 1.3, psi))
    assert after == pytest.approx(before, abs=1e-12)


def test_adaptive_simpson_oracle():
    assert _adaptive_simpson(np.sin, 0.0, np.pi, 1e-12) == pytest.approx(2.0, abs=1e-10)
    assert _adaptive_simpson(lambda x: x * x, 0.0, 1.0, 1e-12) == pytest.approx(
        1.0 / 3.0, abs=1e-12
    )
    assert _adaptive_simpson(np.exp, 0.0, 0.0, 1e-12) == 0.0


def test_hamiltonian_flow_constant_h_is_extra_phase(rng):
    A = random_hermitian(2, rng)
    phi = random_state(2, rng)
    plain = hamiltonian_flow(HamiltonianSystem(A, 0.0), 0.9, phi)
    shifted = hamiltonian_flow(HamiltonianSystem(A, 2.5), 0.9, phi)
    assert np.allclose(shifted.coords, rotate(plain, -2.5 * 0.9).coords, atol=1e-12)


def test_flow_group_law_callable_h(rng):
    A = random_hermitian(3, rng)
    h = KaehlerFunction.of(random_hermitian(3, rng))
    sys = HamiltonianSystem(A, h)
    phi = random_state(3, rng)
    mid = hamiltonian_flow(sys, 0.35, phi)
    two_leg = hamiltonian_flow(sys, 0.65, mid)
    one_leg = hamiltonian_flow(sys, 1.0, phi)
    assert np.abs(two_leg.coords - one_leg.coords).max() < 2e-9


def test_vector_field_tangent_and_consistent(rng):
    A = random_hermitian(3, rng)
    sys = HamiltonianSystem(A, 1.2)
    phi = random_state(3, rng)
    X = vector_field(sys, phi)
    assert abs(X @ phi.coords) < 1e-10  # tangent to the sphere
    # finite-difference check against the closed-form flow
    eps = 1e-6
    fd = (hamiltonian_flow(sys, eps, phi).coords - hamiltonian_flow(sys, -eps, phi).coords) / (
        2 * eps
    )
    assert np.abs(fd - X).max() < 1e-6


def test_integrate_field_tracks_closed_form(rng):
    A = random_hermitian(2, rng)
    sys = HamiltonianSystem(A, KaehlerFunction.of(random_hermitian(2, rng)))
    phi = random_state(2, rng)
    result = integrate_field(sys, 1.0, phi, step=1e-3)
    assert result.error_estimate < 1e-8
    # energy conserved along the discrete trajectory
    e0 = expect(A, phi)
    for state in result.states[::100]:
        assert expect(A, state) == pytest.approx(e0, abs=1e-9)


def test_integrate_field_rejects_huge_step(rng):
    A = HermitianOperator.diag([17.0, -12.0])
    sys = HamiltonianSystem(A)
    phi = StateVector.from_complex([1.0, 1.0])
    with pytest.raises(StepTooLarge):
        integrate_field(sys, 2.0, phi, step=0.5)
    with pytest.raises(ValueError):
        integrate_field(sys, 1.0, phi, step=0.0)


def test_phase_invariance_check(rng):
    A = random_hermitian(2, rng)
    good = HamiltonianSystem(A, KaehlerFunction.of(HermitianOperator.pauli("x")))
    good.check_phase_invariance(random_state(2, rng))
    bad = HamiltonianSystem(A, lambda phi: float(phi.coords[0]))
    with pytest.raises(PhaseNotOrbitConstant):
        bad.check_phase_invariance(random_state(2, rng))


def test_projective_compare(rng):
    A = random_hermitian(2, rng)
    phi = random_state(2, rng)
    grid = np.linspace(0.0, 2.0, 11)
    same = projective_compare(
        HamiltonianSystem(A, 0.0), HamiltonianSystem(A, 3.3), grid, phi
    )
    assert same.max_distance < 1e-9
    other = projective_compare(
        HamiltonianSystem(A), HamiltonianSystem(random_hermitian(2, rng)), grid, phi
    )
    assert other.max_distance > 0.01
    assert other.t_witness in grid


def test_symmetry_sign(rng):
    n = 3
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(g)
    U = real_form(q)
    assert symmetry_sign(U) == 1
    K = conjugation_matrix(n)
    assert symmetry_sign(U @ K) == -1
    # composition rule: two conjugate-linear maps compose to a linear one
    assert symmetry_sign((U @ K) @ (U @ K)) == 1
    with pytest.raises(NotComplexOrConjugateLinear):
        symmetry_sign(np.eye(5))
    with pytest.raises(NotComplexOrConjugateLinear):
        symmetry_sign(2.0 * np.eye(4))
    # an isometry mixing real blocks arbitrarily is neither
    theta = 0.3
    R = np.eye(4)
    R[0, 0] = R[1, 1] = np.cos(theta)
    R[0, 1], R[1, 0] = -np.sin(theta), np.sin(theta)
    with pytest.raises(NotComplexOrConjugateLinear):
        symmetry_sign(R)


def test_decompose_automorphism(rng):
    n = 2
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(g)
    phi = random_state(n, rng)
    dec = decompose_automorphism(q, 0.8, probe=phi)
    out = dec.apply(phi)
    expected = q @ (np.exp(-0.8j) * phi.cvec)
    assert np.allclose(out.cvec, expected, atol=1e-12)
    # the internal part moves states only within their orbit
    assert ray_distance(dec.internal(phi), phi) < 1e-12
    with pytest.raises(PhaseNotOrbitConstant):
        decompose_automorphism(q, lambda s: float(s.coords[0]), probe=phi)
