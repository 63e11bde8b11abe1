import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hvqm import StateVector, arg_rel, herm_inner, phase_distance, rotate, section, wrap_angle
from hvqm.errors import DimensionMismatch, NotSameRay
from hvqm.realspace import (
    GaugeSection,
    J,
    Ray,
    SPHERE_RADIUS,
    ray_distance,
    real_inner,
    same_ray,
    superposition_path,
)

from .conftest import random_state


def test_wrap_angle_range_and_convention():
    assert wrap_angle(np.pi) == np.pi
    assert wrap_angle(-np.pi) == np.pi  # -pi is identified with pi
    assert wrap_angle(0.0) == 0.0
    assert abs(wrap_angle(3 * np.pi) - np.pi) < 1e-12
    xs = np.linspace(-20, 20, 1001)
    w = wrap_angle(xs)
    assert np.all(w > -np.pi) and np.all(w <= np.pi)


@given(st.floats(-50, 50))
@settings(max_examples=200, deadline=None)
def test_wrap_angle_is_mod_two_pi(theta):
    w = float(wrap_angle(theta))
    assert -np.pi < w <= np.pi
    assert abs((w - theta) % (2 * np.pi)) < 1e-9 or abs((w - theta) % (2 * np.pi) - 2 * np.pi) < 1e-9


def test_state_vector_norm_enforced():
    with pytest.raises(ValueError):
        StateVector.from_complex([1.0, 1.0, 1.0])
    phi = StateVector.from_complex([1.0, 1.0, 1.0], normalize=True)
    assert abs(np.linalg.norm(phi.coords) - SPHERE_RADIUS) < 1e-12
    with pytest.raises(ValueError):
        StateVector.from_complex([0.0, 0.0], normalize=True)


def test_j_squares_to_minus_identity(rng):
    phi = random_state(4, rng)
    assert np.allclose(J(J(phi)).coords, -phi.coords)
    # J is multiplication by i on the complex side
    assert np.allclose(J(phi).cvec, 1j * phi.cvec)


def test_rotate_matches_complex_phase(rng):
    phi = random_state(3, rng)
    theta = 0.73
    assert np.allclose(rotate(phi, theta).cvec, np.exp(1j * theta) * phi.cvec)
    # quarter turn is J
    assert np.allclose(rotate(phi, np.pi / 2).coords, J(phi).coords, atol=1e-12)


def test_rotate_group_action(rng):
    phi = random_state(2, rng)
    a, b = 0.4, -1.9
    once = rotate(rotate(phi, a), b)
    both = rotate(phi, a + b)
    assert np.allclose(once.coords, both.coords, atol=1e-12)


def test_herm_inner_conjugate_linear_first_argument(rng):
    phi, psi = random_state(3, rng), random_state(3, rng)
    z = herm_inner(phi, psi)
    assert herm_inner(psi, phi) == pytest.approx(np.conj(z))
    assert herm_inner(rotate(phi, 0.5), psi) == pytest.approx(z * np.exp(-0.5j))
    assert abs(herm_inner(phi, phi) - 2.0) < 1e-12
    with pytest.raises(DimensionMismatch):
        herm_inner(random_state(2, rng), psi)


def test_arg_rel_examples(rng):
    phi = random_state(3, rng)
    for theta in (0.0, 0.3, -2.2, 3.0):
        assert arg_rel(rotate(phi, theta), phi) == pytest.approx(theta, abs=1e-12)
    # the half-turn lands on the closed endpoint +pi of (-pi, pi]
    assert abs(abs(arg_rel(rotate(phi, -np.pi), phi)) - np.pi) < 1e-12
    psi = random_state(3, rng)
    with pytest.raises(NotSameRay):
        arg_rel(psi, phi)


def test_phase_distance_symmetric(rng):
    phi = random_state(2, rng)
    psi = rotate(phi, 1.1)
    assert phase_distance(phi, psi) == pytest.approx(1.1, abs=1e-12)
    assert phase_distance(psi, phi) == pytest.approx(1.1, abs=1e-12)


def test_section_idempotent_and_phase_invariant(rng):
    for _ in range(20):
        phi = random_state(4, rng)
        rep = section(phi)
        assert np.allclose(section(rep).coords, rep.coords, atol=1e-12)
        rep2 = section(rotate(phi, 2.3))
        assert np.allclose(rep.coords, rep2.coords, atol=1e-10)
        # pivot coordinate is rotated onto the positive real axis
        k = GaugeSection().pivot_index(rep)
        assert rep.cvec[k].real > 0
        assert abs(rep.cvec[k].imag) < 1e-12


def test_section_basis_example():
    phi = StateVector.from_complex([0.0, SPHERE_RADIUS * 1j])
    rep = section(phi)
    assert np.allclose(rep.cvec, [0.0, SPHERE_RADIUS], atol=1e-12)


def test_gauge_rules_differ(rng):
    largest = GaugeSection("largest")
    first = GaugeSection("first")
    assert largest != first
    phi = StateVector.from_complex([0.3 * 1j, 1.0], normalize=True)
    a, b = largest(phi), first(phi)
    assert not np.allclose(a.coords, b.coords)
    with pytest.raises(ValueError):
        GaugeSection("unknown")


def test_ray_contains_and_distance(rng):
    phi = random_state(3, rng)
    ray = Ray.of(phi)
    assert ray.contains(rotate(phi, -0.8))
    assert not ray.contains(random_state(3, rng))
    assert ray_distance(phi, rotate(phi, 1.4)) < 1e-12
    psi = random_state(3, rng)
    assert 0.0 <= ray_distance(phi, psi) <= 1.0


def test_same_ray_rejects_orthogonal_admixture(rng):
    phi = random_state(3, rng)
    g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    g -= (np.vdot(phi.cvec, g) / 2.0) * phi.cvec
    g /= np.linalg.norm(g)
    mixed = StateVector.from_complex(phi.cvec + 1e-2 * g, normalize=True)
    assert not same_ray(phi, mixed)
    with pytest.raises(NotSameRay):
        arg_rel(mixed, phi)


def test_superposition_path_endpoints(rng):
    phi = StateVector.basis(2, 0)
    psi = StateVector.basis(2, 1)
    assert np.allclose(superposition_path(phi, psi, 0.0).coords, phi.coords)
    assert np.allclose(superposition_path(phi, psi, np.pi / 2).coords, psi.coords, atol=1e-12)
    assert real_inner(phi, psi) == 0.0
