import numpy as np
import pytest

from hvqm import (
    BorelSet,
    HermitianOperator,
    HiddenObservable,
    PhaseSampler,
    Ray,
    StateVector,
    born_exact,
    born_monte_carlo,
    expect,
    form_fit,
    mean_value,
)
from hvqm.errors import NotOrthogonal
from hvqm.measure import expectation_path
from hvqm.operators import spectral_projector

from .conftest import random_hermitian, random_state


def test_born_exact_qubit_half():
    T = HermitianOperator.pauli("z")
    phi = StateVector.from_complex([1.0, 1.0])
    f = HiddenObservable.of(T)
    assert born_exact(phi, f, BorelSet.points([1.0])) == pytest.approx(0.5, abs=1e-15)
    assert born_exact(phi, f, BorelSet.points([-1.0])) == pytest.approx(0.5, abs=1e-15)
    assert born_exact(phi, f, BorelSet.reals()) == pytest.approx(1.0, abs=1e-15)
    assert born_exact(phi, f, BorelSet.empty()) == 0.0


def test_born_exact_matches_operator_route(rng):
    for _ in range(25):
        n = int(rng.integers(2, 7))
        T = random_hermitian(n, rng)
        phi = random_state(n, rng)
        f = HiddenObservable.of(T)
        a, b = sorted(rng.normal(scale=2.0, size=2))
        B = BorelSet.interval(a, b)
        p_arc = born_exact(phi, f, B)
        p_op = expect(spectral_projector(f.decomp, B), phi)
        assert p_arc == pytest.approx(p_op, abs=1e-12)


def test_phase_sampler_deterministic_and_uniform():
    s1, s2 = PhaseSampler(7), PhaseSampler(7)
    a, b = s1.draw(1000), s2.draw(1000)
    assert np.array_equal(a, b)
    assert np.all(a >= -np.pi) and np.all(a < np.pi)
    from scipy import stats

    _, p = stats.kstest((s1.draw(20000) + np.pi) / (2 * np.pi), "uniform")
    assert p > 1e-4


def test_born_monte_carlo_three_sigma(rng):
    T = random_hermitian(3, rng)
    phi = random_state(3, rng)
    f = HiddenObservable.of(T)
    B = BorelSet.leq(float(f.decomp.eigenvalues[0]))
    p = born_exact(phi, f, B)
    N = 50_000
    p_hat, stderr = born_monte_carlo(Ray.of(phi), f, B, N, PhaseSampler(11))
    assert abs(p_hat - p) <= 4.0 * np.sqrt(p * (1 - p) / N)
    assert stderr == pytest.approx(np.sqrt(p_hat * (1 - p_hat) / N))
    with pytest.raises(ValueError):
        born_monte_carlo(Ray.of(phi), f, B, 0, PhaseSampler(0))


def test_deterministic_outcomes_sampled_exactly():
    # an eigenstate yields probability 1 and frequency exactly 1
    f = HiddenObservable.of(HermitianOperator.pauli("z"))
    e0 = StateVector.basis(2, 0)
    p_hat, stderr = born_monte_carlo(
        Ray.of(e0), f, BorelSet.points([1.0]), 1000, PhaseSampler(3)
    )
    assert p_hat == 1.0 and stderr == 0.0


def test_mean_value(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        T = random_hermitian(n, rng)
        phi = random_state(n, rng)
        f = HiddenObservable.of(T)
        assert mean_value(f, Ray.of(phi)) == pytest.approx(expect(T, phi), abs=1e-12)


def test_form_fit_accepts_expectations(rng):
    E = HermitianOperator.diag([1.0, 0.0, 0.0])
    phi = StateVector.basis(3, 0)
    psi = StateVector.basis(3, 1)
    fit = form_fit(phi, psi, expectation_path(E, phi, psi))
    assert fit.is_kaehlerian
    assert fit.a == pytest.approx(1.0, abs=1e-9)  # value at t = 0
    assert fit.c == pytest.approx(0.0, abs=1e-9)  # value at t = pi/2


def test_form_fit_rejects_quartic():
    phi = StateVector.basis(2, 0)
    psi = StateVector.basis(2, 1)
    fit = form_fit(phi, psi, lambda t: np.cos(t) ** 4)
    assert not fit.is_kaehlerian
    assert fit.residual > 1e-3


def test_form_fit_requires_orthogonality(rng):
    phi = random_state(2, rng)
    with pytest.raises(NotOrthogonal):
        form_fit(phi, phi, lambda t: 0.0)
