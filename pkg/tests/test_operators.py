import numpy as np
import pytest

from hvqm import (
    BorelSet,
    HermitianOperator,
    StateVector,
    borel_transform,
    cumulative,
    expect,
    grad_expect,
    spectral_decompose,
    spectral_projector,
)
from hvqm.errors import DimensionMismatch, NotHermitian
from hvqm.operators import (
    Interval,
    anticommutator_half,
    commutator_times_minus_i,
    random_projector,
    weights,
)

from .conftest import random_hermitian, random_state


def test_hermitian_validation():
    with pytest.raises(NotHermitian):
        HermitianOperator([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotHermitian):
        HermitianOperator(np.zeros((2, 3)))
    A = HermitianOperator.pauli("y")
    assert np.allclose(A.matrix, A.matrix.conj().T)


def test_spectral_decompose_reconstructs(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        A = random_hermitian(n, rng)
        D = spectral_decompose(A)
        assert np.abs(D.operator().matrix - A.matrix).max() < 1e-10
        # projectors are an orthogonal resolution of the identity
        total = sum(D.projectors)
        assert np.abs(total - np.eye(n)).max() < 1e-10
        for i, P in enumerate(D.projectors):
            assert np.abs(P @ P - P).max() < 1e-10
            for Q in D.projectors[i + 1:]:
                assert np.abs(P @ Q).max() < 1e-10
        assert sum(D.multiplicities) == n
        assert np.all(np.diff(D.eigenvalues) > 0)


def test_degenerate_spectrum_merges():
    D = spectral_decompose(HermitianOperator.diag([1.0, 1.0, 3.0]))
    assert D.k == 2
    assert D.multiplicities == (2, 1)
    assert np.allclose(D.eigenvalues, [1.0, 3.0])


def test_expect_matches_textbook(rng):
    A = HermitianOperator.pauli("z")
    assert expect(A, StateVector.basis(2, 0)) == pytest.approx(1.0)
    assert expect(A, StateVector.basis(2, 1)) == pytest.approx(-1.0)
    plus = StateVector.from_complex([1.0, 1.0], normalize=True)
    assert expect(A, plus) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DimensionMismatch):
        expect(A, random_state(3, rng))


def test_grad_expect_is_tangent_and_phase_equivariant(rng):
    A = random_hermitian(3, rng)
    phi = random_state(3, rng)
    g = grad_expect(A, phi)
    assert abs(g @ phi.coords) < 1e-10  # tangent to the sphere
    # expectation is phase invariant, so the gradient norm is too
    from hvqm import rotate

    g2 = grad_expect(A, rotate(phi, 1.2))
    assert np.linalg.norm(g) == pytest.approx(np.linalg.norm(g2), abs=1e-12)


def test_borel_set_membership():
    B = BorelSet.interval(0.0, 1.0)  # (0, 1]
    assert not B.contains(0.0)
    assert B.contains(1.0)
    assert BorelSet.leq(2.0).contains(-100.0)
    P = BorelSet.points([1.0, 3.0])
    assert P.contains(1.0) and P.contains(3.0) and not P.contains(2.0)
    assert P.contains(1.0 + 1e-10)  # padded for floating-point spectra
    assert BorelSet.reals().contains(1e9)
    assert not BorelSet.empty().contains(0.0)


def test_borel_canonicalization():
    B = BorelSet(
        [Interval(0.0, 1.0, True, False), Interval(1.0, 2.0, True, True),
         Interval(5.0, 4.0, False, False)]
    )
    assert len(B.intervals) == 1
    assert B.contains(1.0) and B.contains(2.0) and not B.contains(3.0)


def test_spectral_projector_and_weights(rng):
    n = 4
    A = random_hermitian(n, rng)
    D = spectral_decompose(A)
    phi = random_state(n, rng)
    w = weights(D, phi)
    assert np.all(w >= -1e-12)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
    s = float(D.eigenvalues[1])
    E = spectral_projector(D, BorelSet.leq(s))
    assert E.is_projector()
    assert expect(E, phi) == pytest.approx(cumulative(D, phi, s), abs=1e-12)
    assert np.abs(spectral_projector(D, BorelSet.reals()).matrix - np.eye(n)).max() < 1e-10


def test_borel_transform_square(rng):
    D = spectral_decompose(HermitianOperator.pauli("z"))
    D2 = borel_transform(D, lambda x: x * x)
    assert D2.k == 1
    assert D2.eigenvalues[0] == pytest.approx(1.0)
    assert np.abs(D2.projectors[0] - np.eye(2)).max() < 1e-12
    # functoriality on a generic operator: (b o id) = b
    A = random_hermitian(4, rng)
    DA = spectral_decompose(A)
    Did = borel_transform(DA, lambda x: x)
    assert np.allclose(Did.eigenvalues, DA.eigenvalues)


def test_bracket_helpers_are_hermitian(rng):
    A, B = random_hermitian(3, rng), random_hermitian(3, rng)
    S = anticommutator_half(A, B)
    K = commutator_times_minus_i(A, B)
    assert np.abs(S.matrix - S.matrix.conj().T).max() < 1e-12
    assert np.abs(K.matrix - K.matrix.conj().T).max() < 1e-12


def test_random_projector_rank(rng):
    for rank in (1, 2, 3):
        P = random_projector(4, rank, rng)
        assert P.is_projector()
        assert round(np.trace(P.matrix).real) == rank
