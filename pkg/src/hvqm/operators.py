"""Hermitian operators, spectral decompositions and Borel sets of the line.

Operators act complex-linearly on C^n; expectations are taken against
sphere states of radius sqrt(2), so expect(A, phi) = <phi, A phi> / 2
agrees with the textbook expectation at the unit vector phi / sqrt(2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EigSolverFailure, NotHermitian
from .realspace import StateVector

HERMITIAN_TOL = 1e-8
MERGE_TOL = 1e-10

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class HermitianOperator:
    """A self-adjoint complex-linear operator, stored as complex entries."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: float = HERMITIAN_TOL):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise NotHermitian(f"expected a square matrix, got shape {matrix.shape}")
        asym = np.abs(matrix - matrix.conj().T).max()
        if asym > tol:
            raise NotHermitian(f"asymmetry {asym:.3e} exceeds tolerance {tol:.0e}")
        self.matrix = 0.5 * (matrix + matrix.conj().T)

    @classmethod
    def identity(cls, n: int) -> "HermitianOperator":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def zero(cls, n: int) -> "HermitianOperator":
        return cls(np.zeros((n, n), dtype=complex))

    @classmethod
    def pauli(cls, which: str) -> "HermitianOperator":
        return cls(PAULI[which])

    @classmethod
    def diag(cls, values) -> "HermitianOperator":
        return cls(np.diag(np.asarray(values, dtype=float)).astype(complex))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "HermitianOperator":
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return cls(0.5 * (g + g.conj().T))

    @classmethod
    def from_spectrum(cls, eigenvalues, rng: np.random.Generator) -> "HermitianOperator":
        """Conjugate diag(eigenvalues) by a Haar-seeded random unitary."""
        eigenvalues = np.asarray(eigenvalues, dtype=float)
        n = eigenvalues.shape[0]
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        q, r = np.linalg.qr(g)
        q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        return cls((q * eigenvalues) @ q.conj().T)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def apply_c(self, cvec: np.ndarray) -> np.ndarray:
        return self.matrix @ cvec

    def apply(self, phi: StateVector) -> np.ndarray:
        """Action on a state, returned as real 2n coordinates."""
        return phi.space.to_real(self.matrix @ phi.cvec)

    def is_projector(self, tol: float = 1e-9) -> bool:
        return bool(np.abs(self.matrix @ self.matrix - self.matrix).max() <= tol)

    def __add__(self, other):
        return HermitianOperator(self.matrix + as_operator(other).matrix, tol=np.inf)

    def __sub__(self, other):
        return HermitianOperator(self.matrix - as_operator(other).matrix, tol=np.inf)

    def __mul__(self, scalar):
        return HermitianOperator(self.matrix * float(scalar), tol=np.inf)

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianOperator(n={self.n})"


def as_operator(A) -> HermitianOperator:
    if isinstance(A, HermitianOperator):
        return A
    return HermitianOperator(A)


def anticommutator_half(A: HermitianOperator, B: HermitianOperator) -> HermitianOperator:
    return HermitianOperator(0.5 * (A.matrix @ B.matrix + B.matrix @ A.matrix))


def commutator_times_minus_i(A: HermitianOperator, B: HermitianOperator) -> HermitianOperator:
    return HermitianOperator(-1j * (A.matrix @ B.matrix - B.matrix @ A.matrix))


@dataclass(frozen=True)
class Interval:
    """One interval of the real line with open/closed endpoint tags."""

    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    def contains(self, x: float) -> bool:
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below


class BorelSet:
    """A finite union of real intervals, canonically disjoint and sorted."""

    __slots__ = ("intervals",)

    def __init__(self, intervals=()):
        self.intervals = _canonicalize(list(intervals))

    @classmethod
    def empty(cls) -> "BorelSet":
        return cls()

    @classmethod
    def reals(cls) -> "BorelSet":
        return cls([Interval(-np.inf, np.inf, False, False)])

    @classmethod
    def points(cls, values, atol: float = 1e-9) -> "BorelSet":
        """Singletons, padded by atol so numerically computed spectra match."""
        return cls(
            [Interval(float(v) - atol, float(v) + atol, True, True) for v in values]
        )

    @classmethod
    def interval(cls, lo, hi, lo_closed=False, hi_closed=True) -> "BorelSet":
        return cls([Interval(float(lo), float(hi), lo_closed, hi_closed)])

    @classmethod
    def leq(cls, s) -> "BorelSet":
        """The half line (-inf, s]."""
        return cls([Interval(-np.inf, float(s), False, True)])

    def contains(self, x: float) -> bool:
        return any(iv.contains(float(x)) for iv in self.intervals)

    def contains_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return np.array([self.contains(x) for x in xs.ravel()]).reshape(xs.shape)

    def __repr__(self):
        def end(iv):
            lo = "[" if iv.lo_closed else "("
            hi = "]" if iv.hi_closed else ")"
            return f"{lo}{iv.lo}, {iv.hi}{hi}"

        return "BorelSet{" + " u ".join(end(iv) for iv in self.intervals) + "}"


def _canonicalize(intervals):
    intervals = [
        iv
        for iv in intervals
        if iv.lo < iv.hi or (iv.lo == iv.hi and iv.lo_closed and iv.hi_closed)
    ]
    intervals.sort(key=lambda iv: (iv.lo, not iv.lo_closed))
    merged: list[Interval] = []
    for iv in intervals:
        if merged:
            prev = merged[-1]
            touching = iv.lo < prev.hi or (
                iv.lo == prev.hi and (iv.lo_closed or prev.hi_closed)
            )
            if touching:
                if (iv.hi, iv.hi_closed) > (prev.hi, prev.hi_closed):
                    merged[-1] = Interval(prev.lo, iv.hi, prev.lo_closed, iv.hi_closed)
                continue
        merged.append(iv)
    return tuple(merged)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct ascending eigenvalues with their orthogonal eigenprojectors."""

    eigenvalues: np.ndarray
    projectors: tuple
    multiplicities: tuple

    @property
    def n(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def k(self) -> int:
        return len(self.eigenvalues)

    def operator(self) -> HermitianOperator:
        total = sum(lam * P for lam, P in zip(self.eigenvalues, self.projectors))
        return HermitianOperator(total)

    def projector_operators(self):
        return [HermitianOperator(P) for P in self.projectors]


def spectral_decompose(A, tol: float = MERGE_TOL) -> SpectralDecomposition:
    """Eigendecomposition with eigenvalues closer than tol merged."""
    A = as_operator(A)
    try:
        vals, vecs = np.linalg.eigh(A.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigSolverFailure(str(exc)) from exc
    groups: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[groups[-1][0]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    eigenvalues = np.array([float(np.mean(vals[g])) for g in groups])
    projectors = []
    for g in groups:
        V = vecs[:, g]
        projectors.append(V @ V.conj().T)
    mults = tuple(len(g) for g in groups)
    return SpectralDecomposition(eigenvalues, tuple(projectors), mults)


def expect(A, phi: StateVector) -> float:
    """<A>_phi = <phi, A phi> / 2, the quantum expectation at phi / sqrt(2)."""
    A = as_operator(A)
    a = phi.cvec
    if A.n != a.shape[0]:
        raise DimensionMismatch(f"operator n={A.n}, state n={a.shape[0]}")
    return float(np.vdot(a, A.matrix @ a).real) / 2.0


def grad_expect(A, phi: StateVector) -> np.ndarray:
    """Sphere gradient of the expectation: A phi - <A>_phi phi (real 2n)."""
    A = as_operator(A)
    e = expect(A, phi)
    return phi.space.to_real(A.matrix @ phi.cvec - e * phi.cvec)


def spectral_projector(D: SpectralDecomposition, B: BorelSet) -> HermitianOperator:
    """Sum of the eigenprojectors whose eigenvalue falls in B."""
    total = np.zeros((D.n, D.n), dtype=complex)
    for lam, P in zip(D.eigenvalues, D.projectors):
        if B.contains(lam):
            total += P
    return HermitianOperator(total)


def weights(D: SpectralDecomposition, phi: StateVector) -> np.ndarray:
    """Spectral probabilities <E_i>_phi in eigenvalue order."""
    return np.array([expect(HermitianOperator(P), phi) for P in D.projectors])


def cumulative(D: SpectralDecomposition, phi: StateVector, s: float) -> float:
    """F(s) = <E_{(-inf, s]}>_phi, a right-continuous step function."""
    w = weights(D, phi)
    return float(w[D.eigenvalues <= s].sum())


def borel_transform(D: SpectralDecomposition, b) -> SpectralDecomposition:
    """Push the spectrum through b, merging eigenspaces where b collides."""
    mapped = [float(b(lam)) for lam in D.eigenvalues]
    order = sorted(range(D.k), key=lambda i: mapped[i])
    new_vals: list[float] = []
    new_projs: list[np.ndarray] = []
    new_mults: list[int] = []
    for i in order:
        if new_vals and mapped[i] - new_vals[-1] <= MERGE_TOL:
            new_projs[-1] = new_projs[-1] + D.projectors[i]
            new_mults[-1] += D.multiplicities[i]
        else:
            new_vals.append(mapped[i])
            new_projs.append(D.projectors[i].copy())
            new_mults.append(D.multiplicities[i])
    return SpectralDecomposition(np.array(new_vals), tuple(new_projs), tuple(new_mults))


def random_projector(n: int, rank: int, rng: np.random.Generator) -> HermitianOperator:
    """Rank-r orthogonal projector onto a Haar-random subspace."""
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    q, _ = np.linalg.qr(g)
    return HermitianOperator(q @ q.conj().T)
