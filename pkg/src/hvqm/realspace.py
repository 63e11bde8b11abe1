"""Real presentation of a finite complex Hilbert space and its phase sphere.

A complex vector x + iy in C^n is stored as the real 2n-vector [x; y].
Multiplication by i becomes the block map J[x; y] = [-y; x], and the phase
circle acts by rotate(phi, theta) = cos(theta)*phi + sin(theta)*J(phi).
Classical states live on the sphere of radius sqrt(2), so that the unit
quantum vector is coords / sqrt(2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotSameRay

SPHERE_RADIUS = np.sqrt(2.0)
SPHERE_TOL = 1e-12
SAME_RAY_TOL = 1e-9


def wrap_angle(theta):
    """Map an angle (or array of angles) to the half-open interval (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(theta), 2.0 * np.pi)


@dataclass(frozen=True)
class ComplexSpace:
    """C^n seen as R^{2n} with the block complex structure J."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("complex dimension must be positive")

    @property
    def real_dim(self) -> int:
        return 2 * self.n

    def to_complex(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return coords[: self.n] + 1j * coords[self.n :]

    def to_real(self, cvec: np.ndarray) -> np.ndarray:
        cvec = np.asarray(cvec, dtype=complex)
        return np.concatenate([cvec.real, cvec.imag])

    def J(self, coords: np.ndarray) -> np.ndarray:
        """The complex structure: J[x; y] = [-y; x]; J o J = -identity."""
        coords = np.asarray(coords, dtype=float)
        return np.concatenate([-coords[self.n :], coords[: self.n]])


@dataclass(frozen=True)
class StateVector:
    """A hidden classical state: a point of the sphere of radius sqrt(2)."""

    space: ComplexSpace
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", coords)
        if coords.shape != (self.space.real_dim,):
            raise DimensionMismatch(
                f"expected real dimension {self.space.real_dim}, got {coords.shape}"
            )
        if abs(np.linalg.norm(coords) - SPHERE_RADIUS) > 1e-9:
            raise ValueError("state is not on the sphere of radius sqrt(2)")

    @classmethod
    def from_complex(cls, cvec, normalize: bool = False) -> "StateVector":
        cvec = np.asarray(cvec, dtype=complex)
        if normalize:
            nrm = np.linalg.norm(cvec)
            if nrm == 0:
                raise ValueError("cannot normalize the zero vector")
            cvec = cvec * (SPHERE_RADIUS / nrm)
        space = ComplexSpace(cvec.shape[0])
        return cls(space, space.to_real(cvec))

    @classmethod
    def basis(cls, n: int, i: int) -> "StateVector":
        cvec = np.zeros(n, dtype=complex)
        cvec[i] = SPHERE_RADIUS
        return cls.from_complex(cvec)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "StateVector":
        cvec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return cls.from_complex(cvec, normalize=True)

    @property
    def cvec(self) -> np.ndarray:
        """The complex n-vector x + iy (norm sqrt(2))."""
        return self.space.to_complex(self.coords)

    @property
    def unit(self) -> np.ndarray:
        """The associated unit complex vector psi = coords / sqrt(2)."""
        return self.cvec / SPHERE_RADIUS


def J(phi: StateVector) -> StateVector:
    return StateVector(phi.space, phi.space.J(phi.coords))


def rotate(phi: StateVector, theta: float) -> StateVector:
    """Phase action: cos(theta)*phi + sin(theta)*J(phi), i.e. e^{i theta} phi."""
    c, s = np.cos(theta), np.sin(theta)
    return StateVector(phi.space, c * phi.coords + s * phi.space.J(phi.coords))


def _cvec_of(v) -> np.ndarray:
    if isinstance(v, StateVector):
        return v.cvec
    return np.asarray(v, dtype=complex)


def herm_inner(phi, psi) -> complex:
    """Sesquilinear form <phi, J phi> style: <phi,psi> + i <J phi, psi>.

    Conjugate-linear in the first argument; equals the standard Hermitian
    inner product of the associated complex vectors.
    """
    a, b = _cvec_of(phi), _cvec_of(psi)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


def real_inner(v, w) -> float:
    """The real scalar product on R^{2n} (accepts StateVector or raw coords)."""
    a = v.coords if isinstance(v, StateVector) else np.asarray(v, dtype=float)
    b = w.coords if isinstance(w, StateVector) else np.asarray(w, dtype=float)
    return float(a @ b)


def same_ray(phi: StateVector, psi: StateVector, tol: float = SAME_RAY_TOL) -> bool:
    return abs(abs(herm_inner(phi, psi)) - 2.0) <= tol


def arg_rel(psi: StateVector, phi: StateVector, tol: float = SAME_RAY_TOL) -> float:
    """The angle theta in (-pi, pi] with psi = rotate(phi, theta)."""
    z = herm_inner(phi, psi)
    if abs(abs(z) - 2.0) > tol:
        raise NotSameRay(f"|<<phi,psi>>| = {abs(z)}, expected 2")
    return float(wrap_angle(np.angle(z)))


def phase_distance(phi: StateVector, psi: StateVector) -> float:
    """|Arg(psi/phi)| within one orbit: a metric on the phase circle."""
    return abs(arg_rel(psi, phi))


class GaugeSection:
    """A deterministic choice of one representative state per ray.

    The default rule picks the complex coordinate of largest modulus (lowest
    index on ties within tie_tol) and rotates it onto the positive real axis.
    rule="first" instead pivots on the first coordinate of non-negligible
    modulus; distinct rules give distinct gauges for covariance checks.
    """

    def __init__(self, rule: str = "largest", tie_tol: float = 1e-12):
        if rule not in ("largest", "first"):
            raise ValueError(f"unknown gauge rule {rule!r}")
        self.rule = rule
        self.tie_tol = tie_tol

    def pivot_index(self, phi: StateVector) -> int:
        mags = np.abs(phi.cvec)
        if self.rule == "largest":
            top = mags.max()
            return int(np.nonzero(mags >= top - self.tie_tol)[0][0])
        return int(np.nonzero(mags >= 1e-8)[0][0])

    def __call__(self, phi: StateVector) -> StateVector:
        k = self.pivot_index(phi)
        u = np.angle(phi.cvec[k])
        return rotate(phi, -float(u))

    def __eq__(self, other):
        return (
            isinstance(other, GaugeSection)
            and self.rule == other.rule
            and self.tie_tol == other.tie_tol
        )

    def __hash__(self):
        return hash((self.rule, self.tie_tol))


DEFAULT_GAUGE = GaugeSection()


def section(phi: StateVector, gauge: GaugeSection = DEFAULT_GAUGE) -> StateVector:
    """Canonical representative of the ray of phi under the given gauge."""
    return gauge(phi)


@dataclass(frozen=True)
class Ray:
    """A phase orbit, identified by its canonical representative."""

    representative: StateVector

    @classmethod
    def of(cls, phi: StateVector, gauge: GaugeSection = DEFAULT_GAUGE) -> "Ray":
        return cls(gauge(phi))

    def state(self, theta: float = 0.0) -> StateVector:
        return rotate(self.representative, theta)

    def contains(self, phi: StateVector, tol: float = SAME_RAY_TOL) -> bool:
        return same_ray(self.representative, phi, tol)


def ray_distance(phi: StateVector, psi: StateVector) -> float:
    """Gauge-free distance 1 - |<<phi,psi>>| / 2; zero iff same ray."""
    return 1.0 - abs(herm_inner(phi, psi)) / 2.0


def superposition_path(phi: StateVector, psi: StateVector, t) -> StateVector:
    """gamma(t) = cos(t) phi + sin(t) psi for orthogonal sphere vectors."""
    coords = np.cos(t) * phi.coords + np.sin(t) * psi.coords
    return StateVector(phi.space, coords)
