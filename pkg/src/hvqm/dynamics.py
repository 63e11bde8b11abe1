"""Hamiltonian flows with a phase gauge, and automorphisms of the sphere.

The flow of a generator A decorated with an orbit-constant phase speed h is
the unitary Schrodinger evolution times an extra phase e^{-i int h}; all
flows sharing A project to the same ray dynamic.  The generating vector
field is -i A psi - i h(psi) psi.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NotComplexOrConjugateLinear,
    PhaseNotOrbitConstant,
    QuadratureFailure,
    StepTooLarge,
)
from .hidden import RigidContext
from .operators import (
    HermitianOperator,
    SpectralDecomposition,
    as_operator,
    expect,
    grad_expect,
    spectral_decompose,
)
from .realspace import (
    SPHERE_RADIUS,
    StateVector,
    ray_distance,
    rotate,
)


class HamiltonianSystem:
    """Generator pair: Hermitian A plus an orbit-constant phase speed h."""

    def __init__(self, A, h=0.0):
        self.A = as_operator(A)
        self.h = h
        self._decomp: SpectralDecomposition | None = None

    @property
    def decomp(self) -> SpectralDecomposition:
        if self._decomp is None:
            self._decomp = spectral_decompose(self.A)
        return self._decomp

    def h_value(self, phi: StateVector) -> float:
        if callable(self.h):
            return float(self.h(phi))
        return float(self.h)

    def check_phase_invariance(self, phi: StateVector, tol: float = 1e-12,
                               thetas=(0.7, 2.1, -2.9)) -> None:
        base = self.h_value(phi)
        for theta in thetas:
            if abs(self.h_value(rotate(phi, theta)) - base) > tol:
                raise PhaseNotOrbitConstant(
                    "phase speed h is not constant on the orbit"
                )


def unitary_evolve(A, t: float, phi: StateVector,
                   decomp: SpectralDecomposition | None = None) -> StateVector:
    """e^{-i t A} phi via the spectral decomposition, exactly on the sphere."""
    if decomp is None:
        decomp = spectral_decompose(as_operator(A))
    a = phi.cvec
    out = np.zeros_like(a)
    for lam, P in zip(decomp.eigenvalues, decomp.projectors):
        out += np.exp(-1j * t * lam) * (P @ a)
    return StateVector.from_complex(out, normalize=True)


def _adaptive_simpson(g, a: float, b: float, tol: float, max_depth: int = 30) -> float:
    """Classic adaptive composite Simpson with Richardson acceptance."""

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid, rmid = 0.5 * (lo + mid), 0.5 * (mid + hi)
        fl, fr = g(lmid), g(rmid)
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        if depth <= 0:
            raise QuadratureFailure("adaptive Simpson refinement budget exceeded")
        if abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, flo, fl, fmid, left, eps / 2.0, depth - 1) + recurse(
            mid, hi, fmid, fr, fhi, right, eps / 2.0, depth - 1
        )

    if a == b:
        return 0.0
    fa, fm, fb = g(a), g(0.5 * (a + b)), g(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)


def hamiltonian_flow(sys: HamiltonianSystem, t: float, phi: StateVector,
                     quad_tol: float = 1e-9) -> StateVector:
    """Closed-form flow: e^{-i int_0^t h(e^{-i r A} phi) dr} e^{-i t A} phi."""
    if not callable(sys.h):
        phase = float(sys.h) * t
    else:
        phase = _adaptive_simpson(
            lambda r: sys.h_value(unitary_evolve(sys.A, r, phi, sys.decomp)),
            0.0,
            t,
            quad_tol,
        )
    return rotate(unitary_evolve(sys.A, t, phi, sys.decomp), -phase)


def vector_field(sys: HamiltonianSystem, phi: StateVector,
                 consistency_tol: float = 1e-10) -> np.ndarray:
    """X(phi) = -J(A phi) - h(phi) J(phi), as a real tangent 2n-vector.

    Computed both directly and through the gradient splitting
    -J grad<A> - (<A> + h) J phi; the two must agree.
    """
    space = phi.space
    h_val = sys.h_value(phi)
    direct = -space.J(sys.A.apply(phi)) - h_val * space.J(phi.coords)
    split = (
        -space.J(grad_expect(sys.A, phi))
        - (expect(sys.A, phi) + h_val) * space.J(phi.coords)
    )
    mism = np.abs(direct - split).max()
    if mism > consistency_tol:
        raise AssertionError(f"vector field forms disagree by {mism:.3e}")
    return direct


@dataclass
class FlowResult:
    """Sampled trajectory of an integrated or closed-form flow."""

    ts: np.ndarray
    states: list = field(repr=False)
    method: str = "integrated"
    error_estimate: float = 0.0


def _field_raw(sys: HamiltonianSystem, y: np.ndarray, space) -> np.ndarray:
    """The flow field on raw coordinates (off-sphere stages renormalized for h)."""
    n = space.n
    c = y[:n] + 1j * y[n:]
    nrm = np.linalg.norm(y)
    on_sphere = StateVector(space, y * (SPHERE_RADIUS / nrm))
    h_val = sys.h_value(on_sphere)
    out = -1j * (sys.A.matrix @ c) - 1j * h_val * c
    return np.concatenate([out.real, out.imag])


def integrate_field(sys: HamiltonianSystem, t: float, phi: StateVector,
                    step: float, energy_drift_tol: float = 1e-3) -> FlowResult:
    """RK4 integration of the flow field with per-step sphere renormalization."""
    if step <= 0:
        raise ValueError("step must be positive")
    space = phi.space
    n_steps = max(1, int(round(abs(t) / step)))
    dt = t / n_steps
    y = phi.coords.copy()
    e0 = expect(sys.A, phi)
    ts = [0.0]
    states = [phi]
    for j in range(n_steps):
        k1 = _field_raw(sys, y, space)
        k2 = _field_raw(sys, y + 0.5 * dt * k1, space)
        k3 = _field_raw(sys, y + 0.5 * dt * k2, space)
        k4 = _field_raw(sys, y + dt * k3, space)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        y *= SPHERE_RADIUS / np.linalg.norm(y)
        state = StateVector(space, y.copy())
        if abs(expect(sys.A, state) - e0) > energy_drift_tol:
            raise StepTooLarge(
                f"energy drift exceeded {energy_drift_tol:g} at step {j + 1}"
            )
        ts.append((j + 1) * dt)
        states.append(state)
    closed = hamiltonian_flow(sys, t, phi)
    err = float(np.abs(states[-1].coords - closed.coords).max())
    return FlowResult(np.array(ts), states, method="integrated", error_estimate=err)


class ProjectiveComparison:
    """Max ray distance between two flows over a time grid, with witness."""

    def __init__(self, max_distance: float, t_witness: float):
        self.max_distance = max_distance
        self.t_witness = t_witness


def projective_compare(sys_a: HamiltonianSystem, sys_b: HamiltonianSystem,
                       t_grid, phi: StateVector,
                       quad_tol: float = 1e-9) -> ProjectiveComparison:
    """Compare the ray trajectories induced by two systems from one state."""
    best, t_at = 0.0, 0.0
    for t in np.asarray(t_grid, dtype=float):
        d = ray_distance(
            hamiltonian_flow(sys_a, float(t), phi, quad_tol),
            hamiltonian_flow(sys_b, float(t), phi, quad_tol),
        )
        if d > best:
            best, t_at = d, float(t)
    return ProjectiveComparison(best, t_at)


def _j_matrix(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def symmetry_sign(U: np.ndarray, tol: float = 1e-9) -> int:
    """+1 for a complex-linear isometry, -1 for a conjugate-linear one."""
    U = np.asarray(U, dtype=float)
    m = U.shape[0]
    if U.ndim != 2 or U.shape[0] != U.shape[1] or m % 2 != 0:
        raise NotComplexOrConjugateLinear("expected a square 2n x 2n real matrix")
    if np.abs(U.T @ U - np.eye(m)).max() > tol:
        raise NotComplexOrConjugateLinear("map is not an isometry")
    Jm = _j_matrix(m // 2)
    if np.abs(U @ Jm - Jm @ U).max() <= tol:
        return 1
    if np.abs(U @ Jm + Jm @ U).max() <= tol:
        return -1
    raise NotComplexOrConjugateLinear(
        "isometry neither commutes nor anticommutes with J"
    )


def real_form(U_complex: np.ndarray) -> np.ndarray:
    """Real 2n x 2n block form of a complex-linear map."""
    U_complex = np.asarray(U_complex, dtype=complex)
    return np.block(
        [[U_complex.real, -U_complex.imag], [U_complex.imag, U_complex.real]]
    )


def conjugation_matrix(n: int) -> np.ndarray:
    """[x; y] -> [x; -y]: complex conjugation in the real block form."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


class AutomorphismDecomposition:
    """Phi = U o nu with nu an internal (pure-phase) equivalence."""

    def __init__(self, unitary: np.ndarray, h):
        self.unitary = np.asarray(unitary, dtype=complex)
        self.h = h
        self.context = RigidContext(lambda rep: -self._h_value(rep))

    def _h_value(self, phi: StateVector) -> float:
        return float(self.h(phi)) if callable(self.h) else float(self.h)

    def internal(self, phi: StateVector) -> StateVector:
        """nu(phi) = e^{-i h(phi)} phi."""
        return rotate(phi, -self._h_value(phi))

    def apply(self, phi: StateVector) -> StateVector:
        nu_phi = self.internal(phi)
        return StateVector.from_complex(self.unitary @ nu_phi.cvec)


def decompose_automorphism(U: np.ndarray, h,
                           probe: StateVector | None = None,
                           tol: float = 1e-12) -> AutomorphismDecomposition:
    """Split the map phi -> U e^{-i h(phi)} phi into (unitary, internal) parts."""
    dec = AutomorphismDecomposition(U, h)
    if probe is not None:
        base = dec._h_value(probe)
        for theta in (0.9, -1.7):
            if abs(dec._h_value(rotate(probe, theta)) - base) > tol:
                raise PhaseNotOrbitConstant("h is not constant on the probe orbit")
    return dec
