"""Logical structure: compatibility, boolean embedding, independence no-go,
contextuality witnesses and the frame-function obstruction.

Compatibility of two arc propositions is equivalent to commutation of their
projectors; the constructive branch exhibits a joint observable refining
both, the destructive branch exhibits a superposition path along which the
joint-truth measure fails the cos^2 form test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    GaugeMismatch,
    IncompatibleFamily,
    NeedsDimensionThree,
    NoSharedVector,
)
from .hidden import (
    IDENTITY_CONTEXT,
    Context,
    HiddenObservable,
    Proposition,
    member,
    partition_of,
    preimage_proposition,
    proposition_of,
)
from .measure import form_fit
from .operators import (
    BorelSet,
    HermitianOperator,
    SpectralDecomposition,
    as_operator,
    expect,
    spectral_decompose,
)
from .realspace import (
    DEFAULT_GAUGE,
    GaugeSection,
    StateVector,
    rotate,
    section,
)

COMMUTATOR_TOL = 1e-10
FORM_FAIL_THRESHOLD = 1e-3


@dataclass
class PropositionFamily:
    """Propositions carved out of one hidden observable by Borel sets."""

    observable: HiddenObservable
    borel_sets: list
    members: list

    @classmethod
    def from_borel_sets(cls, f: HiddenObservable, borel_sets) -> "PropositionFamily":
        borel_sets = list(borel_sets)
        members = [preimage_proposition(f, B) for B in borel_sets]
        return cls(f, borel_sets, members)


@dataclass
class CompatibilityResult:
    compatible: bool
    joint: Optional[HiddenObservable] = None
    joint_sets: Optional[tuple] = None
    witness_states: Optional[tuple] = None
    witness_residual: Optional[float] = None


def _joint_decomposition(E: HermitianOperator, F: HermitianOperator):
    """Resolution by the four products of {E, I-E} with {F, I-F}.

    Cells are valued 2a + b where a, b flag membership of E and F, so the
    Borel sets {2, 3} and {1, 3} recover the two projectors.
    """
    n = E.n
    eye = np.eye(n, dtype=complex)
    parts = {
        (1, 1): E.matrix @ F.matrix,
        (1, 0): E.matrix @ (eye - F.matrix),
        (0, 1): (eye - E.matrix) @ F.matrix,
        (0, 0): (eye - E.matrix) @ (eye - F.matrix),
    }
    vals, projs, mults = [], [], []
    for (a, b), P in sorted(parts.items(), key=lambda kv: 2 * kv[0][0] + kv[0][1]):
        P = 0.5 * (P + P.conj().T)
        rank = int(round(np.trace(P).real))
        if rank == 0:
            continue
        vals.append(float(2 * a + b))
        projs.append(P)
        mults.append(rank)
    return SpectralDecomposition(np.array(vals), tuple(projs), tuple(mults))


def _incompatibility_path(E: HermitianOperator, F: HermitianOperator):
    """A superposition path from range(E) to ker(E) with maximal F cross term."""
    n = E.n
    ker_proj = np.eye(n, dtype=complex) - E.matrix
    cross = E.matrix @ F.matrix @ ker_proj
    u, s, vh = np.linalg.svd(cross)
    alpha = u[:, 0]
    beta = vh[0].conj()
    phi = StateVector.from_complex(alpha, normalize=True)
    psi = StateVector.from_complex(beta, normalize=True)
    return phi, psi, float(s[0])


def compatible(L: Proposition, M: Proposition) -> CompatibilityResult:
    """Decide compatibility; return a joint observable or a failing path."""
    if L.gauge != M.gauge:
        raise GaugeMismatch("propositions use different gauge sections")
    E, F = L.projector, M.projector
    comm = np.abs(E.matrix @ F.matrix - F.matrix @ E.matrix).max()
    if comm <= COMMUTATOR_TOL:
        joint = HiddenObservable(_joint_decomposition(E, F), L.gauge, L.context)
        B_L = BorelSet.points([2.0, 3.0])
        B_M = BorelSet.points([1.0, 3.0])
        return CompatibilityResult(True, joint=joint, joint_sets=(B_L, B_M))
    phi, psi, _ = _incompatibility_path(E, F)

    def g(t: float) -> float:
        from .realspace import superposition_path

        state = superposition_path(phi, psi, t)
        return expect(E, state) * expect(F, state)

    fit = form_fit(phi, psi, g)
    return CompatibilityResult(
        False, witness_states=(phi, psi), witness_residual=fit.residual
    )


def boolean_morphism_check(family: PropositionFamily, rng: np.random.Generator,
                           n_states: int = 100, tol: float = 1e-12) -> dict:
    """Verify the boolean-algebra identities of the projector assignment.

    On members of a single spectral family: intersection measure matches
    <E F>, complements and unions match, and disjoint unions are additive.
    """
    props = family.members
    projs = [p.projector for p in props]
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            comm = np.abs(
                projs[i].matrix @ projs[j].matrix - projs[j].matrix @ projs[i].matrix
            ).max()
            if comm > COMMUTATOR_TOL:
                raise IncompatibleFamily(
                    f"projectors {i} and {j} do not commute ({comm:.3e})"
                )
    n = projs[0].n
    worst = 0.0
    checks = 0
    for _ in range(n_states):
        phi = StateVector.random(n, rng)
        for i, (Bi, Li) in enumerate(zip(family.borel_sets, props)):
            arcs_i = Li.orbit_arcs(phi)
            # complement: measure adds to one
            dev = abs(
                arcs_i.complement().normalized_measure
                - expect(
                    HermitianOperator(np.eye(n, dtype=complex) - projs[i].matrix), phi
                )
            )
            worst = max(worst, dev)
            checks += 1
            for j in range(i + 1, len(props)):
                arcs_j = props[j].orbit_arcs(phi)
                inter = arcs_i.intersection(arcs_j).normalized_measure
                product = HermitianOperator(projs[i].matrix @ projs[j].matrix)
                dev = abs(inter - expect(product, phi))
                worst = max(worst, dev)
                union = arcs_i.union(arcs_j).normalized_measure
                join = HermitianOperator(
                    projs[i].matrix + projs[j].matrix - product.matrix
                )
                dev_u = abs(union - expect(join, phi))
                worst = max(worst, dev_u)
                checks += 2
    return {"max_deviation": worst, "checks": checks, "pass": worst <= tol}


@dataclass
class IndependenceVerdict:
    kind: str  # "BANAL" | "NO_G"
    residual: float = 0.0
    G: Optional[np.ndarray] = None


def _expectation_features(states: list[StateVector], n: int) -> np.ndarray:
    """Design matrix expressing <G>_phi linearly in Hermitian parameters."""
    rows = []
    for phi in states:
        psi = phi.unit
        feats = [abs(psi[i]) ** 2 for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                z = np.conj(psi[i]) * psi[j]
                feats.append(2.0 * z.real)
                feats.append(-2.0 * z.imag)
        rows.append(feats)
    return np.array(rows)


def _hermitian_from_params(params: np.ndarray, n: int) -> np.ndarray:
    G = np.zeros((n, n), dtype=complex)
    idx = n
    for i in range(n):
        G[i, i] = params[i]
    for i in range(n):
        for j in range(i + 1, n):
            G[i, j] = params[idx] + 1j * params[idx + 1]
            G[j, i] = params[idx] - 1j * params[idx + 1]
            idx += 2
    return G


def _is_banal(E: HermitianOperator, tol: float = 1e-10) -> bool:
    n = E.n
    return (
        np.abs(E.matrix).max() <= tol
        or np.abs(E.matrix - np.eye(n)).max() <= tol
    )


def independence_scan(E, F, trials: int = 0,
                      rng: np.random.Generator | None = None,
                      residual_threshold: float = 1e-6) -> IndependenceVerdict:
    """Certify that no Hermitian G has <G> = <E><F> unless a factor is trivial.

    Fits G by least squares over a well-conditioned sample of states; a
    residual above the threshold certifies nonexistence, since expectation
    functions are exactly the quadratic forms identified by the fit.
    """
    E, F = as_operator(E), as_operator(F)
    n = E.n
    if _is_banal(E) or _is_banal(F):
        if np.abs(E.matrix).max() <= 1e-10 or np.abs(F.matrix).max() <= 1e-10:
            G = np.zeros((n, n), dtype=complex)
        elif np.abs(F.matrix - np.eye(n)).max() <= 1e-10:
            G = E.matrix
        else:
            G = F.matrix
        return IndependenceVerdict("BANAL", residual=0.0, G=G)
    rng = rng if rng is not None else np.random.default_rng(0)
    m = max(trials, 3 * n * n)
    states = [StateVector.random(n, rng) for _ in range(m)]
    design = _expectation_features(states, n)
    target = np.array([expect(E, phi) * expect(F, phi) for phi in states])
    params, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.abs(design @ params - target).max())
    return IndependenceVerdict(
        "NO_G" if residual > residual_threshold else "BANAL",
        residual=residual,
        G=_hermitian_from_params(params, n),
    )


def contextuality_witness(E, gauge: GaugeSection, nu1: Context, nu2: Context,
                          budget: int = 1000):
    """Search for a hidden state where the two contexts disagree about E.

    Returns (state, value_under_nu1, value_under_nu2) or None.  The scan is
    deterministic: rays mixing range and kernel of E, phases on a uniform
    grid, first hit wins.
    """
    E = as_operator(E)
    L1 = proposition_of(E, gauge, nu1)
    L2 = proposition_of(E, gauge, nu2)
    n = E.n
    vals, vecs = np.linalg.eigh(E.matrix)
    inside = [vecs[:, i] for i in range(n) if vals[i] > 0.5]
    outside = [vecs[:, i] for i in range(n) if vals[i] <= 0.5]
    if not inside or not outside:
        return None  # E trivial: every context sees the same full or empty arc
    mixes = [np.pi / 4, np.pi / 6, 1.0]
    reps = []
    for beta in mixes:
        cvec = np.cos(beta) * inside[0] + np.sin(beta) * outside[0]
        reps.append(section(StateVector.from_complex(cvec, normalize=True), gauge))
    per_ray = max(1, budget // len(reps))
    for rep in reps:
        for k in range(per_ray):
            u = -np.pi + (k + 0.5) * 2.0 * np.pi / per_ray
            phi = rotate(rep, u)
            v1, v2 = member(L1, phi), member(L2, phi)
            if v1 != v2:
                return phi, int(v1), int(v2)
    return None


@dataclass
class FrameFunctionReport:
    weights: list
    assignments: list  # chosen cell index per basis
    shared_pairs: list  # (basis_i, col_i, basis_j, col_j) with equal rays
    disagreement: Optional[tuple]  # a shared pair where the value map differs


def frame_function_demo(phi0: StateVector, bases,
                        gauge: GaugeSection = DEFAULT_GAUGE,
                        context: Context = IDENTITY_CONTEXT,
                        tol: float = 1e-9) -> FrameFunctionReport:
    """Weight-1 frame functions from hidden truth values, and their clash.

    Each orthonormal basis yields a stacked arc partition; exactly one cell
    contains phi0, defining a 0/1 value on the basis vectors.  Two bases
    sharing a vector can assign it different values: the value map is
    context (basis) dependent.
    """
    n = phi0.space.n
    if n < 3:
        raise NeedsDimensionThree("frame function demo needs complex dimension >= 3")
    basis_list = [np.asarray(B, dtype=complex) for B in bases]
    for B in basis_list:
        if np.abs(B.conj().T @ B - np.eye(n)).max() > tol:
            raise ValueError("basis columns are not orthonormal")
    weights_out, assignments = [], []
    cells_per_basis = []
    for B in basis_list:
        projectors = [np.outer(B[:, i], B[:, i].conj()) for i in range(n)]
        cells = partition_of(projectors, gauge, context)
        truth = [member(cell, phi0) for cell in cells]
        weights_out.append(sum(int(v) for v in truth))
        assignments.append(truth.index(True) if True in truth else -1)
        cells_per_basis.append(cells)
    shared, disagreement = [], None
    for bi in range(len(basis_list)):
        for bj in range(bi + 1, len(basis_list)):
            Bi, Bj = basis_list[bi], basis_list[bj]
            overlaps = np.abs(Bi.conj().T @ Bj)
            for ci in range(n):
                for cj in range(n):
                    if abs(overlaps[ci, cj] - 1.0) <= 1e-9:
                        shared.append((bi, ci, bj, cj))
                        vi = assignments[bi] == ci
                        vj = assignments[bj] == cj
                        if disagreement is None and vi != vj:
                            disagreement = (bi, ci, bj, cj, int(vi), int(vj))
    if not shared:
        raise NoSharedVector("no pair of bases shares a common ray")
    return FrameFunctionReport(weights_out, assignments, shared, disagreement)


@dataclass
class FactorizeResult:
    nested: bool
    table: Optional[dict] = None  # eigenvalue of f -> eigenvalue of g
    separating_index: Optional[int] = None

    def borel_map(self):
        table = dict(self.table)

        def b(x: float) -> float:
            return table[min(table, key=lambda lam: abs(lam - x))]

        return b


def factorize(g: HiddenObservable, f: HiddenObservable,
              tol: float = 1e-8) -> FactorizeResult:
    """Express g as b o f when every eigenspace of g refines over f's.

    Succeeds iff each spectral projector of g is a sum of f's projectors;
    the eigenvalue table of b is returned, else a separating projector
    index of f that fits in no eigenspace of g.
    """
    if g.gauge != f.gauge:
        raise GaugeMismatch("observables use different gauge sections")
    table: dict[float, float] = {}
    for i, (lam, Ei) in enumerate(zip(f.decomp.eigenvalues, f.decomp.projectors)):
        hit = None
        for mu, Qj in zip(g.decomp.eigenvalues, g.decomp.projectors):
            if np.abs(Qj @ Ei - Ei).max() <= tol:
                hit = float(mu)
                break
        if hit is None:
            return FactorizeResult(False, separating_index=i)
        table[float(lam)] = hit
    # each eigenspace of g must be exhausted by the assigned f projectors
    for mu, Qj in zip(g.decomp.eigenvalues, g.decomp.projectors):
        assigned = sum(
            Ei
            for lam, Ei in zip(f.decomp.eigenvalues, f.decomp.projectors)
            if table[float(lam)] == float(mu)
        )
        if np.abs(assigned - Qj).max() > tol:
            return FactorizeResult(False, separating_index=None)
    return FactorizeResult(True, table=table)
