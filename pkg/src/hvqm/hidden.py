"""The hidden-variable layer: contexts, arc propositions, quantile observables.

A proposition attaches to every phase orbit a half-open arc whose normalized
length equals the quantum probability of its projector; membership of a
hidden state is decided by where its phase falls.  A hidden observable is
the deterministic quantile of the cumulative spectral distribution at the
level (pi + phase) / 2 pi, composed with a measure-preserving context.
"""

from __future__ import annotations

import numpy as np

from .arcs import TWO_PI, ArcSet
from .errors import NotAResolution, NotProjector
from .operators import (
    BorelSet,
    HermitianOperator,
    SpectralDecomposition,
    as_operator,
    expect,
    spectral_decompose,
    spectral_projector,
    weights,
)
from .realspace import (
    DEFAULT_GAUGE,
    GaugeSection,
    Ray,
    StateVector,
    arg_rel,
    wrap_angle,
)

PI = np.pi


# ---------------------------------------------------------------------------
# contexts (measure equivalences of the phase circle, per orbit)
# ---------------------------------------------------------------------------


class Context:
    """A per-orbit bijection of (-pi, pi] preserving normalized arc length."""

    def angle(self, u, rep: StateVector):
        raise NotImplementedError

    def angle_inv(self, u, rep: StateVector):
        raise NotImplementedError

    def map_arcs(self, arcs: ArcSet, rep: StateVector) -> ArcSet:
        raise NotImplementedError

    def unmap_arcs(self, arcs: ArcSet, rep: StateVector) -> ArcSet:
        raise NotImplementedError

    def then(self, outer: "Context") -> "Context":
        """The composite map outer o self."""
        return ComposedContext(outer, self)


class RigidContext(Context):
    """Phase shift by a constant, or by a user function of the ray."""

    def __init__(self, offset=0.0):
        self.offset = offset

    def _c(self, rep: StateVector) -> float:
        if callable(self.offset):
            return float(self.offset(rep))
        return float(self.offset)

    def angle(self, u, rep):
        return wrap_angle(np.asarray(u) + self._c(rep))

    def angle_inv(self, u, rep):
        return wrap_angle(np.asarray(u) - self._c(rep))

    def map_arcs(self, arcs, rep):
        return arcs.shift(self._c(rep))

    def unmap_arcs(self, arcs, rep):
        return arcs.shift(-self._c(rep))

    def __repr__(self):
        return f"RigidContext({self.offset!r})"


IDENTITY_CONTEXT = RigidContext(0.0)


def per_ray_hash_offset(rep: StateVector) -> float:
    """A deterministic pseudo-random phase offset depending only on the ray."""
    key = np.round(rep.coords, 9).tobytes()
    h = np.frombuffer(key, dtype=np.uint8).astype(np.uint64)
    acc = np.uint64(1469598103934665603)
    for byte in h:
        acc = np.uint64((int(acc) ^ int(byte)) * 1099511628211 % (1 << 64))
    return float(wrap_angle(int(acc) / (1 << 64) * TWO_PI))


class ExchangeContext(Context):
    """Interval exchange: permute k equal half-open bins of (-pi, pi]."""

    def __init__(self, k: int, perm):
        perm = [int(p) for p in perm]
        if sorted(perm) != list(range(k)):
            raise ValueError(f"perm must be a permutation of range({k})")
        self.k = k
        self.perm = perm
        self.inv_perm = [0] * k
        for j, p in enumerate(perm):
            self.inv_perm[p] = j
        self.width = TWO_PI / k

    def _bin_lo(self, j: int) -> float:
        return -PI + j * self.width

    def _map_angle(self, u, perm):
        u = np.asarray(u, dtype=float)
        t = u + PI
        j = np.ceil(t / self.width).astype(int) - 1
        j = np.clip(j, 0, self.k - 1)
        target = np.asarray(perm)[j]
        return wrap_angle(u + (target - j) * self.width)

    def angle(self, u, rep):
        return self._map_angle(u, self.perm)

    def angle_inv(self, u, rep):
        return self._map_angle(u, self.inv_perm)

    def _map_arc_set(self, arcs: ArcSet, perm) -> ArcSet:
        pieces = []
        for j in range(self.k):
            bin_arc = ArcSet([(self._bin_lo(j), self._bin_lo(j) + self.width)])
            part = arcs.intersection(bin_arc)
            if part.segments:
                shift = (perm[j] - j) * self.width
                pieces.extend((lo + shift, hi + shift) for lo, hi in part.segments)
        return ArcSet(pieces)

    def map_arcs(self, arcs, rep):
        return self._map_arc_set(arcs, self.perm)

    def unmap_arcs(self, arcs, rep):
        return self._map_arc_set(arcs, self.inv_perm)

    def __repr__(self):
        return f"ExchangeContext(k={self.k}, perm={self.perm})"


class ComposedContext(Context):
    def __init__(self, outer: Context, inner: Context):
        self.outer = outer
        self.inner = inner

    def angle(self, u, rep):
        return self.outer.angle(self.inner.angle(u, rep), rep)

    def angle_inv(self, u, rep):
        return self.inner.angle_inv(self.outer.angle_inv(u, rep), rep)

    def map_arcs(self, arcs, rep):
        return self.outer.map_arcs(self.inner.map_arcs(arcs, rep), rep)

    def unmap_arcs(self, arcs, rep):
        return self.inner.unmap_arcs(self.outer.unmap_arcs(arcs, rep), rep)

    def __repr__(self):
        return f"ComposedContext({self.outer!r}, {self.inner!r})"


def context_from_config(spec: dict) -> Context:
    """Build a context from its config literal form."""
    if "rigid" in spec:
        offset = spec["rigid"]["offset"]
        if offset == "per-ray-hash":
            return RigidContext(per_ray_hash_offset)
        return RigidContext(float(offset))
    if "exchange" in spec:
        return ExchangeContext(int(spec["exchange"]["k"]), spec["exchange"]["perm"])
    raise ValueError(f"unknown context spec {spec!r}")


# ---------------------------------------------------------------------------
# propositions
# ---------------------------------------------------------------------------


class Proposition:
    """A classical yes/no property realized per orbit as an arc set.

    Intensional representation: the projector, gauge and context are stored,
    and the pre-context arc set on any orbit is recomputed from the state's
    spectral weights by base_arcs.  The context is applied on membership.
    """

    def __init__(self, projector: HermitianOperator, gauge: GaugeSection,
                 context: Context, base_arcs, label: str = ""):
        self.projector = projector
        self.gauge = gauge
        self.context = context
        self.base_arcs = base_arcs
        self.label = label

    def orbit_arcs(self, phi: StateVector) -> ArcSet:
        """The membership arc set on the orbit of phi, in the gauge coordinate."""
        rep = self.gauge(phi)
        return self.context.map_arcs(self.base_arcs(phi), rep)

    def orbit_measure(self, phi: StateVector) -> float:
        return self.orbit_arcs(phi).normalized_measure

    def complement(self) -> "Proposition":
        comp_proj = HermitianOperator(
            np.eye(self.projector.n, dtype=complex) - self.projector.matrix
        )
        base = self.base_arcs
        return Proposition(
            comp_proj,
            self.gauge,
            self.context,
            lambda phi: base(phi).complement(),
            label=f"not({self.label})" if self.label else "complement",
        )


def member(L: Proposition, phi: StateVector) -> bool:
    """Deterministic hidden truth value of L at the hidden state phi."""
    rep = L.gauge(phi)
    u = arg_rel(phi, rep)
    return L.orbit_arcs(phi).contains(u)


def proposition_of(E, gauge: GaugeSection = DEFAULT_GAUGE,
                   context: Context = IDENTITY_CONTEXT) -> Proposition:
    """The canonical arc proposition of a projector: (pi - 2 pi <E>, pi]."""
    E = as_operator(E)
    if not E.is_projector():
        raise NotProjector("operator is not idempotent within 1e-9")

    def base(phi: StateVector) -> ArcSet:
        return ArcSet([(PI - TWO_PI * expect(E, phi), PI)])

    return Proposition(E, gauge, context, base, label="canonical")


def apply_context(L: Proposition, nu: Context) -> Proposition:
    """Map the membership arcs of L through a further measure equivalence."""
    return Proposition(
        L.projector, L.gauge, L.context.then(nu), L.base_arcs, label=L.label
    )


# ---------------------------------------------------------------------------
# hidden observables
# ---------------------------------------------------------------------------


class HiddenObservable:
    """The deterministic quantile observable of a spectral decomposition."""

    def __init__(self, decomp: SpectralDecomposition,
                 gauge: GaugeSection = DEFAULT_GAUGE,
                 context: Context = IDENTITY_CONTEXT):
        self.decomp = decomp
        self.gauge = gauge
        self.context = context

    @classmethod
    def of(cls, A, gauge: GaugeSection = DEFAULT_GAUGE,
           context: Context = IDENTITY_CONTEXT) -> "HiddenObservable":
        return cls(spectral_decompose(as_operator(A)), gauge, context)

    def cumulative_weights(self, phi: StateVector) -> np.ndarray:
        return np.cumsum(weights(self.decomp, phi))

    def level(self, phi: StateVector) -> float:
        """The quantile level rho = (pi + u') / 2 pi in (0, 1]."""
        rep = self.gauge(phi)
        u = arg_rel(phi, rep)
        u_prime = float(self.context.angle_inv(u, rep))
        return (PI + u_prime) / TWO_PI


def hidden_value(f: HiddenObservable, phi: StateVector) -> float:
    """min{ lambda : F(lambda) >= rho }; the top eigenvalue when rho tops F."""
    F = f.cumulative_weights(phi)
    rho = f.level(phi)
    idx = int(np.searchsorted(F, rho, side="left"))
    idx = min(idx, f.decomp.k - 1)
    return float(f.decomp.eigenvalues[idx])


def hidden_values_on_ray(f: HiddenObservable, ray: Ray, thetas) -> np.ndarray:
    """Vectorized hidden values at rotate(rep, theta) for many phases.

    The ray representative must be canonical under f's gauge (Ray.of with
    the same gauge guarantees this), so arg_rel reduces to wrapping theta.
    """
    rep = ray.representative
    F = f.cumulative_weights(rep)
    u = wrap_angle(np.asarray(thetas, dtype=float))
    u_prime = np.asarray(f.context.angle_inv(u, rep))
    rho = (PI + u_prime) / TWO_PI
    idx = np.minimum(np.searchsorted(F, rho, side="left"), f.decomp.k - 1)
    return f.decomp.eigenvalues[idx]


def essential_image(f: HiddenObservable) -> list[float]:
    """The value set of f up to null arcs: exactly the spectrum."""
    return [float(v) for v in f.decomp.eigenvalues]


def _quantile_arcs(F: np.ndarray, selector) -> ArcSet:
    """Arcs (2 pi F_{i-1} - pi, 2 pi F_i - pi] for the selected eigenvalues."""
    k = len(F)
    raw = []
    prev = 0.0
    for i in range(k):
        hi = 1.0 if i == k - 1 else float(F[i])
        if selector(i):
            raw.append((TWO_PI * prev - PI, TWO_PI * hi - PI))
        prev = hi
    return ArcSet(raw)


def preimage_proposition(f: HiddenObservable, B: BorelSet) -> Proposition:
    """The proposition f^{-1}(B); its projector is the spectral projector of B."""
    D = f.decomp
    in_B = [B.contains(lam) for lam in D.eigenvalues]
    E = spectral_projector(D, B)

    def base(phi: StateVector) -> ArcSet:
        F = np.cumsum(weights(D, phi))
        return _quantile_arcs(F, lambda i: in_B[i])

    return Proposition(E, f.gauge, f.context, base, label="preimage")


def partition_of(projectors, gauge: GaugeSection = DEFAULT_GAUGE,
                 context: Context = IDENTITY_CONTEXT,
                 tol: float = 1e-9) -> list[Proposition]:
    """Stacked-arc partition of every orbit from a resolution of the identity."""
    ops = [as_operator(E) for E in projectors]
    n = ops[0].n
    total = sum(E.matrix for E in ops)
    if np.abs(total - np.eye(n)).max() > tol:
        raise NotAResolution("projectors do not sum to the identity")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if np.abs(ops[i].matrix @ ops[j].matrix).max() > tol:
                raise NotAResolution(f"projectors {i} and {j} are not orthogonal")

    k = len(ops)

    def make_base(index: int):
        def base(phi: StateVector) -> ArcSet:
            cum = np.cumsum([expect(E, phi) for E in ops])
            cum[-1] = 1.0
            lo_level = cum[index]
            hi_level = cum[index - 1] if index > 0 else 0.0
            return ArcSet([(PI - TWO_PI * lo_level, PI - TWO_PI * hi_level)])

        return base

    return [
        Proposition(ops[i], gauge, context, make_base(i), label=f"cell{i}")
        for i in range(k)
    ]


def product_pair(E, F, gauge: GaugeSection = DEFAULT_GAUGE,
                 context: Context = IDENTITY_CONTEXT):
    """Two arc propositions for E and F whose overlap has measure <E><F>."""
    E, F = as_operator(E), as_operator(F)
    if not E.is_projector() or not F.is_projector():
        raise NotProjector("both arguments must be idempotent")

    def base_L(phi: StateVector) -> ArcSet:
        e = expect(E, phi)
        return ArcSet([(PI * (1.0 - 2.0 * e), PI)])

    def base_M(phi: StateVector) -> ArcSet:
        e, fv = expect(E, phi), expect(F, phi)
        lo = PI * (-2.0 * e - 2.0 * fv + 2.0 * e * fv + 1.0)
        hi = PI * (-2.0 * e + 2.0 * e * fv + 1.0)
        return ArcSet([(lo, hi)])

    L = Proposition(E, gauge, context, base_L, label="product-L")
    M = Proposition(F, gauge, context, base_M, label="product-M")
    return L, M


def intersection_measure(L: Proposition, M: Proposition, phi: StateVector) -> float:
    """Normalized arc length of L and M jointly true on the orbit of phi."""
    return L.orbit_arcs(phi).intersection(M.orbit_arcs(phi)).normalized_measure
