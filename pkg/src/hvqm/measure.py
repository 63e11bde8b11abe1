"""Probabilities: exact orbit measures, phase sampling, and the cos^2 form test.

born_exact integrates nothing: the probability of an outcome set is the
normalized length of the preimage arc on the orbit, computed by exact arc
arithmetic.  born_monte_carlo instead plays the imprecise observer, drawing
the hidden phase uniformly and counting outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotOrthogonal
from .hidden import HiddenObservable, hidden_values_on_ray, preimage_proposition
from .operators import BorelSet, expect, weights
from .realspace import Ray, StateVector, herm_inner, superposition_path


class PhaseSampler:
    """Seeded uniform sampler of the hidden phase on (-pi, pi]."""

    def __init__(self, seed: int | None = None):
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def draw(self, n: int) -> np.ndarray:
        # uniform on [-pi, pi); the endpoint flip is a null event
        return self.rng.uniform(-np.pi, np.pi, size=n)


def born_exact(phi: StateVector, f: HiddenObservable, B: BorelSet) -> float:
    """mu([f in B] on the orbit of phi): exact arc length over 2 pi."""
    return preimage_proposition(f, B).orbit_measure(phi)


def born_monte_carlo(ray: Ray, f: HiddenObservable, B: BorelSet, N: int,
                     sampler: PhaseSampler) -> tuple[float, float]:
    """Outcome frequency of f in B over N uniform hidden phases, with stderr."""
    if N < 1:
        raise ValueError("N must be at least 1")
    thetas = sampler.draw(N)
    values = hidden_values_on_ray(f, ray, thetas)
    hits = B.contains_many(values)
    p_hat = float(hits.mean())
    stderr = float(np.sqrt(p_hat * (1.0 - p_hat) / N))
    return p_hat, stderr


def mean_value(f: HiddenObservable, ray: Ray) -> float:
    """Exact orbit average of f: sum of eigenvalues weighted by arc lengths."""
    rep = ray.representative
    w = weights(f.decomp, rep)
    return float(np.dot(f.decomp.eigenvalues, w))


@dataclass(frozen=True)
class FormFit:
    """Least-squares fit against a cos^2 t, b sin t cos t, c sin^2 t."""

    a: float
    b: float
    c: float
    residual: float

    @property
    def is_kaehlerian(self) -> bool:
        return self.residual <= 1e-9


FORM_FIT_GRID = 64


def form_fit(phi: StateVector, psi: StateVector, g, samples: int = FORM_FIT_GRID,
              tol: float = 1e-9) -> FormFit:
    """Fit t -> g(t) along the superposition path of two orthogonal states.

    The basis functions are pi-periodic, so the grid covers [0, pi).
    """
    if abs(herm_inner(phi, psi)) > tol:
        raise NotOrthogonal("states are not complex-orthogonal")
    ts = np.linspace(0.0, np.pi, samples, endpoint=False)
    values = np.array([float(g(t)) for t in ts])
    design = np.column_stack(
        [np.cos(ts) ** 2, np.sin(ts) * np.cos(ts), np.sin(ts) ** 2]
    )
    coeffs, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    resid = float(np.sqrt(np.mean((design @ coeffs - values) ** 2)))
    return FormFit(float(coeffs[0]), float(coeffs[1]), float(coeffs[2]), resid)


def expectation_path(E, phi: StateVector, psi: StateVector):
    """t -> <E> along the superposition path; always of kaehlerian form."""

    def g(t: float) -> float:
        return expect(E, superposition_path(phi, psi, t))

    return g
