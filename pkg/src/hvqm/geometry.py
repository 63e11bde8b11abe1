"""Symplectic and Riemannian structure on the state sphere.

Expectation functions of Hermitian operators carry a Jordan product and a
Poisson bracket built from sphere gradients; these match the operator
anticommutator (halved) and -i times the commutator, and give the
uncertainty relation as a Cauchy-Schwarz inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .hidden import HiddenObservable
from .operators import (
    HermitianOperator,
    as_operator,
    expect,
    grad_expect,
    weights,
)
from .realspace import StateVector


@dataclass(frozen=True)
class KaehlerFunction:
    """The expectation function phi -> <A>_phi of a Hermitian operator."""

    operator: HermitianOperator

    @classmethod
    def of(cls, A) -> "KaehlerFunction":
        return cls(as_operator(A))

    def __call__(self, phi: StateVector) -> float:
        return expect(self.operator, phi)

    def grad(self, phi: StateVector) -> np.ndarray:
        return grad_expect(self.operator, phi)


def _as_kaehler(h) -> KaehlerFunction:
    if isinstance(h, KaehlerFunction):
        return h
    return KaehlerFunction(as_operator(h))


def omega(phi: StateVector, X: np.ndarray, Y: np.ndarray) -> float:
    """Pre-symplectic form on tangent vectors: <J X, Y>."""
    return float(phi.space.J(X) @ Y)


def jordan(h, l, phi: StateVector) -> float:
    """(h o l)(phi) = <grad h, grad l> / 2 + h(phi) l(phi)."""
    h, l = _as_kaehler(h), _as_kaehler(l)
    return 0.5 * float(h.grad(phi) @ l.grad(phi)) + h(phi) * l(phi)


def poisson(h, l, phi: StateVector) -> float:
    """{h, l}(phi) = omega(grad h, grad l); matches <-i[A, B]>_phi."""
    h, l = _as_kaehler(h), _as_kaehler(l)
    return omega(phi, h.grad(phi), l.grad(phi))


def dispersion(obj, phi: StateVector, form: str = "moment") -> float:
    """Standard deviation of the outcome distribution at phi.

    Three equivalent routes are exposed: the operator second moment, the
    gradient norm over sqrt(2), and the exact arc-weighted spectral moment
    of the hidden observable.
    """
    if form == "arc":
        f = obj if isinstance(obj, HiddenObservable) else HiddenObservable.of(
            obj.operator if isinstance(obj, KaehlerFunction) else as_operator(obj)
        )
        w = weights(f.decomp, phi)
        mean = float(np.dot(f.decomp.eigenvalues, w))
        var = float(np.dot(w, (f.decomp.eigenvalues - mean) ** 2))
        return float(np.sqrt(max(var, 0.0)))

    if isinstance(obj, HiddenObservable):
        A = obj.decomp.operator()
    elif isinstance(obj, KaehlerFunction):
        A = obj.operator
    else:
        A = as_operator(obj)

    if form == "moment":
        a = expect(A, phi)
        centered = HermitianOperator(A.matrix - a * np.eye(A.n))
        second = HermitianOperator(centered.matrix @ centered.matrix)
        return float(np.sqrt(max(expect(second, phi), 0.0)))
    if form == "gradient":
        return float(np.linalg.norm(grad_expect(A, phi)) / np.sqrt(2.0))
    raise ValueError(f"unknown dispersion form {form!r}")


class HeisenbergCheck(NamedTuple):
    lhs: float
    rhs_strong: float
    rhs_weak: float
    passed: bool


def heisenberg_check(h, l, phi: StateVector, tol: float = 1e-10) -> HeisenbergCheck:
    """delta(h) delta(l) >= sqrt(covariance^2 + bracket^2 / 4) >= bracket / 2."""
    h, l = _as_kaehler(h), _as_kaehler(l)
    lhs = dispersion(h, phi) * dispersion(l, phi)
    cov = jordan(h, l, phi) - h(phi) * l(phi)
    br = poisson(h, l, phi)
    rhs_strong = float(np.sqrt(cov * cov + 0.25 * br * br))
    rhs_weak = 0.5 * br
    passed = lhs >= rhs_strong - tol and rhs_strong >= rhs_weak - tol
    return HeisenbergCheck(lhs, rhs_strong, rhs_weak, passed)
