"""Finite-dimensional hidden-phase model of quantum mechanics.

States are vectors on the sphere of radius sqrt(2) carrying a hidden phase;
observables are deterministic spectral quantiles; averaging over the phase
reproduces quantum probabilities, brackets, uncertainty and dynamics.
"""

from .arcs import ArcSet
from .realspace import (
    ComplexSpace,
    GaugeSection,
    Ray,
    StateVector,
    arg_rel,
    herm_inner,
    phase_distance,
    ray_distance,
    rotate,
    section,
    wrap_angle,
)
from .operators import (
    BorelSet,
    HermitianOperator,
    SpectralDecomposition,
    borel_transform,
    cumulative,
    expect,
    grad_expect,
    spectral_decompose,
    spectral_projector,
)
from .hidden import (
    Context,
    ExchangeContext,
    HiddenObservable,
    Proposition,
    RigidContext,
    apply_context,
    essential_image,
    hidden_value,
    member,
    partition_of,
    preimage_proposition,
    product_pair,
    proposition_of,
)
from .measure import (
    FormFit,
    PhaseSampler,
    born_exact,
    born_monte_carlo,
    form_fit,
    mean_value,
)
from .geometry import (
    KaehlerFunction,
    dispersion,
    heisenberg_check,
    jordan,
    poisson,
)
from .dynamics import (
    FlowResult,
    HamiltonianSystem,
    decompose_automorphism,
    hamiltonian_flow,
    integrate_field,
    projective_compare,
    symmetry_sign,
    unitary_evolve,
    vector_field,
)
from .logic import (
    PropositionFamily,
    boolean_morphism_check,
    compatible,
    contextuality_witness,
    factorize,
    frame_function_demo,
    independence_scan,
)

__version__ = "0.1.0"
