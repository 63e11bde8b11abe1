"""Exception types raised by the hvqm package."""


class HvqmError(Exception):
    """Base class for all hvqm errors."""


class DimensionMismatch(HvqmError):
    pass


class NotSameRay(HvqmError):
    """Two states were expected to lie on the same phase orbit but do not."""


class NotHermitian(HvqmError):
    pass


class EigSolverFailure(HvqmError):
    pass


class NotProjector(HvqmError):
    pass


class NotAResolution(HvqmError):
    """Projector list is not an orthogonal resolution of the identity."""


class NotOrthogonal(HvqmError):
    pass


class QuadratureFailure(HvqmError):
    pass


class StepTooLarge(HvqmError):
    pass


class NotComplexOrConjugateLinear(HvqmError):
    """An isometry neither commutes nor anticommutes with the complex structure."""


class PhaseNotOrbitConstant(HvqmError):
    pass


class GaugeMismatch(HvqmError):
    pass


class IncompatibleFamily(HvqmError):
    pass


class NeedsDimensionThree(HvqmError):
    pass


class NoSharedVector(HvqmError):
    pass


class ConfigInvalid(HvqmError):
    pass


class CriterionFailed(HvqmError):
    pass
