"""Exception types shared across the package."""


class LindblochError(Exception):
    """Base class for package-specific failures."""


class ConfigError(LindblochError):
    """Invalid or unreadable configuration input."""


class RangeViolationError(LindblochError):
    """Perturbation strength outside its admissible range, or one that
    would drive a decay/decoherence amplitude negative."""


class NumericalError(LindblochError):
    """Numerical failure: singularity, pole, or ill-conditioning."""


class NonUniqueSteadyStateError(NumericalError):
    """The reduced generator block is (near-)singular, so the dynamics
    has no unique fixed point (e.g. purely unitary evolution)."""


class PoleError(NumericalError):
    """A Laplace-domain evaluation point coincides with a generator pole."""


class InternalConsistencyError(LindblochError):
    """A structural invariant that should hold by construction was violated."""
