"""Exception types shared across the package."""


class OscintError(Exception):
    """Base class for all package errors."""


class SchemaError(OscintError):
    """A model file does not validate against its schema."""


class DegenerateForm(OscintError):
    """A quadratic form has zero determinant."""


class DegenerateHessian(OscintError):
    """A critical point has a singular Hessian (gauge-theory territory)."""


class NoConvergence(OscintError):
    """Newton iteration failed for a seed (reported, not fatal)."""


class TooLarge(OscintError):
    """Graph exceeds the brute-force half-edge bound."""


class MissingTensor(OscintError):
    """A vertex valence has no matching interaction tensor."""


class Disconnected(OscintError):
    """Effective-action normalization applied to a disconnected graph."""


class SpaceMismatch(OscintError):
    """Operands live on different super spaces."""


class UnknownGenerator(OscintError):
    """Generator name not declared in the super space."""


class NotGaugeInvariant(OscintError):
    """The action is not annihilated by the symmetry vector fields."""


class BadStructureConstants(OscintError):
    """Structure constants fail antisymmetry, Jacobi, or the bracket relation."""


class DegenerateFP(OscintError):
    """The gauge-fixing operator is singular at a candidate point."""


class DegenerateSlice(OscintError):
    """The gauge-slice Hessian is singular."""


class CMEViolation(OscintError):
    """The classical master equation fails; carries the residual."""


class SplitNotSymplectic(OscintError):
    """A requested splitting does not respect the Darboux pairing."""


class DegenerateRestriction(OscintError):
    """Quadratic part of an action restricted to a Lagrangian is singular."""


class NonConvergent(OscintError):
    """Quadrature extrapolation residual above threshold."""


class InsufficientSamples(OscintError):
    """Not enough (hbar, value) samples for a remainder fit."""


class NotTrivalent(OscintError):
    """Color weights require all vertices trivalent."""


class HasLeaves(OscintError):
    """Color weights reject graphs with leaves."""
