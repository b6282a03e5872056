"""Exception hierarchy shared by every qcl module."""


class QclError(Exception):
    """Base class for all library errors."""


# algebra
class NonInvertible(QclError, ArithmeticError):
    pass


class NullDisplacement(QclError, ArithmeticError):
    pass


class NotUnitNorm(QclError, ValueError):
    pass


class NotHermitian(QclError, ValueError):
    pass


# fields
class NotSpatial(QclError, ValueError):
    pass


class OnSingularLocus(QclError, ArithmeticError):
    pass


class ConvergenceDomain(QclError, ValueError):
    pass


# operators
class StencilHitsSingularity(QclError, ArithmeticError):
    pass


class NotRegularHere(QclError, ArithmeticError):
    pass


# geometry
class DegenerateJacobian(QclError, ArithmeticError):
    pass


class SingularityOnSurface(QclError, ValueError):
    pass


class BadParameters(QclError, ValueError):
    pass


# contour
class OrderMismatch(QclError, ArithmeticError):
    pass


class BadGeometry(QclError, ValueError):
    pass


class BranchJump(QclError, ArithmeticError):
    pass


# theorems
class RegularityViolation(QclError, ValueError):
    pass


class ConfigError(QclError, ValueError):
    """Invalid command-line or file configuration."""
