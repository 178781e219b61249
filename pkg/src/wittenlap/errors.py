"""Exception types shared across the package."""


class WittenlapError(Exception):
    """Base class for all package-specific failures."""


class DomainError(WittenlapError, ValueError):
    """A coordinate, radius, or parameter lies outside its admissible range."""


class QuadratureError(WittenlapError, ArithmeticError):
    """A quadrature routine failed to reach its accuracy target."""


class ConvergenceError(WittenlapError, ArithmeticError):
    """An iterative solve (shooting, bisection, Newton, ARPACK) did not converge."""


class MeshError(WittenlapError, ValueError):
    """A triangulation is malformed or could not be generated to target quality."""


class HypothesesUnmetError(WittenlapError, ValueError):
    """A weight profile fails the admissibility class required by a theorem."""


class ConfigError(WittenlapError, ValueError):
    """A suite configuration file is malformed or structurally invalid."""
