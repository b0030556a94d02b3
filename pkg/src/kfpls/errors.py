"""Exception hierarchy shared by all kfpls modules.

Each class carries a short ``category`` string; the command-line front end
prints it on stderr and maps it to an exit code.
"""


class KfplsError(Exception):
    category = "error"
    exit_code = 1


class StructuralError(KfplsError, ValueError):
    """Shapes, grids or sample structure do not line up."""

    category = "structural"
    exit_code = 3


class ConfigError(KfplsError, ValueError):
    """Invalid parameter value or parameter combination."""

    category = "config"
    exit_code = 2


class RankExhaustionError(KfplsError, ArithmeticError):
    """The working Gram matrix or response ran out of signal during NIPALS."""

    category = "rank-exhaustion"
    exit_code = 4

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class ConvergenceError(KfplsError, ArithmeticError):
    category = "no-convergence"
    exit_code = 4

    def __init__(self, message, t=None, u=None):
        super().__init__(message)
        self.t = t
        self.u = u


class SingularSystemError(KfplsError, ArithmeticError):
    category = "singular-system"
    exit_code = 4


class UndefinedMetricError(KfplsError, ValueError):
    category = "undefined-metric"
    exit_code = 4


class ParseError(KfplsError, ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    category = "parse"
    exit_code = 5

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line
