"""Exception hierarchy shared by the numerical pipeline and the CLI."""


class MagnoQCRBError(Exception):
    """Base class; ``kind`` is the short tag written to sweep records."""

    kind = "error"


class DimensionError(MagnoQCRBError, ValueError):
    kind = "dimension"


class DomainError(MagnoQCRBError, ValueError):
    kind = "domain"


class NumericalError(MagnoQCRBError, ArithmeticError):
    kind = "numerical"


class SingularMatrixError(NumericalError):
    kind = "singular"

    def __init__(self, message, condition=float("inf")):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class StabilityError(NumericalError):
    kind = "unstable"


class ConvergenceError(NumericalError):
    kind = "convergence"

    def __init__(self, message, residual):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class PhysicalityError(NumericalError):
    kind = "unphysical"


class UnidentifiableError(NumericalError):
    kind = "unidentifiable"

    def __init__(self, message, null_direction=None):
        if null_direction is not None:
            message = f"{message}; null direction {list(map(float, null_direction))}"
        super().__init__(message)
        self.null_direction = null_direction


class ConfigError(MagnoQCRBError):
    kind = "config"


class ConfigParseError(ConfigError):
    kind = "config_parse"

    def __init__(self, message, line=None, column=None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class UnknownFieldError(ConfigError):
    kind = "config_unknown_field"


class ConfigValueError(ConfigError):
    kind = "config_value"
