"""
Exceptions raised by the solver and the command harness.

Every error carries enough context to be logged on its own; the command
wrapper in ``eifg.core.decorators.errors`` turns them into exit codes.
"""


class EIFGError(Exception):
    """Base class for every error raised by eifg."""


class ConfigError(EIFGError, ValueError):
    """Invalid run description, scheme name or parameter."""


class InvalidSizeError(ConfigError):
    pass


class ShapeError(ConfigError):
    pass


class ParameterError(ConfigError):
    pass


class NumericInputError(EIFGError, ValueError):
    pass


class SymmetryViolationError(EIFGError, ArithmeticError):
    def __init__(self, residue: float, tolerance: float):
        self.residue = residue
        self.tolerance = tolerance
        super().__init__(
            f"imaginary residue {residue:.3e} exceeds {tolerance:.3e}; "
            "coefficients are not Hermitian symmetric"
        )


class PhiDomainError(EIFGError, ValueError):
    pass


class UnsupportedOrderError(EIFGError, ValueError):
    pass


class ProblemEvaluationError(EIFGError, ArithmeticError):
    def __init__(self, problem: str, message: str):
        self.problem = problem
        super().__init__(f"[{problem}] {message}")


class BlowUpError(EIFGError, FloatingPointError):
    def __init__(self, step: int, max_magnitude: float, stage: int = 0):
        self.step = step
        self.max_magnitude = max_magnitude
        self.stage = stage
        super().__init__(
            f"solution blew up at step {step} (stage {stage}): "
            f"max |u_hat| = {max_magnitude:.3e}"
        )


class SnapshotFormatError(EIFGError, ValueError):
    pass
