from typing import Iterable, Optional


class NcwError(Exception):
    """Base class for every error raised by the engine"""


class UnknownGenerator(NcwError):
    """A letter is not declared in the world it is normalized against"""

    def __init__(self, generator: str, world: str):
        self.generator = generator
        self.world = world
        super().__init__(f"generator '{generator}' is not declared in world '{world}'")


class NonTerminatingRuleSet(NcwError):
    """A rewrite rule does not strictly decrease the degree-lex order"""


class AdmissibilityError(NonTerminatingRuleSet):
    """Names the offending rule"""

    def __init__(self, rule: str, reason: str):
        self.rule = rule
        self.reason = reason
        super().__init__(f"inadmissible rule '{rule}': {reason}")


class DimOutOfRange(NcwError):
    def __init__(self, dim: int, low: int, high: int):
        self.dim = dim
        super().__init__(f"dimension {dim} outside {low}..{high}")


class LengthOutOfRange(NcwError):
    def __init__(self, maxlen: int):
        self.maxlen = maxlen
        super().__init__(f"word length bound {maxlen} must be at least 1")


class EmptyGeneratorList(NcwError):
    def __init__(self) -> None:
        super().__init__("a free world needs at least one generator")


class PositionedError(NcwError):
    """Error carrying a 1-based line/column and the set of expected tokens"""

    def __init__(
        self,
        message: str,
        line: int = 1,
        column: int = 1,
        expected: Optional[Iterable[str]] = None,
        source: str = "",
    ):
        self.message = message
        self.line = line
        self.column = column
        self.expected = sorted(set(expected or ()))
        self.source = source
        super().__init__(self.describe())

    def describe(self) -> str:
        text = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text

    def caret(self) -> str:
        """Source line with a caret under the offending column"""
        lines = self.source.splitlines() or [""]
        if not 1 <= self.line <= len(lines):
            return ""
        return f"  {lines[self.line - 1]}\n  {' ' * (self.column - 1)}^"


class ExprSyntaxError(PositionedError):
    pass


class WorldSyntaxError(PositionedError):
    pass


class IndexOverflow(NcwError):
    def __init__(self, index: int, horizon: int):
        self.index = index
        self.horizon = horizon
        super().__init__(
            f"shifting index {index} passes the series horizon N={horizon}"
        )


class MixedMode(NcwError):
    def __init__(self) -> None:
        super().__init__("cannot combine commutative and noncommutative forms")


class NotInvertible(NcwError):
    """Division by something other than a nonzero monomial scalar"""


class InvalidWalkConfig(NcwError):
    pass


class UnassignedGenerator(NcwError):
    def __init__(self, generator: str):
        self.generator = generator
        super().__init__(f"no matrix assigned to generator '{generator}'")


class UnassignedParameter(NcwError):
    def __init__(self, parameter: str):
        self.parameter = parameter
        super().__init__(f"no value assigned to parameter '{parameter}'")


class OracleRefused(NcwError):
    def __init__(self, world: str):
        super().__init__(
            f"world '{world}' declares relations; the matrix oracle only checks "
            "identities of the free algebra. Relations such as [X,P] = 1 have no "
            "finite-dimensional matrix solutions (the trace of a commutator is 0, "
            "the trace of the identity is n), so a matrix residual would be "
            "meaningless"
        )


class UnknownSuite(NcwError):
    def __init__(self, name: str, known: Iterable[str]):
        self.name = name
        super().__init__(f"unknown suite '{name}'; known: {', '.join(known)}")


class EvaluationError(NcwError):
    """An expression is well formed but cannot be evaluated in its world"""
