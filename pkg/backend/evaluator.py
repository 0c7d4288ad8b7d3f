"""
Evaluate parsed expressions to Elements of a world.

Names resolve as let-bindings, then world macros (Xdot[i], H), then world
parameters, then generators.
"""

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

from algebra import Element, Generator, commutator
from errors import EvaluationError, NotInvertible, UnknownGenerator
from expr_parser import (
    Add,
    Bracket,
    Delta,
    Div,
    Expr,
    Imaginary,
    Index,
    Mul,
    Name,
    Neg,
    Number,
    Partial,
    Pow,
    Sub,
    TimeDerivative,
    parse_expr,
)
from scalars import Scalar
from worlds import World, normalize


@dataclass
class Scope:
    world: World
    bindings: Mapping[str, Element] = field(default_factory=dict)
    indices: Mapping[str, int] = field(default_factory=dict)

    def index(self, index: Index) -> int:
        if index.var is None:
            return index.offset
        if index.var not in self.indices:
            raise EvaluationError(f"index variable '{index.var}' is not bound")
        return self.indices[index.var] + index.offset

    def resolve(self, name: Name) -> Element:
        world = self.world
        indices = tuple(self.index(i) for i in name.indices)
        if not indices and not name.partials and name.name in self.bindings:
            return self.bindings[name.name]
        if not name.partials and world.has_macro(name.name, indices):
            return world.macro(name.name, *indices)
        if not indices and not name.partials and name.name in world.params:
            return Element.scalar(Scalar.param(name.name))
        return Element.gen(self.generator(name.name, indices, name.partials))

    def generator(self, name: str, indices: tuple, partials: tuple = ()) -> Generator:
        base = self.world.canonical(name, indices)
        found = Generator(base.name, base.indices, partials)
        if not self.world.has_generator(found):
            raise UnknownGenerator(str(found), self.world.name)
        return found

    def hamiltonian(self) -> Element:
        if self.world.has_macro("H"):
            return self.world.macro("H")
        if "H" in self.bindings:
            return self.bindings["H"]
        return Element.gen(self.generator("H", ()))


def evaluate(expr: Expr, scope: Scope) -> Element:
    """Element for an expression tree (not normalized)"""
    if isinstance(expr, Number):
        return Element.scalar(expr.value)
    if isinstance(expr, Imaginary):
        return Element.scalar(Scalar.imaginary())
    if isinstance(expr, Name):
        return scope.resolve(expr)
    if isinstance(expr, Add):
        return evaluate(expr.left, scope) + evaluate(expr.right, scope)
    if isinstance(expr, Sub):
        return evaluate(expr.left, scope) - evaluate(expr.right, scope)
    if isinstance(expr, Mul):
        return evaluate(expr.left, scope) * evaluate(expr.right, scope)
    if isinstance(expr, Div):
        return evaluate(expr.left, scope) / _scalar_value(evaluate(expr.right, scope))
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, scope)
    if isinstance(expr, Pow):
        base = evaluate(expr.base, scope)
        if expr.exponent < 0:
            return Element.scalar(_scalar_value(base) ** expr.exponent)
        return base**expr.exponent
    if isinstance(expr, Bracket):
        left = evaluate(expr.left, scope)
        right = evaluate(expr.right, scope)
        return normalize(commutator(left, right), scope.world)
    if isinstance(expr, TimeDerivative):
        operand = evaluate(expr.operand, scope)
        return normalize(commutator(operand, scope.hamiltonian()), scope.world)
    if isinstance(expr, Partial):
        return _partial(expr, scope)
    if isinstance(expr, Delta):
        return Element.scalar(
            1 if scope.index(expr.left) == scope.index(expr.right) else 0
        )
    raise TypeError(f"not an expression: {expr!r}")


def _scalar_value(element: Element) -> Scalar:
    if not element.is_scalar():
        raise NotInvertible(f"can only divide by scalars, not {element}")
    return element.scalar_part()


def _partial(expr: Partial, scope: Scope) -> Element:
    """d/dX[i] F = [F, P[i]] and d/dP[i] F = [X[i], F]"""
    variable = expr.variable
    operand = evaluate(expr.operand, scope)
    indices = tuple(scope.index(i) for i in variable.indices)
    if variable.name == "X":
        partner = Element.gen(scope.generator("P", indices))
        result = commutator(operand, partner)
    elif variable.name == "P":
        partner = Element.gen(scope.generator("X", indices))
        result = commutator(partner, operand)
    else:
        raise EvaluationError(
            f"d/d{variable.name} is not defined; use d/dX[i] or d/dP[i]"
        )
    return normalize(result, scope.world)


def evaluate_text(
    text: str,
    world: World,
    bindings: Optional[Mapping[str, Element]] = None,
    indices: Optional[Dict[str, int]] = None,
) -> Element:
    """Parse, evaluate and normalize one expression"""
    scope = Scope(world, bindings or {}, indices or {})
    return normalize(evaluate(parse_expr(text), scope), world)
