"""
Graded exterior calculus over formal function symbols.

Coefficients come in two modes. Commutative coefficients are sympy
expressions: a field F is an undefined function F(x, y, z, t) of the
coordinate symbols and d/dc is sympy differentiation. Noncommutative
coefficients are Elements of a free open world, where d/dc is the Leibniz
extension of tagging a letter with the coordinate symbol; tags are stored
sorted so mixed partials commute.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

import sympy as sp
from sympy.combinatorics.permutations import Permutation
from sympy.core.function import AppliedUndef

from algebra import Element, Generator
from errors import MixedMode
from models import CheckResult
from scalars import ZERO, Number, Scalar
from worlds import World, normalize, open_free_world, render

Basis = Tuple[int, ...]  # sorted coordinate positions of a wedge basis element
Coefficient = Union[Element, sp.Expr]


@dataclass(frozen=True)
class CoordinateSystem:
    labels: Tuple[str, ...]

    @classmethod
    def indexed(cls, dim: int) -> "CoordinateSystem":
        return cls(tuple(str(i) for i in range(1, dim + 1)))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def position(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown coordinate '{label}'") from None

    def symbol_name(self, position: int) -> str:
        label = self.labels[position]
        return f"x{label}" if label.isdigit() else label

    def symbol(self, position: int) -> sp.Symbol:
        return sp.Symbol(self.symbol_name(position))

    @property
    def symbols(self) -> Tuple[sp.Symbol, ...]:
        return tuple(self.symbol(p) for p in range(self.dim))

    def differential_name(self, position: int) -> str:
        return "d" + self.symbol_name(position)


SPACETIME = CoordinateSystem(("x", "y", "z", "t"))


def partial_derivative(element: Element, label: str) -> Element:
    """Formal d/d<label> extended to products by the Leibniz rule"""
    result: Dict[Tuple[Generator, ...], Scalar] = {}
    for word, coef in element.items():
        for position, letter in enumerate(word):
            tagged = (
                word[:position] + (letter.with_partial(label),) + word[position + 1 :]
            )
            result[tagged] = result.get(tagged, ZERO) + coef
    return Element(result)


def sort_basis(positions: Iterable[int]) -> Tuple[int, Basis]:
    """(sign, sorted basis) for a wedge of differentials, sign 0 on repeats"""
    items = list(positions)
    if len(set(items)) != len(items):
        return 0, ()
    basis = tuple(sorted(items))
    if len(items) < 2:
        return 1, basis
    order = sorted(range(len(items)), key=items.__getitem__)
    return (-1 if Permutation(order).parity() else 1), basis


# Coefficient rings


class Coefficients(ABC):
    """The ring the coefficients of a form live in"""

    commutative: bool

    @abstractmethod
    def zero(self) -> Coefficient: ...

    @abstractmethod
    def one(self) -> Coefficient: ...

    @abstractmethod
    def field(
        self, coords: CoordinateSystem, name: str, *indices: int
    ) -> Coefficient:
        """The formal function symbol name[indices] on these coordinates"""

    @abstractmethod
    def partial(
        self, value: Coefficient, coords: CoordinateSystem, position: int
    ) -> Coefficient: ...

    @abstractmethod
    def reduce(self, value: Coefficient) -> Coefficient: ...

    @abstractmethod
    def render(self, value: Coefficient) -> str: ...

    @abstractmethod
    def check(
        self,
        identity: str,
        value: Coefficient,
        indices: Sequence[int] = (),
        subject: str = "",
        note: Optional[str] = None,
    ) -> CheckResult:
        """CheckResult for a residual that must vanish"""

    def is_zero(self, value: Coefficient) -> bool:
        return self.reduce(value) == self.zero()


@dataclass(frozen=True)
class SympyCoefficients(Coefficients):
    commutative = True

    def zero(self) -> sp.Expr:
        return sp.Integer(0)

    def one(self) -> sp.Expr:
        return sp.Integer(1)

    def field(self, coords: CoordinateSystem, name: str, *indices: int) -> sp.Expr:
        return sp.Function(str(Generator(name, indices)))(*coords.symbols)

    def partial(
        self, value: Coefficient, coords: CoordinateSystem, position: int
    ) -> sp.Expr:
        return sp.diff(value, coords.symbol(position))

    def reduce(self, value: Coefficient) -> sp.Expr:
        return sp.expand(value)

    def render(self, value: Coefficient) -> str:
        """F(x, y, z, t) prints as F and its x-derivative as F_{x}"""
        expr = sp.expand(value)
        names: Dict[sp.Expr, sp.Symbol] = {}
        for derivative in expr.atoms(sp.Derivative):
            labels = sorted(
                str(variable)
                for variable, count in derivative.variable_count
                for _ in range(count)
            )
            tagged = f"{derivative.expr.func.__name__}_{{{','.join(labels)}}}"
            names[derivative] = sp.Symbol(tagged)
        for applied in expr.atoms(AppliedUndef):
            names[applied] = sp.Symbol(applied.func.__name__)
        return str(expr.xreplace(names))

    def check(
        self,
        identity: str,
        value: Coefficient,
        indices: Sequence[int] = (),
        subject: str = "",
        note: Optional[str] = None,
    ) -> CheckResult:
        residual = self.reduce(value)
        return CheckResult(
            identity=identity,
            indices=list(indices),
            subject=subject,
            residual=self.render(residual),
            passed=residual == 0,
            note=note,
        )


@dataclass(frozen=True)
class ElementCoefficients(Coefficients):
    world: World
    commutative = False

    def zero(self) -> Element:
        return Element.zero()

    def one(self) -> Element:
        return Element.one()

    def field(self, coords: CoordinateSystem, name: str, *indices: int) -> Element:
        return symbol(name, *indices)

    def partial(
        self, value: Coefficient, coords: CoordinateSystem, position: int
    ) -> Element:
        return partial_derivative(value, coords.symbol_name(position))

    def reduce(self, value: Coefficient) -> Element:
        return normalize(value, self.world)

    def render(self, value: Coefficient) -> str:
        return render(value, self.world)

    def check(
        self,
        identity: str,
        value: Coefficient,
        indices: Sequence[int] = (),
        subject: str = "",
        note: Optional[str] = None,
    ) -> CheckResult:
        return CheckResult.of(
            identity, self.reduce(value), self.world, indices, subject, note
        )


def commutative_coefficients() -> SympyCoefficients:
    return SympyCoefficients()


def free_coefficients() -> ElementCoefficients:
    return ElementCoefficients(open_free_world("forms-free"))


def symbol(name: str, *indices: int, partials: Sequence[str] = ()) -> Element:
    """A formal function symbol such as F, A[2] or A[2] with d/dx1 applied"""
    return Element.gen(Generator(name, indices, partials))


# Forms


class DifferentialForm:
    """Immutable sum of coefficient * basis terms over one coordinate system"""

    __slots__ = ("coords", "coefficients", "_terms")

    def __init__(
        self,
        coords: CoordinateSystem,
        coefficients: Coefficients,
        terms: Union[Mapping[Basis, Coefficient], None] = None,
    ):
        self.coords = coords
        self.coefficients = coefficients
        collected: Dict[Basis, Coefficient] = {}
        for positions, coef in (terms or {}).items():
            sign, basis = sort_basis(positions)
            if not sign:
                continue
            collected[basis] = collected.get(basis, coefficients.zero()) + coef * sign
        self._terms: Dict[Basis, Coefficient] = {}
        for basis, coef in collected.items():
            value = coefficients.reduce(coef)
            if value != coefficients.zero():
                self._terms[basis] = value

    # Constructors

    @classmethod
    def zero(
        cls, coords: CoordinateSystem, coefficients: Coefficients
    ) -> "DifferentialForm":
        return cls(coords, coefficients)

    @classmethod
    def function(
        cls, coords: CoordinateSystem, coefficients: Coefficients, value: Coefficient
    ) -> "DifferentialForm":
        return cls(coords, coefficients, {(): value})

    @classmethod
    def differential(
        cls, coords: CoordinateSystem, coefficients: Coefficients, label: str
    ) -> "DifferentialForm":
        basis = (coords.position(label),)
        return cls(coords, coefficients, {basis: coefficients.one()})

    @classmethod
    def one_form(
        cls,
        coords: CoordinateSystem,
        coefficients: Coefficients,
        components: Mapping[str, Coefficient],
    ) -> "DifferentialForm":
        return cls(
            coords,
            coefficients,
            {(coords.position(label),): value for label, value in components.items()},
        )

    # Inspection

    @property
    def is_commutative(self) -> bool:
        return self.coefficients.commutative

    def items(self) -> Iterator[Tuple[Basis, Coefficient]]:
        return iter(
            sorted(self._terms.items(), key=lambda item: (len(item[0]), item[0]))
        )

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({len(basis) for basis in self._terms}))

    def coefficient(self, *labels: str) -> Coefficient:
        """Coefficient of d<labels[0]>^d<labels[1]>^..., sign-adjusted"""
        sign, basis = sort_basis(self.coords.position(label) for label in labels)
        zero = self.coefficients.zero()
        if not sign:
            return zero
        return self._terms.get(basis, zero) * sign

    def map_coefficients(self, fn) -> "DifferentialForm":
        return DifferentialForm(
            self.coords, self.coefficients, {b: fn(c) for b, c in self._terms.items()}
        )

    # Arithmetic

    def _check(self, other: "DifferentialForm") -> None:
        if self.is_commutative != other.is_commutative:
            raise MixedMode()
        if self.coefficients != other.coefficients:
            raise ValueError("forms use different coefficient rings")
        if self.coords != other.coords:
            raise ValueError("forms live on different coordinate systems")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        zero = self.coefficients.zero()
        merged: Dict[Basis, Coefficient] = dict(self._terms)
        for basis, coef in other._terms.items():
            merged[basis] = merged.get(basis, zero) + coef
        return DifferentialForm(self.coords, self.coefficients, merged)

    def __neg__(self) -> "DifferentialForm":
        return self.map_coefficients(lambda c: -c)

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def scale(
        self, factor: Union[Element, sp.Expr, Scalar, Number]
    ) -> "DifferentialForm":
        """Left multiplication of every coefficient"""
        if isinstance(factor, (Element, sp.Basic)):
            return self.map_coefficients(lambda c: factor * c)
        return self.map_coefficients(lambda c: c * factor)

    # Protocol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self.coords == other.coords and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.coords, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"DifferentialForm({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for basis, coef in self.items():
            body = f"({self.coefficients.render(coef)})"
            if basis:
                names = (self.coords.differential_name(p) for p in basis)
                body += " " + "^".join(names)
            parts.append(body)
        return " + ".join(parts)


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Graded product; coefficients multiply in the mode's own product"""
    a._check(b)
    zero = a.coefficients.zero()
    terms: Dict[Basis, Coefficient] = {}
    for basis_a, coef_a in a.items():
        for basis_b, coef_b in b.items():
            sign, basis = sort_basis(basis_a + basis_b)
            if not sign:
                continue
            terms[basis] = terms.get(basis, zero) + coef_a * coef_b * sign
    return DifferentialForm(a.coords, a.coefficients, terms)


def exterior_d(a: DifferentialForm) -> DifferentialForm:
    """d(f dI) = sum_c (d f/dc) dc ^ dI"""
    ring = a.coefficients
    terms: Dict[Basis, Coefficient] = {}
    for basis, coef in a.items():
        for position in range(a.coords.dim):
            if position in basis:
                continue
            derivative = ring.partial(coef, a.coords, position)
            if ring.is_zero(derivative):
                continue
            sign, target = sort_basis((position,) + basis)
            terms[target] = terms.get(target, ring.zero()) + derivative * sign
    return DifferentialForm(a.coords, a.coefficients, terms)
