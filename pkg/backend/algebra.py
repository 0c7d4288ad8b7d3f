"""
Free associative algebra: interned generators, words and Elements
(finite Scalar-weighted sums of words), with the commutator.

Nothing in here knows about relations; normal forms live in worlds.py.
"""

import threading
from types import MappingProxyType
from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from scalars import ONE, ZERO, Number, Scalar, join_terms, render_term


class Generator:
    """
    A named generator with up to two small indices (X[1], g[1,2], H) and,
    for formal function symbols, a sorted multi-index of applied partials.

    Generators are interned: equal (name, indices, partials) give the same
    object, so words compare by identity.
    """

    __slots__ = ("name", "indices", "partials", "_hash")

    _interned: Dict[Tuple[str, Tuple[int, ...], Tuple[str, ...]], "Generator"] = {}
    _lock = threading.Lock()

    name: str
    indices: Tuple[int, ...]
    partials: Tuple[str, ...]
    _hash: int

    def __new__(
        cls, name: str, indices: Iterable[int] = (), partials: Iterable[str] = ()
    ) -> "Generator":
        key = (name, tuple(int(i) for i in indices), tuple(sorted(partials)))
        found = cls._interned.get(key)
        if found is not None:
            return found
        with cls._lock:
            found = cls._interned.get(key)
            if found is None:
                found = object.__new__(cls)
                object.__setattr__(found, "name", key[0])
                object.__setattr__(found, "indices", key[1])
                object.__setattr__(found, "partials", key[2])
                object.__setattr__(found, "_hash", hash(key))
                cls._interned[key] = found
        return found

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Generator is immutable")

    def __reduce__(self):
        return (Generator, (self.name, self.indices, self.partials))

    def __hash__(self) -> int:
        return self._hash

    @property
    def sort_key(self) -> Tuple[str, Tuple[int, ...], Tuple[str, ...]]:
        return (self.name, self.indices, self.partials)

    def with_partial(self, label: str) -> "Generator":
        return Generator(self.name, self.indices, self.partials + (label,))

    def __str__(self) -> str:
        text = self.name
        if self.indices:
            text += "[" + ",".join(str(i) for i in self.indices) + "]"
        if self.partials:
            text += "_{" + ",".join(self.partials) + "}"
        return text

    def __repr__(self) -> str:
        return f"Generator({self})"


# A word is a tuple of letters; the empty word is the multiplicative unit.
Word = Tuple[Generator, ...]
UNIT: Word = ()

WordKey = Callable[[Word], tuple]


def natural_key(word: Word) -> tuple:
    """Degree-lex key using the generators' own (name, indices) order"""
    return (len(word), tuple(g.sort_key for g in word))


class Element:
    """Immutable finite sum of Scalar-weighted words; zero terms are never stored"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Word, Union[Scalar, Number]]] = None):
        cleaned: Dict[Word, Scalar] = {}
        for word, coef in (terms or {}).items():
            total = cleaned.get(tuple(word), ZERO) + Scalar.of(coef)
            if total:
                cleaned[tuple(word)] = total
            else:
                cleaned.pop(tuple(word), None)
        self._terms = cleaned

    @classmethod
    def _trusted(cls, terms: Dict[Word, Scalar]) -> "Element":
        element = object.__new__(cls)
        element._terms = terms
        return element

    # Constructors

    @classmethod
    def zero(cls) -> "Element":
        return cls._trusted({})

    @classmethod
    def one(cls) -> "Element":
        return cls._trusted({UNIT: ONE})

    @classmethod
    def scalar(cls, value: Union[Scalar, Number]) -> "Element":
        value = Scalar.of(value)
        return cls._trusted({UNIT: value} if value else {})

    @classmethod
    def gen(cls, generator: Generator) -> "Element":
        return cls._trusted({(generator,): ONE})

    @classmethod
    def word(cls, *letters: Generator) -> "Element":
        return cls._trusted({tuple(letters): ONE})

    # Inspection

    @property
    def terms(self) -> Mapping[Word, Scalar]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[Tuple[Word, Scalar]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(not word for word in self._terms)

    def scalar_part(self) -> Scalar:
        return self._terms.get(UNIT, ZERO)

    def coefficient(self, word: Sequence[Generator]) -> Scalar:
        return self._terms.get(tuple(word), ZERO)

    def generators(self) -> Set[Generator]:
        return {letter for word in self._terms for letter in word}

    def parameters(self) -> Set[str]:
        found: Set[str] = set()
        for coef in self._terms.values():
            found |= coef.parameters()
        return found

    def degree(self) -> int:
        return max((len(word) for word in self._terms), default=0)

    # Arithmetic

    def __add__(self, other: Union["Element", Scalar, Number]) -> "Element":
        other = _coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        merged = dict(self._terms)
        for word, coef in other._terms.items():
            total = merged.get(word, ZERO) + coef
            if total:
                merged[word] = total
            else:
                merged.pop(word, None)
        return Element._trusted(merged)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element._trusted({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: Union["Element", Scalar, Number]) -> "Element":
        return self + (-_coerce(other))

    def __rsub__(self, other: Union[Scalar, Number]) -> "Element":
        return _coerce(other) - self

    def __mul__(self, other: Union["Element", Scalar, Number]) -> "Element":
        if not isinstance(other, Element):
            factor = Scalar.of(other)
            if not factor:
                return Element.zero()
            return Element._trusted({w: c * factor for w, c in self._terms.items()})
        product: Dict[Word, Scalar] = {}
        for wa, ca in self._terms.items():
            for wb, cb in other._terms.items():
                word = wa + wb
                total = product.get(word, ZERO) + ca * cb
                if total:
                    product[word] = total
                else:
                    product.pop(word, None)
        return Element._trusted(product)

    def __rmul__(self, other: Union[Scalar, Number]) -> "Element":
        return self * other

    def __truediv__(self, other: Union[Scalar, Number]) -> "Element":
        return self * Scalar.of(other).inverse()

    def __pow__(self, exponent: int) -> "Element":
        if exponent < 0:
            raise ValueError("negative powers of elements are not defined")
        result = Element.one()
        for _ in range(exponent):
            result = result * self
        return result

    # Transformations

    def substitute(self, mapping: Mapping[Generator, "Element"]) -> "Element":
        """Replace letters by elements (an algebra homomorphism on words)"""
        result = Element.zero()
        for word, coef in self._terms.items():
            term = Element.scalar(coef)
            for letter in word:
                replacement = mapping.get(letter)
                term = term * (
                    Element.gen(letter) if replacement is None else replacement
                )
            result = result + term
        return result

    def map_scalars(self, fn: Callable[[Scalar], Scalar]) -> "Element":
        return Element({w: fn(c) for w, c in self._terms.items()})

    # Protocol

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Scalar)):
            other = Element.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"Element({render_element(self)})"

    def __str__(self) -> str:
        return render_element(self)


def _coerce(value: Union[Element, Scalar, Number]) -> Element:
    return value if isinstance(value, Element) else Element.scalar(value)


def commutator(a: Element, b: Element) -> Element:
    """[a, b] = a*b - b*a in the free algebra (not normalized)"""
    return a * b - b * a


def render_element(element: Element, key: WordKey = natural_key) -> str:
    """
    Deterministic text: longer words first, then lexicographic in the given
    generator order; scalars as exact fractions, e.g. ``X[1]*P[1] - 1``.
    """
    if element.is_zero():
        return "0"
    ordered = sorted(element.items(), key=lambda item: _render_order(key(item[0])))
    parts = []
    for word, coef in ordered:
        letters = tuple(str(letter) for letter in word)
        if coef.is_monomial():
            ((mono, value),) = coef.terms.items()
            parts.append(render_term(value, mono, letters))
        else:
            body = f"({coef})"
            if letters:
                body += "*" + "*".join(letters)
            parts.append((False, body))
    return join_terms(parts)


def _render_order(key: tuple) -> tuple:
    length, rest = key[0], key[1:]
    return (-length,) + rest
