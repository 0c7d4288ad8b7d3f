"""
Exact scalars: Laurent polynomials in commuting parameter symbols
(tau, h, hbar, Delta, k, ...) with Gaussian-rational coefficients.

Division is only defined by monomials, so arithmetic stays exact and
equality stays decidable.
"""

from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Set, Tuple, Union

from errors import NotInvertible, UnassignedParameter

# Sorted (parameter, exponent) pairs; exponents are nonzero and may be negative
Monomial = Tuple[Tuple[str, int], ...]
Number = Union[int, Fraction]

UNIT_MONOMIAL: Monomial = ()


class Gaussian(NamedTuple):
    """Exact complex rational re + im*i"""

    re: Fraction
    im: Fraction = Fraction(0)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def plus(self, other: "Gaussian") -> "Gaussian":
        return Gaussian(self.re + other.re, self.im + other.im)

    def times(self, other: "Gaussian") -> "Gaussian":
        if not self.im and not other.im:
            return Gaussian(self.re * other.re, Fraction(0))
        return Gaussian(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def negated(self) -> "Gaussian":
        return Gaussian(-self.re, -self.im)

    def inverse(self) -> "Gaussian":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise NotInvertible("division by zero")
        return Gaussian(self.re / norm, -self.im / norm)


ZERO_G = Gaussian(Fraction(0), Fraction(0))
ONE_G = Gaussian(Fraction(1), Fraction(0))


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exponents: Dict[str, int] = dict(a)
    for name, exp in b:
        exponents[name] = exponents.get(name, 0) + exp
    return tuple(sorted((n, e) for n, e in exponents.items() if e))


class Scalar:
    """Immutable Laurent polynomial over the Gaussian rationals"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Gaussian]] = None):
        cleaned: Dict[Monomial, Gaussian] = {}
        for mono, coef in (terms or {}).items():
            key = tuple(sorted((n, e) for n, e in mono if e))
            total = cleaned.get(key, ZERO_G).plus(coef)
            if total.is_zero():
                cleaned.pop(key, None)
            else:
                cleaned[key] = total
        self._terms = cleaned

    @classmethod
    def _trusted(cls, terms: Dict[Monomial, Gaussian]) -> "Scalar":
        scalar = object.__new__(cls)
        scalar._terms = terms
        return scalar

    # Constructors

    @classmethod
    def of(cls, value: Union["Scalar", Number]) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        raise TypeError(f"cannot make a Scalar from {value!r}")

    @classmethod
    def rational(cls, numerator: Number, denominator: Number = 1) -> "Scalar":
        value = Fraction(numerator) / Fraction(denominator)
        if not value:
            return ZERO
        return cls._trusted({UNIT_MONOMIAL: Gaussian(value, Fraction(0))})

    @classmethod
    def gaussian(cls, re: Number, im: Number = 0) -> "Scalar":
        return cls({UNIT_MONOMIAL: Gaussian(Fraction(re), Fraction(im))})

    @classmethod
    def imaginary(cls, value: Number = 1) -> "Scalar":
        return cls.gaussian(0, value)

    @classmethod
    def param(cls, name: str, exponent: int = 1) -> "Scalar":
        if not exponent:
            return ONE
        return cls._trusted({((name, exponent),): ONE_G})

    # Inspection

    @property
    def terms(self) -> Mapping[Monomial, Gaussian]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == {UNIT_MONOMIAL: ONE_G}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def is_real(self) -> bool:
        return all(not coef.im for coef in self._terms.values())

    def constant(self) -> Gaussian:
        return self._terms.get(UNIT_MONOMIAL, ZERO_G)

    def parameters(self) -> Set[str]:
        return {name for mono in self._terms for name, _ in mono}

    # Arithmetic

    def __add__(self, other: Union["Scalar", Number]) -> "Scalar":
        other = _coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        merged = dict(self._terms)
        for mono, coef in other._terms.items():
            total = merged.get(mono, ZERO_G).plus(coef)
            if total.is_zero():
                merged.pop(mono, None)
            else:
                merged[mono] = total
        return Scalar._trusted(merged)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._trusted({m: c.negated() for m, c in self._terms.items()})

    def __sub__(self, other: Union["Scalar", Number]) -> "Scalar":
        return self + (-_coerce(other))

    def __rsub__(self, other: Number) -> "Scalar":
        return _coerce(other) - self

    def __mul__(self, other: Union["Scalar", Number]) -> "Scalar":
        other = _coerce(other)
        if other.is_one():
            return self
        if self.is_one():
            return other
        product: Dict[Monomial, Gaussian] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = _mul_monomials(ma, mb)
                total = product.get(mono, ZERO_G).plus(ca.times(cb))
                if total.is_zero():
                    product.pop(mono, None)
                else:
                    product[mono] = total
        return Scalar._trusted(product)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """Inverse of a nonzero monomial; anything else is not invertible"""
        if len(self._terms) != 1:
            raise NotInvertible(f"only monomial scalars are invertible, got {self}")
        ((mono, coef),) = self._terms.items()
        inverted = tuple((name, -exp) for name, exp in mono)
        return Scalar._trusted({inverted: coef.inverse()})

    def __truediv__(self, other: Union["Scalar", Number]) -> "Scalar":
        return self * _coerce(other).inverse()

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        for _ in range(exponent):
            result = result * self
        return result

    # Specialization

    def substitute(self, values: Mapping[str, Number]) -> "Scalar":
        """Replace parameters by exact nonzero rationals"""
        result = ZERO
        for mono, coef in self._terms.items():
            factor = Scalar._trusted({UNIT_MONOMIAL: coef})
            kept: List[Tuple[str, int]] = []
            for name, exp in mono:
                if name in values:
                    factor = factor * Scalar.rational(Fraction(values[name]) ** exp)
                else:
                    kept.append((name, exp))
            result = result + factor * Scalar._trusted({tuple(kept): ONE_G})
        return result

    def to_complex(self, values: Optional[Mapping[str, float]] = None) -> complex:
        values = values or {}
        total = 0j
        for mono, coef in self._terms.items():
            term = complex(float(coef.re), float(coef.im))
            for name, exp in mono:
                if name not in values:
                    raise UnassignedParameter(name)
                term *= float(values[name]) ** exp
            total += term
        return total

    # Protocol

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = [render_term(self._terms[m], m, ()) for m in sorted(self._terms)]
        return join_terms(parts)


ZERO = Scalar._trusted({})
ONE = Scalar._trusted({UNIT_MONOMIAL: ONE_G})


def _coerce(value: Union[Scalar, Number]) -> Scalar:
    return value if isinstance(value, Scalar) else Scalar.rational(value)


def _coefficient_factors(coef: Gaussian) -> Tuple[bool, List[str], bool]:
    """(negative, factors, is_unit) for a coefficient in a product"""
    if not coef.im:
        magnitude = abs(coef.re)
        return coef.re < 0, [str(magnitude)], magnitude == 1
    if not coef.re:
        magnitude = abs(coef.im)
        factors = ["i"] if magnitude == 1 else [str(magnitude), "i"]
        return coef.im < 0, factors, False
    sign = "-" if coef.im < 0 else "+"
    imag = "i" if abs(coef.im) == 1 else f"{abs(coef.im)}*i"
    return False, [f"({coef.re} {sign} {imag})"], False


def render_term(
    coef: Gaussian, mono: Monomial, letters: Tuple[str, ...]
) -> Tuple[bool, str]:
    """Render one coefficient*monomial*word term as (negative, body)"""
    negative, factors, is_unit = _coefficient_factors(coef)
    rest = [name if exp == 1 else f"{name}^{exp}" for name, exp in mono]
    rest.extend(letters)
    if is_unit and rest:
        factors = []
    return negative, "*".join(factors + rest)


def join_terms(parts: List[Tuple[bool, str]]) -> str:
    pieces: List[str] = []
    for position, (negative, body) in enumerate(parts):
        if position == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)
