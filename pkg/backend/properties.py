"""
Seeded randomized checks of the algebraic laws every world must respect
(Leibniz, Jacobi, derivations as derivations, exact scalars) and the
leftmost/rightmost confluence witness for the canonical worlds.
"""

import logging
import random
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from algebra import Element, Generator, commutator
from config import config
from derivations import (
    Derivation,
    apply,
    covariant,
    dual_partial,
    hamiltonian,
    partial,
    time_derivative,
)
from discrete import series_world
from errors import IndexOverflow
from models import CheckResult, SuiteReport
from scalars import Scalar
from worlds import (
    World,
    check_dim,
    check_maxlen,
    flat_world,
    gauge_world,
    metric_world,
    normalize,
    potential_world,
    render,
    words_up_to,
)

logger = logging.getLogger(__name__)


def canonical_worlds(dim: int = 2) -> List[World]:
    return [flat_world(dim), gauge_world(dim), metric_world(dim), potential_world(dim)]


def random_element(
    rng: random.Random, letters: Sequence[Generator], maxlen: int, terms: int = 2
) -> Element:
    """A sum of up to ``terms`` random words with small rational coefficients"""
    total = Element.zero()
    for _ in range(rng.randint(1, terms)):
        length = rng.randint(0, maxlen)
        word = tuple(rng.choice(letters) for _ in range(length))
        coef = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
        total = total + Element.word(*word) * coef
    return total


def _aggregate(
    identity: str, world: World, cases: Iterable[Tuple[Element, str]]
) -> CheckResult:
    """One result per identity: the first nonzero residual, or 0"""
    count = 0
    for residual, subject in cases:
        count += 1
        if not residual.is_zero():
            return CheckResult.of(
                identity, residual, world, subject=subject, note=f"after {count} cases"
            )
    return CheckResult.of(identity, Element.zero(), world, note=f"{count} cases")


def _cases_per_world(cases: int, worlds: Sequence[World]) -> int:
    return max(1, -(-cases // len(worlds)))


def leibniz_property_check(
    cases: int = 200, seed: Optional[int] = None, dim: int = 2
) -> SuiteReport:
    """[A*B, C] = [A, C]*B + A*[B, C] on random elements of word length <= 3"""
    rng = random.Random(config.SEED if seed is None else seed)
    worlds = canonical_worlds(dim)
    report = SuiteReport(
        suite="leibniz-property", parameters={"cases": cases, "dim": dim}
    )
    per_world = _cases_per_world(cases, worlds)
    for world in worlds:
        letters = list(world.generators)

        def sample() -> Iterable[Tuple[Element, str]]:
            for _ in range(per_world):
                a, b, c = (random_element(rng, letters, 3) for _ in range(3))
                left = normalize(commutator(a * b, c), world)
                right = normalize(
                    commutator(a, c) * b + a * commutator(b, c), world
                )
                yield normalize(left - right, world), render(a * b, world)

        report.results.append(_aggregate(f"leibniz/{world.name}", world, sample()))
    logger.info("leibniz-property: %s", report.summary)
    return report


def jacobi_property_check(
    cases: int = 200, seed: Optional[int] = None, dim: int = 2
) -> SuiteReport:
    """[[A,B],C] + [[C,A],B] + [[B,C],A] = 0 on random words of length <= 2"""
    rng = random.Random(config.SEED if seed is None else seed)
    worlds = canonical_worlds(dim)
    report = SuiteReport(
        suite="jacobi-property", parameters={"cases": cases, "dim": dim}
    )
    per_world = _cases_per_world(cases, worlds)
    for world in worlds:
        letters = list(world.generators)

        def sample() -> Iterable[Tuple[Element, str]]:
            for _ in range(per_world):
                a, b, c = (random_element(rng, letters, 2, terms=1) for _ in range(3))
                total = (
                    commutator(commutator(a, b), c)
                    + commutator(commutator(c, a), b)
                    + commutator(commutator(b, c), a)
                )
                yield normalize(total, world), render(a, world)

        report.results.append(_aggregate(f"jacobi/{world.name}", world, sample()))
    logger.info("jacobi-property: %s", report.summary)
    return report


def _derivations(world: World) -> List[Derivation]:
    found = [time_derivative(hamiltonian(world))] if world.has_macro("H") else []
    for i in range(1, world.dim + 1):
        found.append(partial(world, i))
        found.append(dual_partial(world, i))
        if world.has_macro("Xdot", (i,)):
            found.append(covariant(world, i))
    return found


def derivation_property_check(
    cases: int = 200, seed: Optional[int] = None, dim: int = 2
) -> SuiteReport:
    """dv(A*B) = dv(A)*B + A*dv(B) for every derivation a world offers"""
    rng = random.Random(config.SEED if seed is None else seed)
    worlds = canonical_worlds(dim)
    report = SuiteReport(
        suite="derivation-property", parameters={"cases": cases, "dim": dim}
    )
    per_world = _cases_per_world(cases, worlds)
    for world in worlds:
        letters = list(world.generators)
        derivations = _derivations(world)

        def sample() -> Iterable[Tuple[Element, str]]:
            for case in range(per_world):
                dv = derivations[case % len(derivations)]
                a, b = (random_element(rng, letters, 3) for _ in range(2))
                residual = apply(dv, a * b, world) - (
                    apply(dv, a, world) * b + a * apply(dv, b, world)
                )
                yield normalize(residual, world), str(dv)

        report.results.append(
            _aggregate(f"derivation-leibniz/{world.name}", world, sample())
        )
    return report


def _rewrite(element: Element, world: World, strategy: str) -> Optional[Element]:
    try:
        return normalize(element, world, strategy)
    except IndexOverflow:
        return None


def confluence_check(dim: int = 2, maxlen: int = 4) -> SuiteReport:
    """
    Leftmost and rightmost rewriting agree on every word up to maxlen. In the
    series worlds a word past the horizon must overflow under both strategies.
    """
    check_dim(dim)
    check_maxlen(maxlen)
    report = SuiteReport(suite="confluence", parameters={"dim": dim, "maxlen": maxlen})
    worlds = [
        (world.name, world)
        for world in (flat_world(dim), gauge_world(dim), potential_world(dim))
    ]
    worlds.append(("series", series_world(dim).world))
    worlds.append(("series-commuting", series_world(dim, commuting=True).world))
    for label, world in worlds:
        words = words_up_to(world.generators, maxlen)

        def sample() -> Iterable[Tuple[Element, str]]:
            for word in words:
                element = Element.word(*word)
                left = _rewrite(element, world, "leftmost")
                right = _rewrite(element, world, "rightmost")
                if left is None and right is None:
                    residual = Element.zero()
                elif left is None or right is None:
                    residual = element
                else:
                    residual = left - right
                yield residual, "*".join(map(str, word))

        report.results.append(_aggregate(f"confluence/{label}", world, sample()))
    logger.info("confluence: %s", report.summary)
    return report


def _random_rational(rng: random.Random) -> Scalar:
    numerator = rng.choice([-1, 1]) * rng.randint(1, 50)
    return Scalar.rational(numerator, rng.randint(1, 50))


def scalar_property_check(
    cases: int = 200, seed: Optional[int] = None
) -> SuiteReport:
    """(a/b)*(b/a) = 1 exactly and Laurent exponents add"""
    rng = random.Random(config.SEED if seed is None else seed)
    report = SuiteReport(suite="scalar-property", parameters={"cases": cases})
    failures: List[str] = []
    params = ["tau", "h", "hbar"]
    for _ in range(cases):
        a, b = _random_rational(rng), _random_rational(rng)
        if not ((a / b) * (b / a)).is_one():
            failures.append(f"{a}, {b}")
        name = rng.choice(params)
        m, n = rng.randint(-4, 4), rng.randint(-4, 4)
        if Scalar.param(name, m) * Scalar.param(name, n) != Scalar.param(name, m + n):
            failures.append(f"{name}^{m} * {name}^{n}")
    report.results.append(
        CheckResult(
            identity="scalar-exact",
            residual="0" if not failures else failures[0],
            passed=not failures,
            note=f"{cases} cases",
        )
    )
    return report
