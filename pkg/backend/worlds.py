"""
Worlds: a generator set, a total generator order and commutation relations
oriented into length-2 rewrite rules. The world fixes the normal form.

Every rule must strictly decrease the degree-lex order induced by the
generator order, which guarantees termination of rewriting. Confluence is
only guaranteed for the builders below; equality checks in user worlds are
sound up to the user's rule set being confluent (the matrix oracle is an
independent check of relation-free identities).

A world may also declare bound pairs: adjacent letters whose rewrite would
need a generator past a finite index horizon (X[N]*J in a series world).
A normal form containing a bound pair raises IndexOverflow, so truncated
worlds fail the same way under every rewriting strategy.
"""

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from algebra import UNIT, Element, Generator, Word, natural_key, render_element
from config import config
from errors import (
    AdmissibilityError,
    DimOutOfRange,
    EmptyGeneratorList,
    IndexOverflow,
    LengthOutOfRange,
    UnknownGenerator,
)
from scalars import ZERO, Scalar

logger = logging.getLogger(__name__)

CLOSED = "closed"
OPEN_FREE = "open-free"
OPEN_COMMUTATIVE = "open-commutative"


def canonical_generator(
    symmetric: Mapping[str, Tuple[int, ...]], name: str, indices: Sequence[int]
) -> Generator:
    """Generator with symmetric index positions sorted (g[2,1] -> g[1,2])"""
    indices = tuple(indices)
    positions = symmetric.get(name)
    if positions and max(positions) < len(indices):
        values = sorted(indices[p] for p in positions)
        patched = list(indices)
        for p, v in zip(positions, values):
            patched[p] = v
        indices = tuple(patched)
    return Generator(name, indices)


Pair = Tuple[Generator, Generator]


@dataclass(frozen=True)
class RewriteRule:
    """lhs (a descending adjacent pair) rewrites to the strictly smaller rhs"""

    lhs: Word
    rhs: Element

    def render(self, world: Optional["World"] = None) -> str:
        left = "*".join(str(g) for g in self.lhs)
        right = render(self.rhs, world) if world else str(self.rhs)
        return f"{left} -> {right}"


class World:
    """Immutable world definition; construction checks admissibility"""

    def __init__(
        self,
        name: str,
        dim: int,
        generators: Sequence[Generator] = (),
        rules: Iterable[RewriteRule] = (),
        params: Sequence[str] = (),
        macros: Optional[Mapping[str, Mapping[Tuple[int, ...], Element]]] = None,
        symmetric: Optional[Mapping[str, Tuple[int, ...]]] = None,
        kind: str = CLOSED,
        bounds: Optional[Mapping[Pair, Tuple[int, int]]] = None,
    ):
        self.name = name
        self.dim = dim
        self.kind = kind
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self.params: Tuple[str, ...] = tuple(params)
        self.symmetric: Dict[str, Tuple[int, ...]] = dict(symmetric or {})
        self.rank: Dict[Generator, int] = {g: r for r, g in enumerate(self.generators)}
        if len(self.rank) != len(self.generators):
            raise AdmissibilityError("order", "a generator is listed twice")
        self.rules: Dict[Pair, RewriteRule] = {}
        for rule in rules:
            self._admit(rule)
        self.macros: Dict[str, Dict[Tuple[int, ...], Element]] = {
            name: dict(table) for name, table in (macros or {}).items()
        }
        # pair -> (index it would need, horizon)
        self.bounds: Dict[Pair, Tuple[int, int]] = dict(bounds or {})
        for pair in self.bounds:
            if pair in self.rules:
                raise AdmissibilityError(
                    self.rules[pair].render(), "pair is also declared as bound"
                )

    def _admit(self, rule: RewriteRule) -> None:
        text = rule.render()
        if len(rule.lhs) != 2:
            raise AdmissibilityError(text, "left-hand side must have length 2")
        for letter in list(rule.lhs) + [g for w in rule.rhs.terms for g in w]:
            if self.kind == CLOSED and letter not in self.rank:
                raise AdmissibilityError(text, f"generator {letter} is not declared")
        lhs_key = self.word_key(rule.lhs)
        if lhs_key[1][0] <= lhs_key[1][1]:
            raise AdmissibilityError(text, "left-hand side is not a descending pair")
        for word in rule.rhs.terms:
            if not self.word_key(word) < lhs_key:
                raise AdmissibilityError(
                    text, f"term {'*'.join(map(str, word)) or '1'} is not smaller"
                )
        existing = self.rules.get((rule.lhs[0], rule.lhs[1]))
        if existing is not None and existing.rhs != rule.rhs:
            raise AdmissibilityError(text, f"conflicts with {existing.render()}")
        self.rules[(rule.lhs[0], rule.lhs[1])] = rule

    # Order

    @property
    def is_open(self) -> bool:
        return self.kind != CLOSED

    @property
    def is_commutative(self) -> bool:
        return self.kind == OPEN_COMMUTATIVE

    def word_key(self, word: Word) -> tuple:
        """Degree-lex key in this world's generator order"""
        if self.is_open:
            return natural_key(word)
        try:
            return (len(word), tuple(self.rank[g] for g in word))
        except KeyError as missing:
            raise UnknownGenerator(str(missing.args[0]), self.name) from None

    # Lookup

    def canonical(self, name: str, indices: Sequence[int]) -> Generator:
        return canonical_generator(self.symmetric, name, indices)

    def generator(self, name: str, *indices: int) -> Generator:
        found = self.canonical(name, indices)
        if not self.is_open and found not in self.rank:
            raise UnknownGenerator(str(found), self.name)
        return found

    def gen(self, name: str, *indices: int) -> Element:
        return Element.gen(self.generator(name, *indices))

    def has_generator(self, generator: Generator) -> bool:
        return self.is_open or generator in self.rank

    def family(self, name: str) -> List[Generator]:
        return [g for g in self.generators if g.name == name]

    def macro(self, name: str, *indices: int) -> Element:
        table = self.macros.get(name)
        if table is None or tuple(indices) not in table:
            raise UnknownGenerator(
                name + (f"[{','.join(map(str, indices))}]" if indices else ""),
                self.name,
            )
        return table[tuple(indices)]

    def has_macro(self, name: str, indices: Sequence[int] = ()) -> bool:
        return tuple(indices) in self.macros.get(name, {})

    # Protocol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, World):
            return NotImplemented
        return (
            self.name == other.name
            and self.dim == other.dim
            and self.kind == other.kind
            and self.generators == other.generators
            and self.params == other.params
            and self.symmetric == other.symmetric
            and self.rules == other.rules
            and self.macros == other.macros
            and self.bounds == other.bounds
        )

    def __hash__(self) -> int:
        return hash((self.name, self.dim, self.generators))

    def __repr__(self) -> str:
        return (
            f"World({self.name!r}, dim={self.dim}, "
            f"{len(self.generators)} generators, {len(self.rules)} rules)"
        )


# Normal forms


class _Largest:
    """Heap entry that pops the largest degree-lex key first"""

    __slots__ = ("key", "word")

    def __init__(self, key: tuple, word: Word):
        self.key = key
        self.word = word

    def __lt__(self, other: "_Largest") -> bool:
        return self.key > other.key


def normalize(element: Element, world: World, strategy: str = "leftmost") -> Element:
    """
    Exhaustive rewriting to the normal form.

    Words are expanded largest-first in degree-lex order; every rewrite
    produces strictly smaller words, so each word is expanded at most once
    and coefficients are collected before expansion. ``strategy`` picks the
    leftmost or rightmost redex inside a word. Any word that reaches a bound
    pair raises IndexOverflow, even if its coefficient later cancels.
    """
    if world.is_commutative:
        return _sort_letters(element, world)
    if not world.rules:
        for word in element.terms:
            world.word_key(word)
            _check_bounds(word, world.bounds)
        return element

    rules = world.rules
    pending: Dict[Word, Scalar] = {}
    heap: List[_Largest] = []

    def push(word: Word, coef: Scalar) -> None:
        if word in pending:
            pending[word] = pending[word] + coef
            return
        _check_bounds(word, world.bounds)
        pending[word] = coef
        heapq.heappush(heap, _Largest(world.word_key(word), word))

    for word, coef in element.items():
        push(word, coef)

    result: Dict[Word, Scalar] = {}
    rewrites = 0
    while heap:
        word = heapq.heappop(heap).word
        coef = pending.pop(word)
        if not coef:
            continue
        position = _find_redex(word, rules, strategy)
        if position is None:
            result[word] = coef
            continue
        rewrites += 1
        rule = rules[(word[position], word[position + 1])]
        prefix, suffix = word[:position], word[position + 2 :]
        for replacement, factor in rule.rhs.items():
            push(prefix + replacement + suffix, coef * factor)
    logger.debug("normalized %d terms with %d rewrites", len(element.terms), rewrites)
    return Element._trusted(result)


def _check_bounds(word: Word, bounds: Mapping[Pair, Tuple[int, int]]) -> None:
    if not bounds:
        return
    for pair in zip(word, word[1:]):
        if pair in bounds:
            raise IndexOverflow(*bounds[pair])


def _find_redex(
    word: Word, rules: Mapping[Pair, RewriteRule], strategy: str
) -> Optional[int]:
    positions = range(len(word) - 1)
    if strategy == "rightmost":
        positions = reversed(positions)  # type: ignore[assignment]
    elif strategy != "leftmost":
        raise ValueError(f"unknown rewriting strategy '{strategy}'")
    for k in positions:
        if (word[k], word[k + 1]) in rules:
            return k
    return None


def _sort_letters(element: Element, world: World) -> Element:
    collected: Dict[Word, Scalar] = {}
    for word, coef in element.items():
        ordered = tuple(sorted(word, key=lambda g: g.sort_key))
        collected[ordered] = collected.get(ordered, ZERO) + coef
    return Element(collected)


def is_zero(element: Element, world: World) -> bool:
    return normalize(element, world).is_zero()


def render(element: Element, world: Optional[World] = None) -> str:
    """Golden-file rendering in the world's generator order"""
    if world is None or world.is_open:
        return render_element(element)
    return render_element(element, world.word_key)


# Construction


class WorldBuilder:
    """
    Collects generators, relations, rules and macros, then builds a World.
    Relations [a,b] = v are oriented by the final generator order.
    """

    def __init__(self, name: str, dim: int, kind: str = CLOSED):
        self.name = name
        self.dim = dim
        self.kind = kind
        self.generators: List[Generator] = []
        self.params: List[str] = []
        self.symmetric: Dict[str, Tuple[int, ...]] = {}
        self.relations: List[Tuple[Generator, Generator, Element]] = []
        self.rules: List[RewriteRule] = []
        self.macros: Dict[str, Dict[Tuple[int, ...], Element]] = {}
        self.bounds: Dict[Pair, Tuple[int, int]] = {}
        self.order: Optional[List[Generator]] = None

    def canonical(self, name: str, indices: Sequence[int]) -> Generator:
        return canonical_generator(self.symmetric, name, indices)

    def declare(self, name: str, *indices: int) -> Generator:
        generator = self.canonical(name, indices)
        if generator not in self.generators:
            self.generators.append(generator)
        return generator

    def param(self, name: str) -> None:
        if name not in self.params:
            self.params.append(name)

    def relate(self, a: Generator, b: Generator, value: Element) -> None:
        self.relations.append((a, b, value))

    def commute(self, a: Generator, b: Generator) -> None:
        self.relate(a, b, Element.zero())

    def rule(self, lhs: Word, rhs: Element) -> None:
        self.rules.append(RewriteRule(tuple(lhs), rhs))

    def define(self, name: str, indices: Sequence[int], value: Element) -> None:
        self.macros.setdefault(name, {})[tuple(indices)] = value

    def bound(self, a: Generator, b: Generator) -> None:
        """
        Mark a*b as running off the index horizon: the first indexed letter
        would need its last index raised past the largest declared one.
        """
        edge = a if a.indices else b
        if not edge.indices:
            raise AdmissibilityError(f"{a}*{b}", "bound pair has no indexed letter")
        horizon = max(
            (
                g.indices[-1]
                for g in self.generators
                if g.name == edge.name and len(g.indices) == len(edge.indices)
            ),
            default=edge.indices[-1],
        )
        self.bounds[(a, b)] = (edge.indices[-1] + 1, horizon)

    def has(self, generator: Generator) -> bool:
        return self.kind != CLOSED or generator in self.generators

    def build(self) -> World:
        order = self.order if self.order is not None else self.generators
        rank = {g: r for r, g in enumerate(order)}
        rules = list(self.rules)
        for a, b, value in self.relations:
            if a is b:
                if value:
                    raise AdmissibilityError(
                        f"[{a},{b}] = {value}", "a generator commutes with itself"
                    )
                continue
            if a not in rank or b not in rank:
                missing = a if a not in rank else b
                raise AdmissibilityError(
                    f"[{a},{b}] = {value}", f"generator {missing} is not declared"
                )
            if rank[a] > rank[b]:
                rules.append(RewriteRule((a, b), Element.word(b, a) + value))
            else:
                rules.append(RewriteRule((b, a), Element.word(a, b) - value))
        bare = World(
            self.name,
            self.dim,
            order,
            rules,
            self.params,
            symmetric=self.symmetric,
            kind=self.kind,
            bounds=self.bounds,
        )
        macros = {
            name: {idx: normalize(value, bare) for idx, value in table.items()}
            for name, table in self.macros.items()
        }
        world = World(
            self.name,
            self.dim,
            order,
            bare.rules.values(),
            self.params,
            macros,
            self.symmetric,
            self.kind,
            self.bounds,
        )
        logger.info("built %r", world)
        return world


def check_dim(dim: int) -> None:
    if not 1 <= dim <= config.MAX_DIM:
        raise DimOutOfRange(dim, 1, config.MAX_DIM)


def check_maxlen(maxlen: int) -> None:
    if maxlen < 1:
        raise LengthOutOfRange(maxlen)


def _declare_flat(
    builder: WorldBuilder, dim: int
) -> Tuple[List[Generator], List[Generator]]:
    xs = [builder.declare("X", i) for i in range(1, dim + 1)]
    ps = [builder.declare("P", i) for i in range(1, dim + 1)]
    return xs, ps


def _relate_flat(
    builder: WorldBuilder, xs: List[Generator], ps: List[Generator]
) -> None:
    for i, xi in enumerate(xs):
        for j, xj in enumerate(xs):
            if i < j:
                builder.commute(xi, xj)
                builder.commute(ps[i], ps[j])
        for j, pj in enumerate(ps):
            builder.relate(xi, pj, Element.one() if i == j else Element.zero())


def _kinetic(ps: Sequence[Generator]) -> Element:
    total = Element.zero()
    for p in ps:
        total = total + Element.word(p, p)
    return total * Fraction(1, 2)


def flat_world(dim: int) -> World:
    """X[1..d], P[1..d] with [X_i,X_j] = [P_i,P_j] = 0 and [X_i,P_j] = delta_ij"""
    check_dim(dim)
    builder = WorldBuilder("flat", dim)
    xs, ps = _declare_flat(builder, dim)
    _relate_flat(builder, xs, ps)
    return builder.build()


def gauge_world(dim: int) -> World:
    """Flat coordinates plus free potentials A[1..d]; Xdot[i] := P[i] - A[i]"""
    check_dim(dim)
    builder = WorldBuilder("gauge", dim)
    xs, ps = _declare_flat(builder, dim)
    gauge = [builder.declare("A", i) for i in range(1, dim + 1)]
    _relate_flat(builder, xs, ps)
    for i in range(dim):
        builder.define("Xdot", (i + 1,), Element.gen(ps[i]) - Element.gen(gauge[i]))
    return builder.build()


def metric_world(dim: int) -> World:
    """
    Flat coordinates plus central symmetric metric generators g[i,j] (i <= j).
    The g's come first in the order so centrality collects them on the left.
    H := (1/2) * sum_ij g_ij P_i P_j.
    """
    check_dim(dim)
    builder = WorldBuilder("metric", dim)
    builder.symmetric["g"] = (0, 1)
    metric = [
        builder.declare("g", i, j)
        for i in range(1, dim + 1)
        for j in range(i, dim + 1)
    ]
    xs, ps = _declare_flat(builder, dim)
    _relate_flat(builder, xs, ps)
    for position, g in enumerate(metric):
        for other in metric[position + 1 :]:
            builder.commute(g, other)
        for letter in xs + ps:
            builder.commute(g, letter)
    hamiltonian = Element.zero()
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            g = builder.canonical("g", (i, j))
            hamiltonian = hamiltonian + Element.word(g, ps[i - 1], ps[j - 1])
    builder.define("H", (), hamiltonian * Fraction(1, 2))
    return builder.build()


def free_world(generators: Sequence[Generator], dim: Optional[int] = None) -> World:
    """The free algebra on the given generators: no relations at all"""
    if not generators:
        raise EmptyGeneratorList()
    builder = WorldBuilder("free", dim if dim is not None else len(generators))
    for g in generators:
        builder.declare(g.name, *g.indices)
    return builder.build()


def potential_world(dim: int) -> World:
    """
    Flat coordinates plus a potential V with [V, X_i] = 0 (V and P do not
    commute). Order X < V < P keeps the system confluent.
    H := (1/2) * sum P_i^2 + V.
    """
    check_dim(dim)
    builder = WorldBuilder("potential", dim)
    xs = [builder.declare("X", i) for i in range(1, dim + 1)]
    potential = builder.declare("V")
    ps = [builder.declare("P", i) for i in range(1, dim + 1)]
    _relate_flat(builder, xs, ps)
    for x in xs:
        builder.commute(potential, x)
    builder.define("H", (), _kinetic(ps) + Element.gen(potential))
    return builder.build()


def commuting_coordinates_world(dim: int) -> World:
    """X[1..d] and a free H with only [X_i, X_j] = 0"""
    check_dim(dim)
    builder = WorldBuilder("coordinates", dim)
    xs = [builder.declare("X", i) for i in range(1, dim + 1)]
    builder.declare("H")
    for i, xi in enumerate(xs):
        for xj in xs[i + 1 :]:
            builder.commute(xi, xj)
    return builder.build()


def commutative_world(name: str = "commutative") -> World:
    """Open world in which all letters commute"""
    return World(name, 1, kind=OPEN_COMMUTATIVE)


def open_free_world(name: str = "open-free") -> World:
    """Open world with no relations and no declared generator list"""
    return World(name, 1, kind=OPEN_FREE)


def words_up_to(letters: Sequence[Generator], maxlen: int) -> List[Word]:
    """All words of length <= maxlen over the given letters, shortest first"""
    letters = list(letters)
    words: List[Word] = [UNIT]
    frontier: List[Word] = [UNIT]
    for _ in range(maxlen):
        frontier = [w + (g,) for w in frontier for g in letters]
        words.extend(frontier)
    return words
